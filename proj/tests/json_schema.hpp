#pragma once
// Just enough JSON Schema (2020-12) to check the report schemas in schemas/:
// type, const, enum, required, properties, additionalProperties, items, minItems,
// maxItems, pattern, minimum, exclusiveMinimum, oneOf, propertyNames.

#include <regex>
#include <string>
#include <vector>

#include "json.hpp"

namespace schema_check {

using json = nlohmann::ordered_json;

inline bool has_type(const json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "integer") return v.is_number_integer() || (v.is_number_float() && v.get<double>() == static_cast<long long>(v.get<double>()));
  if (t == "number") return v.is_number();
  return false;
}

inline void validate(const json& v, const json& s, const std::string& path, std::vector<std::string>& errors) {
  auto fail = [&](const std::string& what) { errors.push_back((path.empty() ? "/" : path) + ": " + what); };
  if (s.is_boolean()) {
    if (!s.get<bool>()) fail("not allowed");
    return;
  }
  if (s.contains("type")) {
    const auto& t = s["type"];
    bool ok = false;
    if (t.is_string()) ok = has_type(v, t);
    else
      for (const auto& x : t) ok |= has_type(v, x);
    if (!ok) {
      fail("expected type " + t.dump() + ", got " + v.dump().substr(0, 60));
      return;
    }
  }
  if (s.contains("const") && v != s["const"]) fail("expected " + s["const"].dump());
  if (s.contains("enum")) {
    bool ok = false;
    for (const auto& e : s["enum"]) ok |= v == e;
    if (!ok) fail(v.dump() + " not in enum");
  }
  if (v.is_string() && s.contains("pattern") && !std::regex_search(v.get<std::string>(), std::regex(s["pattern"].get<std::string>())))
    fail("'" + v.get<std::string>() + "' does not match " + s["pattern"].get<std::string>());
  if (v.is_number()) {
    double x = v.get<double>();
    if (s.contains("minimum") && x < s["minimum"].get<double>()) fail("below minimum");
    if (s.contains("exclusiveMinimum") && x <= s["exclusiveMinimum"].get<double>()) fail("not above exclusiveMinimum");
  }
  if (v.is_object()) {
    if (s.contains("required"))
      for (const auto& k : s["required"])
        if (!v.contains(k.get<std::string>())) fail("missing " + k.get<std::string>());
    for (const auto& [k, x] : v.items()) {
      if (s.contains("propertyNames")) validate(json(k), s["propertyNames"], path + "/" + k, errors);
      if (s.contains("properties") && s["properties"].contains(k)) validate(x, s["properties"][k], path + "/" + k, errors);
      else if (s.contains("additionalProperties")) validate(x, s["additionalProperties"], path + "/" + k, errors);
    }
  }
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) fail("too few items");
    if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) fail("too many items");
    if (s.contains("items"))
      for (std::size_t i = 0; i < v.size(); ++i) validate(v[i], s["items"], path + "/" + std::to_string(i), errors);
  }
  if (s.contains("oneOf")) {
    int matches = 0;
    for (const auto& alt : s["oneOf"]) {
      std::vector<std::string> sub;
      validate(v, alt, path, sub);
      matches += sub.empty();
    }
    if (matches != 1) fail("matches " + std::to_string(matches) + " oneOf branches");
  }
}

inline std::vector<std::string> validate(const json& v, const json& schema) {
  std::vector<std::string> errors;
  validate(v, schema, "", errors);
  return errors;
}

}  // namespace schema_check
