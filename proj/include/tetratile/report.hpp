#pragma once
// JSON/text/CSV reports for every command, run configuration, and the on-disk
// layout of a casework campaign (config.json, cases/, certificates/, summary.txt).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "casework.hpp"
#include "json.hpp"

namespace tetratile {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kShortVerdict = "Sommerville No. 1 uniquely minimal";

inline std::string schema_tag(const std::string& command) { return "tetratile." + command + "/" + kSchemaVersion; }

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
  double eq_tol = 1e-6;  // edge equality and ratio tests on user input
  double width_floor = 1e-3;
  std::int64_t budget = 400'000;
  double refine_width_floor = 1e-9;
  std::int64_t refine_budget = 400'000;
  unsigned threads = 1;
  std::string output_dir;
  std::vector<std::string> formats{"text"};

  CaseworkOptions casework_options() const {
    CaseworkOptions o;
    o.first_pass.width_floor = width_floor;
    o.first_pass.budget = budget;
    o.refine.width_floor = refine_width_floor;
    o.refine.budget = refine_budget;
    o.threads = threads;
    return o;
  }
};

inline std::string default_output_dir() {
  if (const char* env = std::getenv("TETRATILE_OUT"); env && *env) return env;
  return "tetratile-out";
}

inline json config_json(const RunConfig& c) {
  return json{{"eq_tol", c.eq_tol},
              {"width_floor", c.width_floor},
              {"budget", c.budget},
              {"refine_width_floor", c.refine_width_floor},
              {"refine_budget", c.refine_budget},
              {"threads", c.threads},
              {"output_dir", c.output_dir},
              {"formats", c.formats}};
}

// Unknown keys and non-positive numbers are rejected.
inline RunConfig apply_config(RunConfig c, const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "configuration must be a JSON object");
  auto positive = [](const json& v, const std::string& key) {
    if (!v.is_number() || !(v.get<double>() > 0)) throw Error(ErrorCode::InvalidConfig, key + " must be a positive number");
    return v.get<double>();
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "eq_tol") c.eq_tol = positive(v, key);
    else if (key == "width_floor") c.width_floor = positive(v, key);
    else if (key == "budget") c.budget = static_cast<std::int64_t>(positive(v, key));
    else if (key == "refine_width_floor") c.refine_width_floor = positive(v, key);
    else if (key == "refine_budget") c.refine_budget = static_cast<std::int64_t>(positive(v, key));
    else if (key == "threads") c.threads = static_cast<unsigned>(positive(v, key));
    else if (key == "output_dir") {
      if (!v.is_string()) throw Error(ErrorCode::InvalidConfig, "output_dir must be a string");
      c.output_dir = v.get<std::string>();
    } else if (key == "formats") {
      if (!v.is_array() || v.empty()) throw Error(ErrorCode::InvalidConfig, "formats must be a non-empty array");
      c.formats.clear();
      for (const auto& f : v) {
        if (!f.is_string()) throw Error(ErrorCode::InvalidConfig, "formats entries must be strings");
        auto s = f.get<std::string>();
        if (s != "json" && s != "text" && s != "csv") throw Error(ErrorCode::InvalidConfig, "unknown format '" + s + "'");
        c.formats.push_back(s);
      }
    } else {
      throw Error(ErrorCode::InvalidConfig, "unknown configuration key '" + key + "'");
    }
  }
  return c;
}

inline json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, p.string() + ": " + e.what());
  }
}

// Write to a sibling temporary and rename, so an interrupted run never leaves half a file.
inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << text;
  }
  std::filesystem::rename(tmp, p);
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Building blocks

inline json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
inline double number_from(const json& j) { return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>(); }

inline json interval_json(const Interval& x) { return json::array({x.lo, x.hi}); }
inline Interval interval_from(const json& j) { return Interval(j.at(0).get<double>(), j.at(1).get<double>()); }

inline json intervals_json(const std::vector<Interval>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(interval_json(x));
  return a;
}
inline std::vector<Interval> intervals_from(const json& j) {
  std::vector<Interval> v;
  for (const auto& x : j) v.push_back(interval_from(x));
  return v;
}

template <class A>
json sextuple_json(const A& a) {
  json j = json::object();
  for (int s = 0; s < 6; ++s) j[slot_name(s)] = a[s];
  return j;
}
template <class T>
std::array<T, 6> sextuple_from(const json& j) {
  std::array<T, 6> a{};
  for (int s = 0; s < 6; ++s) a[s] = j.at(slot_name(s)).template get<T>();
  return a;
}

inline std::string pi_text(const PiRational& q) {
  std::string s = q.num == 1 ? "pi" : std::to_string(q.num) + "pi";
  return q.den == 1 ? s : s + "/" + std::to_string(q.den);
}

inline json angles_json(const AngleSextuple& a) {
  json deg = json::object(), rad = json::object();
  for (int s = 0; s < 6; ++s) {
    rad[slot_name(s)] = a[s];
    deg[slot_name(s)] = a[s] * 180 / kPi;
  }
  json j{{"radians", rad}, {"degrees", deg}};
  if (a.all_exact()) {
    json ex = json::object();
    for (int s = 0; s < 6; ++s) ex[slot_name(s)] = pi_text(*a.exact[s]);
    j["exact"] = ex;
  }
  return j;
}

inline json box_json(const Box& b) {
  return json{{"names", b.names}, {"ranges", intervals_json(b.ranges)}, {"provenance", b.provenance}};
}
inline Box box_from(const json& j) {
  Box b;
  b.names = j.at("names").get<std::vector<std::string>>();
  b.ranges = intervals_from(j.at("ranges"));
  b.provenance = j.at("provenance").get<std::string>();
  return b;
}

inline json certificate_json(const PositivityCertificate& c, bool timing) {
  json j{{"case_id", c.case_id},
         {"root", box_json(c.root)},
         {"tree", c.tree},
         {"boxes_examined", c.boxes_examined},
         {"positive_leaves", c.positive_leaves},
         {"infeasible_leaves", c.infeasible_leaves},
         {"min_leaf_bound", number(c.min_leaf_bound)}};
  if (timing) j["wall_seconds"] = c.wall_seconds;
  return j;
}
inline PositivityCertificate certificate_from(const json& j) {
  PositivityCertificate c;
  c.case_id = j.at("case_id").get<std::string>();
  c.root = box_from(j.at("root"));
  c.tree = j.at("tree").get<std::string>();
  c.boxes_examined = j.at("boxes_examined").get<std::int64_t>();
  c.positive_leaves = j.at("positive_leaves").get<std::int64_t>();
  c.infeasible_leaves = j.at("infeasible_leaves").get<std::int64_t>();
  c.min_leaf_bound = number_from(j.at("min_leaf_bound"));
  if (j.contains("wall_seconds")) c.wall_seconds = j["wall_seconds"].get<double>();
  return c;
}

inline json non_tiling_json(const NonTilingCertificate& c) {
  json coloring = json::array();
  for (const auto& [pair, color] : c.coloring)
    coloring.push_back(json{{"vertex", std::string{pair.first, pair.second}}, {"color", color}});
  json slots = json::array();
  for (int s : c.slots) slots.push_back(slot_name(s));
  return json{{"candidate", c.candidate},
              {"letter", std::string(1, c.letter)},
              {"slots", slots},
              {"angle", "theta" + slot_name(c.slot) + " = 2pi/" + std::to_string(c.n)},
              {"n", c.n},
              {"coloring", coloring},
              {"refinements_checked", c.refinements_checked},
              {"conclusion", c.conclusion}};
}

// ---------------------------------------------------------------------------
// Case records

inline json case_spec_json(const CaseSpec& c) {
  json menu = json::object(), coeff = json::object();
  const auto& t = code_type(c.type);
  for (const auto& m : t.menus)
    for (int s : m.slots) menu[slot_name(s)] = "pi/" + std::to_string(c.menu[s]);
  for (const auto& sys : t.systems)
    for (int s : sys.slots) coeff[slot_name(s)] = c.coeff[s];
  return json{{"id", c.id()}, {"type", to_string(c.type)}, {"index", c.index}, {"menu", menu},
              {"coefficients", coeff}, {"description", describe(c)}};
}

inline CaseSpec case_spec_from(const json& j) {
  CaseSpec c;
  c.type = parse_code_type(j.at("type").get<std::string>());
  c.index = j.at("index").get<int>();
  for (const auto& [slot, v] : j.at("menu").items()) c.menu[parse_slot(slot)] = std::stoi(v.get<std::string>().substr(3));
  for (const auto& [slot, v] : j.at("coefficients").items()) c.coeff[parse_slot(slot)] = v.get<int>();
  return c;
}

inline json cluster_json(const ClusterResolution& c) {
  json j{{"verdict", to_string(c.verdict)}, {"note", c.note}, {"hull", intervals_json(c.hull)}};
  if (!c.root.empty()) {
    j["root"] = c.root;
    j["angles"] = sextuple_json(c.angles);
  }
  if (!c.root_box.empty()) j["root_box"] = intervals_json(c.root_box);
  if (c.curve) j["curve_samples"] = c.samples;
  if (c.two_pi_over_n) {
    j["denominators"] = sextuple_json(*c.two_pi_over_n);
    j["candidate"] = c.candidate_name;
  }
  if (c.family) j["family"] = json{{"family", c.family->family}, {"a", c.family->a}, {"perm", c.family->perm},
                                   {"residual", c.family->residual}};
  if (c.solid_angle) {
    json ints = json::array();
    for (long k : c.solid_angle->integers) ints.push_back(k);
    j["solid_angle"] = json{{"omega", interval_json(c.solid_angle->omega)},
                            {"four_pi_over_omega", interval_json(c.solid_angle->four_pi_over_omega)},
                            {"integers", ints}};
  }
  if (c.area != 0) j["normalized_area"] = c.area;
  if (c.budget_exhausted) j["budget_exhausted"] = true;
  j["certificates"] = c.certificates.size();
  return j;
}

inline ClusterResolution cluster_from(const json& j) {
  ClusterResolution c;
  c.verdict = parse_verdict(j.at("verdict").get<std::string>());
  c.note = j.at("note").get<std::string>();
  c.hull = intervals_from(j.at("hull"));
  if (j.contains("root")) {
    c.root = j["root"].get<std::vector<double>>();
    c.angles = sextuple_from<double>(j.at("angles"));
  }
  if (j.contains("root_box")) c.root_box = intervals_from(j["root_box"]);
  if (j.contains("curve_samples")) {
    c.curve = true;
    c.samples = j["curve_samples"].get<int>();
  }
  if (j.contains("denominators")) {
    c.two_pi_over_n = sextuple_from<int>(j["denominators"]);
    c.candidate_name = j.at("candidate").get<std::string>();
  }
  if (j.contains("family")) {
    const auto& f = j["family"];
    c.family = FamilyMatch{f.at("family").get<int>(), f.at("a").get<double>(), f.at("perm").get<VertexPerm>(),
                           f.at("residual").get<double>()};
  }
  if (j.contains("solid_angle")) {
    const auto& s = j["solid_angle"];
    c.solid_angle = SolidAngleEnclosure{interval_from(s.at("omega")), interval_from(s.at("four_pi_over_omega")),
                                        s.at("integers").get<std::vector<long>>()};
  }
  if (j.contains("normalized_area")) c.area = j["normalized_area"].get<double>();
  c.budget_exhausted = j.value("budget_exhausted", false);
  c.certificates.resize(j.at("certificates").get<std::size_t>());
  return c;
}

inline std::string case_file_name(std::size_t number) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04zu.json", number);
  return buf;
}

// The case record; certificates live in their own file, referenced by path.
inline json case_json(const CaseResolution& r, std::size_t number, bool timing) {
  json clusters = json::array();
  for (const auto& c : r.clusters) clusters.push_back(cluster_json(c));
  json j{{"schema", schema_tag("case")},
         {"number", number},
         {"case", case_spec_json(r.spec)},
         {"verdict", to_string(r.verdict)},
         {"remaining_case", r.remaining_case.empty() ? json(nullptr) : json(r.remaining_case)},
         {"boxes_examined", r.boxes_examined},
         {"survivor_boxes", r.survivor_boxes},
         {"certificate", r.certificate ? json("certificates/" + case_file_name(number)) : json(nullptr)},
         {"clusters", clusters}};
  if (timing) j["wall_seconds"] = r.seconds;
  return j;
}

inline json case_certificates_json(const CaseResolution& r, bool timing) {
  json refinements = json::array();
  for (const auto& c : r.clusters)
    for (const auto& cert : c.certificates) refinements.push_back(certificate_json(cert, timing));
  return json{{"schema", schema_tag("certificate")},
              {"case_id", r.spec.id()},
              {"first_pass", r.certificate ? certificate_json(*r.certificate, timing) : json(nullptr)},
              {"refinements", refinements}};
}

inline CaseResolution case_from(const json& j, const json& certs) {
  CaseResolution r;
  r.spec = case_spec_from(j.at("case"));
  r.verdict = parse_verdict(j.at("verdict").get<std::string>());
  if (!j.at("remaining_case").is_null()) r.remaining_case = j["remaining_case"].get<std::string>();
  r.boxes_examined = j.at("boxes_examined").get<std::int64_t>();
  r.survivor_boxes = j.at("survivor_boxes").get<std::size_t>();
  if (j.contains("wall_seconds")) r.seconds = j["wall_seconds"].get<double>();
  for (const auto& c : j.at("clusters")) r.clusters.push_back(cluster_from(c));
  if (!certs.at("first_pass").is_null()) r.certificate = certificate_from(certs["first_pass"]);
  std::size_t k = 0;
  const auto& refs = certs.at("refinements");
  for (auto& c : r.clusters)
    for (auto& cert : c.certificates) {
      if (k >= refs.size()) throw Error(ErrorCode::ParseError, r.spec.id() + ": missing refinement certificates");
      cert = certificate_from(refs[k++]);
    }
  return r;
}

// ---------------------------------------------------------------------------
// analyze

inline double parse_number(const std::string& s) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "not a number: '" + s + "'");
  }
  if (used != s.size()) throw Error(ErrorCode::ParseError, "not a number: '" + s + "'");
  return x;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline EdgeSextuple parse_edges(const std::string& s) {
  auto parts = split_list(s);
  if (parts.size() != 6) throw Error(ErrorCode::ParseError, "expected six edge lengths, got " + std::to_string(parts.size()));
  EdgeSextuple e{};
  for (int i = 0; i < 6; ++i) e[i] = parse_number(parts[i]);
  return e;
}

// "pi/3", "2pi/5", "2*pi/5", "pi" are exact; "60deg" is degrees; anything else is radians.
inline void parse_angle(const std::string& s, double& radians, std::optional<PiRational>& exact) {
  auto p = s.find("pi");
  if (p != std::string::npos) {
    std::string num = s.substr(0, p), rest = s.substr(p + 2);
    if (!num.empty() && num.back() == '*') num.pop_back();
    std::int64_t n = num.empty() ? 1 : static_cast<std::int64_t>(parse_number(num));
    std::int64_t d = 1;
    if (!rest.empty()) {
      if (rest[0] != '/') throw Error(ErrorCode::ParseError, "bad pi literal '" + s + "'");
      d = static_cast<std::int64_t>(parse_number(rest.substr(1)));
    }
    if (n <= 0 || d <= 0 || std::to_string(n) != (num.empty() ? "1" : num))
      throw Error(ErrorCode::ParseError, "bad pi literal '" + s + "'");
    exact = PiRational{n, d};
    radians = exact->radians();
    return;
  }
  exact.reset();
  if (s.size() > 3 && s.compare(s.size() - 3, 3, "deg") == 0) {
    radians = parse_number(s.substr(0, s.size() - 3)) * kPi / 180;
    return;
  }
  radians = parse_number(s);
}

inline AngleSextuple parse_angles(const std::string& s) {
  auto parts = split_list(s);
  if (parts.size() != 6) throw Error(ErrorCode::ParseError, "expected six angles, got " + std::to_string(parts.size()));
  AngleSextuple a;
  for (int i = 0; i < 6; ++i) {
    parse_angle(parts[i], a.theta[i], a.exact[i]);
    if (!(a.theta[i] > 0 && a.theta[i] < kPi)) throw Error(ErrorCode::OutOfRange, "angle " + parts[i] + " outside (0, pi)");
  }
  return a;
}

inline json analyze_result(const EdgeSextuple& e, const std::optional<AngleSextuple>& given, double eq_tol) {
  auto t = validate_edges(e);
  auto angles = dihedral_angles(t);
  if (given)
    for (int s = 0; s < 6; ++s) angles.exact[s] = given->exact[s];
  TypeId type = classify(e, eq_tol);
  auto verdict = known_tile_verdict(type, e, eq_tol);
  json j{{"valid", true},
         {"edges", sextuple_json(e)},
         {"type", std::string(1, type.letter)},
         {"labeling", to_string(labeling_of(type))},
         {"group", to_string(group_of(type))},
         {"dihedral_angles", angles_json(angles)},
         {"volume", t.volume()},
         {"surface_area", t.surface_area()},
         {"normalized_area", normalized_area(t)},
         {"verdict", json{{"kind", to_string(verdict.kind)}, {"reason", verdict.reason}}}};
  if (auto m = match_family_edges(e, 1e-7)) j["goldberg"] = json{{"family", m->family}, {"a", m->a}};
  return j;
}

inline json analyze_report(const std::optional<std::string>& edges, const std::optional<std::string>& angles,
                           const RunConfig& cfg) {
  json input = json::object();
  json result;
  if (edges) {
    input["edges"] = *edges;
    result = analyze_result(parse_edges(*edges), std::nullopt, cfg.eq_tol);
  } else if (angles) {
    input["angles"] = *angles;
    auto a = parse_angles(*angles);
    result = analyze_result(edges_from_angles(a), a, cfg.eq_tol);
  } else {
    throw Error(ErrorCode::ParseError, "analyze needs --edges or --angles");
  }
  return json{{"schema", schema_tag("analyze")}, {"command", "analyze"}, {"input", input}, {"result", result}};
}

// ---------------------------------------------------------------------------
// search2pin

inline std::string certificate_slug(const std::string& name) {
  std::string s;
  for (char ch : name)
    if (std::isalnum(static_cast<unsigned char>(ch))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

// NT certificates are written under out_dir/certificates when out_dir is non-empty.
inline json search2pin_report(const RunConfig& cfg, const std::string& out_dir) {
  SearchStats stats;
  SearchOptions opt;
  opt.threads = cfg.threads;
  auto rows = search_2pi_over_n(opt, &stats);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.area != b.area ? a.area < b.area : a.n < b.n;
  });
  json out = json::array();
  for (const auto& r : rows) {
    json den = json::array();
    for (int n : r.n) den.push_back(n);
    json row{{"name", candidate_name(r.n)},
             {"denominators", den},
             {"angles", angles_json(AngleSextuple::two_pi_over(r.n))},
             {"edges", sextuple_json(r.edges)},
             {"normalized_area", r.area},
             {"determinant", interval_json(r.determinant)},
             {"tiles", r.verdict.kind == CandidateVerdict::Tiles},
             {"reason", r.verdict.name},
             {"certificate", nullptr}};
    if (r.verdict.certificate) {
      std::string rel = "certificates/" + certificate_slug(candidate_name(r.n)) + ".json";
      row["certificate"] = rel;
      row["odd_denominator"] = r.verdict.certificate->n;
      if (!out_dir.empty()) {
        json doc = non_tiling_json(*r.verdict.certificate);
        doc = json{{"schema", schema_tag("nontiling")}, {"certificate", doc}};
        write_file(std::filesystem::path(out_dir) / rel, dump(doc));
      }
    }
    out.push_back(row);
  }
  json result{{"candidates", out},
              {"count", out.size()},
              {"tiles", std::count_if(rows.begin(), rows.end(), [](auto& r) { return r.verdict.kind == CandidateVerdict::Tiles; })},
              {"admissible_sextuples", stats.admissible},
              {"determinant_hits", stats.determinant_hits},
              {"least_area", rows.front().area},
              {"least_area_name", candidate_name(rows.front().n)}};
  return json{{"schema", schema_tag("search2pin")},
              {"command", "search2pin"},
              {"input", json{{"max_denominator", kMaxDenominator}}},
              {"result", result}};
}

// ---------------------------------------------------------------------------
// goldberg

inline json goldberg_report(const std::vector<int>& families) {
  json rows = json::array();
  std::optional<FamilyMinimum> best;
  for (int f : families) {
    if (f < 1 || f > 3) throw Error(ErrorCode::OutOfRange, "family must be 1, 2 or 3");
    auto m = minimize_family(f);
    auto e = family_edges({f, m.a_star});
    rows.push_back(json{{"family", f},
                        {"a_star", m.a_star},
                        {"area_star", m.area_star},
                        {"certified_lower", m.certified_lower},
                        {"certified", m.certified},
                        {"edges", sextuple_json(e)},
                        {"angles", angles_json(dihedral_angles(validate_edges(e)))}});
    if (!best || m.area_star < best->area_star) best = m;
  }
  json result{{"families", rows}};
  if (best) {
    auto a = dihedral_angles(validate_edges(family_edges({best->family, best->a_star})));
    auto so1 = AngleSextuple::two_pi_over({4, 6, 6, 6, 6, 4});
    bool is_so1 = false;
    for (const auto& p : vertex_perms())
      if (max_angle_difference(AngleSextuple::radians(apply_perm(a.theta, p)), so1) < 1e-9) is_so1 = true;
    result["minimum"] = json{{"family", best->family},
                             {"a", best->a_star},
                             {"area", best->area_star},
                             {"sommerville_no1", is_so1}};
  }
  json fam = json::array();
  for (int f : families) fam.push_back(f);
  return json{{"schema", schema_tag("goldberg")}, {"command", "goldberg"}, {"input", json{{"families", fam}}},
              {"result", result}};
}

// ---------------------------------------------------------------------------
// casework campaign

inline std::string short_verdict_line() {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%s (%.4f)", kShortVerdict, kSommervilleArea);
  return buf;
}

inline json campaign_json(const CampaignReport& rep, const std::vector<CodeTypeId>& types, const RunConfig& cfg,
                          bool full, bool timing) {
  json rows = json::array();
  int total = 0, after = 0;
  for (auto t : types) {
    const auto& tally = rep.tallies.at(t);
    json resolved = json::object();
    for (const auto& [v, n] : tally.resolved) resolved[to_string(v)] = n;
    rows.push_back(json{{"type", to_string(t)},
                        {"main_type", std::string(1, code_type(t).main_type)},
                        {"cases", tally.enumerated},
                        {"after_interval", tally.enumerated - tally.eliminated},
                        {"resolved", resolved}});
    total += tally.enumerated;
    after += tally.enumerated - tally.eliminated;
  }
  json type_names = json::array();
  for (auto t : types) type_names.push_back(to_string(t));
  json result{{"types", rows},
              {"total_cases", total},
              {"total_after_interval", after},
              {"survivors", rep.survivors},
              {"remaining_cases", rep.remaining_cases},
              {"needs_manual", rep.needs_manual},
              {"proof_gap", rep.proof_gap},
              {"budget_exhausted", rep.budget_exhausted}};
  if (full) {
    result["verdict"] = rep.verdict;
    result["short_verdict"] = rep.proof_gap ? rep.verdict : short_verdict_line();
  } else {
    result["verdict"] = rep.proof_gap ? rep.verdict : "all " + std::to_string(total) + " cases resolved";
  }
  json j{{"schema", schema_tag("casework")},
         {"command", "casework"},
         {"input", json{{"types", type_names}, {"all", full}, {"config", config_json(cfg)}}},
         {"result", result}};
  if (timing) j["wall_seconds"] = rep.seconds;
  return j;
}

struct CampaignRun {
  CampaignReport report;
  json summary;
  std::vector<json> case_records;  // in enumeration order
  std::size_t resumed = 0;
};

// Runs the given types, persisting one record per case as it completes. With
// resume, records already on disk are loaded instead of recomputed.
inline CampaignRun run_campaign(const std::vector<CodeTypeId>& types, const RunConfig& cfg, bool full, bool resume,
                                bool timing) {
  namespace fs = std::filesystem;
  fs::path dir = cfg.output_dir.empty() ? default_output_dir() : cfg.output_dir;
  fs::create_directories(dir / "cases");
  fs::create_directories(dir / "certificates");

  json cfgj = config_json(cfg);
  cfgj.erase("output_dir");
  cfgj.erase("formats");
  if (resume && fs::exists(dir / "config.json") && read_json_file(dir / "config.json") != cfgj)
    throw Error(ErrorCode::InvalidConfig, "resume with a configuration different from " + (dir / "config.json").string());
  write_file(dir / "config.json", dump(cfgj));

  // Case numbers follow the global enumeration order, 1-based.
  std::vector<CaseSpec> cases;
  std::map<std::string, std::size_t> number;
  std::size_t k = 0;
  for (const auto& c : enumerate_all_cases()) {
    ++k;
    if (std::find(types.begin(), types.end(), c.type) == types.end()) continue;
    number[c.id()] = k;
    cases.push_back(c);
  }

  std::atomic<std::size_t> resumed{0};
  auto cached = [&](const CaseSpec& c) -> std::optional<CaseResolution> {
    if (!resume) return std::nullopt;
    auto n = number.at(c.id());
    auto cp = dir / "cases" / case_file_name(n), kp = dir / "certificates" / case_file_name(n);
    if (!fs::exists(cp) || !fs::exists(kp)) return std::nullopt;
    try {
      auto r = case_from(read_json_file(cp), read_json_file(kp));
      if (r.spec.id() != c.id()) return std::nullopt;
      ++resumed;
      return r;
    } catch (const std::exception&) {
      return std::nullopt;  // damaged record: recompute
    }
  };
  auto done = [&](std::size_t, const CaseResolution& r) {
    auto n = number.at(r.spec.id());
    write_file(dir / "certificates" / case_file_name(n), dump(case_certificates_json(r, timing)));
    write_file(dir / "cases" / case_file_name(n), dump(case_json(r, n, timing)));
  };
  CampaignRun run;
  run.report = run_cases(cases, cfg.casework_options(), cached, done);
  run.resumed = resumed;
  for (const auto& r : run.report.cases) run.case_records.push_back(case_json(r, number.at(r.spec.id()), timing));
  run.summary = campaign_json(run.report, types, cfg, full, timing);
  return run;
}

// ---------------------------------------------------------------------------
// Text and CSV renderings. Each reads only the report JSON.

inline std::string fixed(double x, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

inline std::string render_text(const json& rep) {
  std::ostringstream os;
  const std::string cmd = rep.at("command");
  const auto& r = rep.at("result");
  if (cmd == "analyze") {
    os << "edges:";
    for (const auto& [s, v] : r.at("edges").items()) os << " d" << s << "=" << fixed(v.get<double>(), 6);
    os << "\ntype (" << r.at("type").get<std::string>() << ") " << r.at("labeling").get<std::string>() << ", group "
       << r.at("group").get<std::string>() << "\ndihedral angles:";
    const auto& da = r.at("dihedral_angles");
    for (const auto& [s, v] : da.at("degrees").items()) {
      os << " theta" << s << "=" << fixed(v.get<double>(), 4) << "deg";
      if (da.contains("exact")) os << " (" << da["exact"][s].get<std::string>() << ")";
    }
    os << "\nvolume: " << fixed(r.at("volume"), 6) << "\nsurface area: " << fixed(r.at("surface_area"), 6)
       << "\nnormalized area: " << fixed(r.at("normalized_area"), 4) << "\n";
    std::string kind = r.at("verdict").at("kind");
    kind[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(kind[0])));
    os << "verdict: " << kind << " (" << r.at("verdict").at("reason").get<std::string>() << ")\n";
    if (r.contains("goldberg"))
      os << "Goldberg family " << r["goldberg"]["family"].get<int>() << ", a = " << fixed(r["goldberg"]["a"], 6) << "\n";
  } else if (cmd == "search2pin") {
    os << std::left << std::setw(40) << "candidate" << std::setw(22) << "n12 n13 n14 n23 n24 n34" << std::right
       << std::setw(8) << "area" << "  verdict\n";
    for (const auto& c : r.at("candidates")) {
      std::string den;
      for (const auto& n : c.at("denominators")) den += (den.empty() ? "" : " ") + std::to_string(n.get<int>());
      os << std::left << std::setw(40) << c.at("name").get<std::string>() << std::setw(22) << den << std::right
         << std::setw(8) << fixed(c.at("normalized_area"), 2) << "  "
         << (c.at("tiles").get<bool>() ? "tiles" : "does not tile");
      if (!c.at("certificate").is_null()) os << " [" << c["certificate"].get<std::string>() << "]";
      os << "\n";
    }
    os << r.at("count").get<int>() << " candidates, " << r.at("tiles").get<int>() << " tile; least area "
       << fixed(r.at("least_area"), 4) << " (" << r.at("least_area_name").get<std::string>() << ")\n";
  } else if (cmd == "goldberg") {
    for (const auto& f : r.at("families"))
      os << "family " << f.at("family").get<int>() << ": a* = " << fixed(f.at("a_star"), 4)
         << ", area* = " << fixed(f.at("area_star"), 4) << (f.at("certified").get<bool>() ? " (certified)" : "") << "\n";
    if (r.contains("minimum")) {
      const auto& m = r["minimum"];
      os << "minimum: family " << m.at("family").get<int>() << " at a = " << fixed(m.at("a"), 4) << ", area "
         << fixed(m.at("area"), 4) << (m.at("sommerville_no1").get<bool>() ? ", Sommerville No. 1" : "") << "\n";
    }
  } else if (cmd == "casework") {
    os << std::left << std::setw(10) << "code type" << std::setw(6) << "main" << std::right << std::setw(7) << "cases"
       << std::setw(16) << "after interval" << "  resolutions\n";
    for (const auto& t : r.at("types")) {
      os << std::left << std::setw(10) << t.at("type").get<std::string>() << std::setw(6)
         << ("(" + t.at("main_type").get<std::string>() + ")") << std::right << std::setw(7) << t.at("cases").get<int>()
         << std::setw(16) << t.at("after_interval").get<int>() << " ";
      for (const auto& [v, n] : t.at("resolved").items()) os << " " << v << "=" << n.get<int>();
      os << "\n";
    }
    os << std::left << std::setw(16) << "total" << std::right << std::setw(7) << r.at("total_cases").get<int>()
       << std::setw(16) << r.at("total_after_interval").get<int>() << "\n";
    os << "survivors:";
    for (const auto& s : r.at("survivors")) os << " " << s.get<std::string>();
    os << "\n";
    for (const auto& s : r.at("remaining_cases")) os << s.get<std::string>() << "\n";
    if (!r.at("needs_manual").empty()) {
      os << "unresolved:";
      for (const auto& s : r.at("needs_manual")) os << " " << s.get<std::string>();
      os << "\n";
    }
    os << r.at("verdict").get<std::string>() << "\n";
    if (r.contains("short_verdict")) os << r["short_verdict"].get<std::string>() << "\n";
  }
  if (rep.contains("wall_seconds")) os << "wall time: " << fixed(rep["wall_seconds"], 2) << " s\n";
  return os.str();
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

// Columns per report type are listed in the README.
inline std::string render_csv(const json& rep, const std::vector<json>& cases = {}) {
  std::ostringstream os;
  os << std::setprecision(17);
  const std::string cmd = rep.at("command");
  const auto& r = rep.at("result");
  if (cmd == "analyze") {
    os << "field,value\n";
    for (const auto& [s, v] : r.at("edges").items()) os << "d" << s << "," << v.get<double>() << "\n";
    for (const auto& [s, v] : r.at("dihedral_angles").at("radians").items()) os << "theta" << s << "," << v.get<double>() << "\n";
    os << "type," << r.at("type").get<std::string>() << "\ngroup," << csv_field(r.at("group")) << "\nvolume,"
       << r.at("volume").get<double>() << "\nnormalized_area," << r.at("normalized_area").get<double>() << "\nverdict,"
       << csv_field(r.at("verdict").at("kind")) << "\nreason," << csv_field(r.at("verdict").at("reason")) << "\n";
  } else if (cmd == "search2pin") {
    os << "name,n12,n13,n14,n23,n24,n34,normalized_area,tiles,certificate\n";
    for (const auto& c : r.at("candidates")) {
      os << csv_field(c.at("name"));
      for (const auto& n : c.at("denominators")) os << "," << n.get<int>();
      os << "," << c.at("normalized_area").get<double>() << "," << (c.at("tiles").get<bool>() ? "yes" : "no") << ","
         << (c.at("certificate").is_null() ? "" : c["certificate"].get<std::string>()) << "\n";
    }
  } else if (cmd == "goldberg") {
    os << "family,a_star,area_star,certified\n";
    for (const auto& f : r.at("families"))
      os << f.at("family").get<int>() << "," << f.at("a_star").get<double>() << "," << f.at("area_star").get<double>()
         << "," << (f.at("certified").get<bool>() ? "yes" : "no") << "\n";
  } else if (cmd == "casework") {
    os << "number,id,type,verdict,remaining_case,boxes_examined,survivor_boxes\n";
    for (const auto& c : cases)
      os << c.at("number").get<std::size_t>() << "," << c.at("case").at("id").get<std::string>() << ","
         << c.at("case").at("type").get<std::string>() << "," << c.at("verdict").get<std::string>() << ","
         << (c.at("remaining_case").is_null() ? "" : c["remaining_case"].get<std::string>()) << ","
         << c.at("boxes_examined").get<std::int64_t>() << "," << c.at("survivor_boxes").get<std::size_t>() << "\n";
  }
  return os.str();
}

}  // namespace tetratile
