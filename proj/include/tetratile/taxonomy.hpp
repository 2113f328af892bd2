#pragma once
// The 25 edge-length types of tetrahedra and what is known about which of them tile.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "geom.hpp"
#include "goldberg.hpp"
#include "symmetry.hpp"

namespace tetratile {

// Letters on the slots (d12, d13, d14, d23, d24, d34); equal letters mean equal lengths.
using EdgeLabeling = std::array<char, 6>;

enum class Group { OrientationPreserving, Edmonds, TwoPiOverN, NonCharacterized };

inline const char* to_string(Group g) {
  switch (g) {
    case Group::OrientationPreserving: return "orientation-preserving";
    case Group::Edmonds: return "Edmonds";
    case Group::TwoPiOverN: return "2pi/n";
    case Group::NonCharacterized: return "non-characterized";
  }
  return "?";
}

struct TypeInfo {
  char letter;
  const char* labeling;
  Group group;
};

inline constexpr std::array<TypeInfo, 25> kTypes{{
    {'a', "aaaaaa", Group::OrientationPreserving},
    {'b', "abaaba", Group::OrientationPreserving},
    {'c', "aabbba", Group::Edmonds},
    {'d', "aaaaab", Group::OrientationPreserving},
    {'e', "aaabbb", Group::OrientationPreserving},
    {'f', "babaaa", Group::OrientationPreserving},
    {'g', "abccba", Group::TwoPiOverN},
    {'h', "abccbb", Group::NonCharacterized},
    {'i', "abaaca", Group::OrientationPreserving},
    {'j', "aaabcb", Group::OrientationPreserving},
    {'k', "bcbaaa", Group::OrientationPreserving},
    {'l', "abbcca", Group::OrientationPreserving},
    {'m', "abcaaa", Group::NonCharacterized},
    {'n', "abaacb", Group::NonCharacterized},
    {'o', "abcacb", Group::NonCharacterized},
    {'p', "acbbda", Group::TwoPiOverN},
    {'q', "acbadb", Group::OrientationPreserving},
    {'r', "aaabcd", Group::NonCharacterized},
    {'s', "abcddd", Group::NonCharacterized},
    {'t', "abaacd", Group::NonCharacterized},
    {'u', "aabbcd", Group::NonCharacterized},
    {'v', "abcacd", Group::NonCharacterized},
    {'w', "bacdae", Group::TwoPiOverN},
    {'x', "abcade", Group::NonCharacterized},
    {'y', "abcdef", Group::TwoPiOverN},
}};

struct TypeId {
  char letter = 'a';
  friend bool operator==(TypeId, TypeId) = default;
  friend auto operator<=>(TypeId, TypeId) = default;
};

inline const TypeInfo& type_info(TypeId t) {
  if (t.letter < 'a' || t.letter > 'y') throw Error(ErrorCode::NotATetrahedronType, std::string(1, t.letter));
  return kTypes[t.letter - 'a'];
}

inline EdgeLabeling labeling_of(TypeId t) {
  EdgeLabeling l{};
  std::copy_n(type_info(t).labeling, 6, l.begin());
  return l;
}

inline Group group_of(TypeId t) { return type_info(t).group; }

inline EdgeLabeling parse_labeling(const std::string& s) {
  if (s.size() != 6) throw Error(ErrorCode::ParseError, "edge labeling needs six letters: " + s);
  EdgeLabeling l{};
  std::copy_n(s.begin(), 6, l.begin());
  return l;
}

inline std::string to_string(const EdgeLabeling& l) { return std::string(l.begin(), l.end()); }

// Rename letters in order of first appearance: "bacdae" -> "abcdbe".
inline EdgeLabeling normalize_letters(const EdgeLabeling& l) {
  std::map<char, char> rename;
  EdgeLabeling out{};
  for (int s = 0; s < 6; ++s) {
    auto it = rename.find(l[s]);
    if (it == rename.end()) it = rename.emplace(l[s], static_cast<char>('a' + rename.size())).first;
    out[s] = it->second;
  }
  return out;
}

// Orbit representative under vertex permutations and letter renaming.
inline EdgeLabeling canonical_labeling(const EdgeLabeling& l) {
  EdgeLabeling best = normalize_letters(l);
  for (const auto& m : slot_perms()) best = std::min(best, normalize_letters(apply_perm(l, m)));
  return best;
}

// Multiplicities of the letters, descending, e.g. {3, 2, 1} for type (h).
inline std::vector<int> lengths_partition(const EdgeLabeling& l) {
  std::map<char, int> count;
  for (char c : l) ++count[c];
  std::vector<int> out;
  for (auto& [c, n] : count) out.push_back(n);
  std::sort(out.rbegin(), out.rend());
  return out;
}

inline std::vector<int> lengths_partition(TypeId t) { return lengths_partition(labeling_of(t)); }

inline TypeId classify_labeling(const EdgeLabeling& l) {
  static const std::map<EdgeLabeling, char> table = [] {
    std::map<EdgeLabeling, char> m;
    for (const auto& t : kTypes) m[canonical_labeling(labeling_of({t.letter}))] = t.letter;
    return m;
  }();
  auto it = table.find(canonical_labeling(l));
  if (it == table.end()) throw Error(ErrorCode::NotATetrahedronType, to_string(l));
  return {it->second};
}

// Equality classes of the edge lengths as a labeling. Lengths within eqTol (relative) are
// equal; lengths closer than 1000 * eqTol but farther than eqTol are ambiguous.
inline EdgeLabeling equality_labeling(const EdgeSextuple& e, double eq_tol = 1e-9) {
  double scale = *std::max_element(e.begin(), e.end());
  auto same = [&](int s, int t) {
    double d = std::abs(e[s] - e[t]);
    if (d <= eq_tol * scale) return true;
    if (d <= 1e3 * eq_tol * scale)
      throw Error(ErrorCode::AmbiguousEquality,
                  "d" + slot_name(s) + " and d" + slot_name(t) + " differ by " + std::to_string(d));
    return false;
  };
  EdgeLabeling l{};
  char next = 'a';
  for (int s = 0; s < 6; ++s) {
    l[s] = 0;
    for (int t = 0; t < s; ++t)
      if (same(s, t)) {
        l[s] = l[t];
        break;
      }
    if (!l[s]) l[s] = next++;
  }
  // Tolerance equality must be transitive on the data, otherwise the classes are ill-defined.
  for (int s = 0; s < 6; ++s)
    for (int t = 0; t < s; ++t)
      if ((l[s] == l[t]) != same(s, t))
        throw Error(ErrorCode::AmbiguousEquality, "equality of lengths is not transitive within tolerance");
  return l;
}

inline TypeId classify(const EdgeSextuple& e, double eq_tol = 1e-9) {
  return classify_labeling(equality_labeling(e, eq_tol));
}

// Vertex relabelings carrying e onto the representative labeling of its type, with the
// length carried by each representative letter.
inline std::vector<std::map<char, double>> letter_assignments(TypeId t, const EdgeSextuple& e, double eq_tol = 1e-9) {
  EdgeLabeling rep = labeling_of(t), lab = equality_labeling(e, eq_tol);
  std::vector<std::map<char, double>> out;
  for (const auto& m : slot_perms()) {
    auto pl = apply_perm(lab, m);
    auto pe = apply_perm(e, m);
    if (normalize_letters(pl) != normalize_letters(rep)) continue;
    std::map<char, double> val;
    for (int s = 0; s < 6; ++s) val.emplace(rep[s], pe[s]);
    out.push_back(std::move(val));
  }
  return out;
}

struct TileVerdict {
  enum Kind { Tiles, DoesNotTile, Unknown } kind = Unknown;
  std::string reason;
};

inline const char* to_string(TileVerdict::Kind k) {
  switch (k) {
    case TileVerdict::Tiles: return "tiles";
    case TileVerdict::DoesNotTile: return "does not tile";
    case TileVerdict::Unknown: return "unknown";
  }
  return "?";
}

namespace detail {
inline bool ratio_is(double x, double y, double target, double tol = 1e-9) {
  return std::abs(x / y - target) <= tol * target;
}
}  // namespace detail

inline TileVerdict known_tile_verdict(TypeId t, const EdgeSextuple& e, double eq_tol = 1e-9) {
  auto ratio_is = [eq_tol](double x, double y, double target) { return detail::ratio_is(x, y, target, eq_tol); };
  const double r3 = std::sqrt(3.0), r2 = std::sqrt(2.0);
  auto any = [&](auto pred) {
    for (auto& v : letter_assignments(t, e, eq_tol))
      if (pred(v)) return true;
    return false;
  };
  switch (t.letter) {
    case 'a':
    case 'd':
    case 'e':
    case 'f':
    case 'i':
    case 'k':
    case 'l': return {TileVerdict::DoesNotTile, "orientation-preserving type outside Sommerville Nos. 1-4"};
    case 'g':
    case 'p':
    case 'w':
    case 'y': return {TileVerdict::DoesNotTile, "2pi/n group"};
    case 'b':
      if (any([&](auto& v) { return ratio_is(v['a'], v['b'], r3 / 2); }))
        return {TileVerdict::Tiles, "Sommerville No. 1"};
      return {TileVerdict::DoesNotTile, "type (b) tiles only as Sommerville No. 1"};
    case 'c':
      if (any([&](auto& v) {
            return ratio_is(v['a'], v['b'], std::sqrt(2.0 / 3.0)) || ratio_is(v['a'], v['b'], std::sqrt(1.5));
          }))
        return {TileVerdict::Tiles, "Sommerville (xi), not orientation-preserving"};
      return {TileVerdict::DoesNotTile, "type (c) tiles only for a/b = sqrt(2/3) or sqrt(3/2)"};
    case 'j':
      if (any([&](auto& v) { return ratio_is(v['a'], v['b'], r3 / 2) && ratio_is(v['a'], v['c'], r3 / (2 * r2)); }))
        return {TileVerdict::Tiles, "Sommerville No. 3"};
      if (any([&](auto& v) {
            return ratio_is(v['a'], v['b'], std::sqrt(5.0) / 2 / r3) && ratio_is(v['a'], v['c'], std::sqrt(5.0) / 4);
          }))
        return {TileVerdict::Tiles, "Sommerville No. 4"};
      return {TileVerdict::DoesNotTile, "type (j) tiles only as Sommerville No. 3 or No. 4"};
    case 'q':
      if (any([&](auto& v) {
            return ratio_is(v['a'], v['d'], r3) && ratio_is(v['b'], v['d'], r2) && ratio_is(v['c'], v['d'], 2.0);
          }))
        return {TileVerdict::Tiles, "Sommerville No. 2"};
      return {TileVerdict::DoesNotTile, "type (q) tiles only as Sommerville No. 2"};
    case 'h':
      if (match_family_edges(e, 1)) return {TileVerdict::Tiles, "first Goldberg family"};
      return {TileVerdict::Unknown, "non-characterized"};
    case 'v':
      if (match_family_edges(e, 2)) return {TileVerdict::Tiles, "second Goldberg family"};
      return {TileVerdict::Unknown, "non-characterized"};
    default: return {TileVerdict::Unknown, "non-characterized"};
  }
}

}  // namespace tetratile
