#pragma once
// The nine code types: fixed-angle menus, linear systems on the remaining
// angles, strengthened determinant matrices and symmetry tie-breaks, plus the
// enumeration of their finite case lists.

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"

namespace tetratile {

enum class CodeTypeId { aaabcd, abaacb, abaacd, abcaaa, abcacb, abcacd, abcade, abccbb, abcddd };

inline constexpr std::array<CodeTypeId, 9> kCodeTypes{CodeTypeId::aaabcd, CodeTypeId::abaacb, CodeTypeId::abaacd,
                                                      CodeTypeId::abcaaa, CodeTypeId::abcacb, CodeTypeId::abcacd,
                                                      CodeTypeId::abcade, CodeTypeId::abccbb, CodeTypeId::abcddd};

inline const char* to_string(CodeTypeId t) {
  static const char* names[] = {"aaabcd", "abaacb", "abaacd", "abcaaa", "abcacb",
                                "abcacd", "abcade", "abccbb", "abcddd"};
  return names[static_cast<int>(t)];
}

inline CodeTypeId parse_code_type(const std::string& s) {
  for (auto t : kCodeTypes)
    if (s == to_string(t)) return t;
  throw Error(ErrorCode::ParseError, "unknown code type '" + s + "'");
}

// Slots sharing one value from {pi/2, pi/3, pi/4}; abccbb ties theta14 = theta23.
struct MenuGroup {
  std::vector<int> slots;
};

struct LinearSystemSpec {
  enum class Parity { Even, SameParity };
  enum class Nonzero { All, AtLeastTwo };
  std::vector<int> slots;
  std::vector<int> same_parity;  // subset that must share a parity (SameParity)
  std::vector<int> even;         // subset that must be even
  Nonzero nonzero = Nonzero::AtLeastTwo;
  // abcaaa also admits n34 as the only nonzero coefficient (see enumerate_cases).
  int lone_allowed = -1;
  int max_sum = 9;
};

// One column of a strengthened matrix: sum over terms of (product of sines) * C_col.
struct MatrixTerm {
  std::vector<int> sines;  // slots, with multiplicity
  int column = 0;          // 0-based column of the angle matrix
};
using MatrixColumn = std::vector<MatrixTerm>;

struct SymmetryRule {
  enum class Kind { CoeffLeq, TieAngleGeq, PairLexLeq } kind;
  // CoeffLeq: n_a <= n_b. TieAngleGeq: if n_a == n_b then theta_x >= theta_y.
  // PairLexLeq: (n_a, n_b) <= (n_x, n_y) lexicographically.
  int a = 0, b = 0, x = 0, y = 0;
};

struct CodeTypeSpec {
  CodeTypeId id;
  char main_type;
  std::vector<char> other_types;
  std::vector<MenuGroup> menus;
  std::vector<std::pair<int, int>> equalities;     // theta_p = theta_q outside any menu
  std::vector<LinearSystemSpec> systems;
  std::vector<std::vector<int>> not_all_right;     // menu slots that cannot all be pi/2
  std::vector<std::vector<int>> sum_exceeds_pi;    // menu slots whose angles sum to more than pi
  std::vector<MatrixColumn> matrix;
  std::vector<SymmetryRule> symmetry;
  int solid_angle_vertex = -1;                     // aaabcd: Omega_1 divides 4pi
};

namespace detail {

inline int sl(int i, int j) { return slot_index(i - 1, j - 1); }

inline MatrixColumn col(std::initializer_list<std::pair<std::vector<int>, int>> terms) {
  MatrixColumn c;
  for (const auto& [sines, column] : terms) {
    MatrixTerm t;
    for (int ij : sines) t.sines.push_back(sl(ij / 10, ij % 10));
    t.column = column - 1;
    c.push_back(t);
  }
  return c;
}

inline std::vector<int> slots(std::initializer_list<int> ijs) {
  std::vector<int> out;
  for (int ij : ijs) out.push_back(sl(ij / 10, ij % 10));
  return out;
}

inline LinearSystemSpec even_system(std::initializer_list<int> ijs, LinearSystemSpec::Nonzero nz) {
  LinearSystemSpec s;
  s.slots = slots(ijs);
  s.even = s.slots;
  s.nonzero = nz;
  return s;
}

inline SymmetryRule leq(int a, int b) {
  return {SymmetryRule::Kind::CoeffLeq, sl(a / 10, a % 10), sl(b / 10, b % 10), 0, 0};
}
inline SymmetryRule tie(int a, int b, int x, int y) {
  return {SymmetryRule::Kind::TieAngleGeq, sl(a / 10, a % 10), sl(b / 10, b % 10), sl(x / 10, x % 10),
          sl(y / 10, y % 10)};
}
inline SymmetryRule lex(int a, int b, int x, int y) {
  return {SymmetryRule::Kind::PairLexLeq, sl(a / 10, a % 10), sl(b / 10, b % 10), sl(x / 10, x % 10),
          sl(y / 10, y % 10)};
}

inline CodeTypeSpec spec(CodeTypeId id, char main_type, std::vector<char> others = {}) {
  CodeTypeSpec t;
  t.id = id;
  t.main_type = main_type;
  t.other_types = std::move(others);
  return t;
}

inline std::vector<CodeTypeSpec> build_code_types() {
  using NZ = LinearSystemSpec::Nonzero;
  std::vector<CodeTypeSpec> v;

  {
    auto t = spec(CodeTypeId::aaabcd, 'r');
    t.menus = {{slots({23})}, {slots({24})}, {slots({34})}};
    LinearSystemSpec s;
    s.slots = slots({12, 13, 14});
    s.same_parity = s.slots;
    s.nonzero = NZ::AtLeastTwo;
    t.systems = {s};
    t.not_all_right = {slots({23, 24, 34})};
    t.matrix = {col({{{}, 1}}), col({{{12}, 2}, {{13}, 3}, {{14}, 4}})};
    t.symmetry = {leq(12, 13), leq(13, 14), tie(12, 13, 24, 34), tie(13, 14, 23, 24)};
    t.solid_angle_vertex = 0;
    v.push_back(t);
  }
  {
    auto t = spec(CodeTypeId::abaacb, 'n');
    t.menus = {{slots({24})}};
    t.systems = {even_system({12, 14, 23}, NZ::AtLeastTwo), even_system({13, 34}, NZ::All)};
    t.matrix = {col({{{12, 13, 14}, 1}, {{12, 12, 34}, 2}, {{13, 14, 23}, 3}, {{12, 14, 34}, 4}})};
    v.push_back(t);
  }
  {
    auto t = spec(CodeTypeId::abaacd, 't', {'n'});
    t.menus = {{slots({13})}, {slots({24})}, {slots({34})}};
    t.systems = {even_system({12, 14, 23}, NZ::AtLeastTwo)};
    t.matrix = {col({{{12}, 1}, {{23}, 3}}), col({{{12}, 2}, {{14}, 4}})};
    t.symmetry = {leq(14, 23), tie(14, 23, 13, 24)};
    v.push_back(t);
  }
  {
    auto t = spec(CodeTypeId::abcaaa, 'm');
    t.menus = {{slots({13})}, {slots({14})}};
    LinearSystemSpec s;
    s.slots = slots({12, 23, 24, 34});
    s.same_parity = slots({12, 23, 24});
    s.even = slots({34});
    s.nonzero = NZ::AtLeastTwo;
    s.lone_allowed = sl(3, 4);
    t.systems = {s};
    t.matrix = {col({{{12, 34}, 1}, {{23, 24}, 2}, {{23, 34}, 3}, {{24, 34}, 4}})};
    t.symmetry = {leq(23, 24), tie(23, 24, 13, 14)};
    v.push_back(t);
  }
  {
    auto t = spec(CodeTypeId::abcacb, 'o');
    t.systems = {even_system({12, 23}, NZ::All), even_system({13, 34}, NZ::All), even_system({14, 24}, NZ::All)};
    t.matrix = {col({{{12, 13, 14}, 1}, {{12, 13, 24}, 2}, {{23, 13, 14}, 3}, {{12, 34, 14}, 4}})};
    t.symmetry = {lex(12, 23, 13, 34), lex(12, 23, 14, 24)};
    v.push_back(t);
  }
  {
    auto t = spec(CodeTypeId::abcacd, 'v', {'o'});
    t.menus = {{slots({13})}, {slots({34})}};
    t.systems = {even_system({12, 23}, NZ::All), even_system({14, 24}, NZ::All)};
    t.matrix = {col({{{12, 14}, 1}, {{12, 24}, 2}, {{23, 14}, 3}}), col({{{}, 4}})};
    v.push_back(t);
  }
  {
    auto t = spec(CodeTypeId::abcade, 'x', {'u', 'n', 'o', 'v'});
    t.menus = {{slots({13})}, {slots({14})}, {slots({24})}, {slots({34})}};
    t.systems = {even_system({12, 23}, NZ::All)};
    t.not_all_right = {slots({13, 14, 34})};
    t.sum_exceeds_pi = {slots({14, 24, 34})};
    t.matrix = {col({{{12}, 1}, {{23}, 3}}), col({{{}, 2}}), col({{{}, 4}})};
    t.symmetry = {leq(12, 23), tie(12, 23, 14, 34)};
    v.push_back(t);
  }
  {
    auto t = spec(CodeTypeId::abccbb, 'h');
    t.menus = {{slots({12})}, {slots({14, 23})}};
    t.equalities = {{sl(1, 3), sl(2, 4)}};
    t.systems = {even_system({13, 34}, NZ::All)};
    t.matrix = {col({{{13}, 1}, {{13}, 2}, {{34}, 3}, {{34}, 4}})};
    v.push_back(t);
  }
  {
    auto t = spec(CodeTypeId::abcddd, 's');
    t.menus = {{slots({12})}, {slots({13})}, {slots({14})}};
    t.systems = {even_system({23, 24, 34}, NZ::AtLeastTwo)};
    t.sum_exceeds_pi = {slots({12, 13, 14})};
    t.matrix = {col({{{}, 1}}), col({{{23, 24}, 2}, {{23, 34}, 3}, {{24, 34}, 4}})};
    t.symmetry = {leq(23, 24), leq(24, 34), tie(23, 24, 13, 14), tie(24, 34, 12, 13)};
    v.push_back(t);
  }
  return v;
}

}  // namespace detail

inline const CodeTypeSpec& code_type(CodeTypeId id) {
  static const std::vector<CodeTypeSpec> all = detail::build_code_types();
  return all[static_cast<int>(id)];
}

// Text rendering used for the golden comparison; one line per assumption.
inline std::string describe(const CodeTypeSpec& t) {
  std::ostringstream os;
  auto theta = [](int s) { return "theta" + slot_name(s); };
  os << "code type " << to_string(t.id) << " main (" << t.main_type << ")";
  if (!t.other_types.empty()) {
    os << " other";
    for (char c : t.other_types) os << " (" << c << ")";
  }
  os << "\n";
  for (const auto& m : t.menus) {
    os << "menu";
    for (std::size_t i = 0; i < m.slots.size(); ++i) os << (i ? " = " : " ") << theta(m.slots[i]);
    os << " in {pi/2, pi/3, pi/4}\n";
  }
  for (const auto& g : t.not_all_right) {
    os << "not all pi/2:";
    for (int s : g) os << " " << theta(s);
    os << "\n";
  }
  for (const auto& g : t.sum_exceeds_pi) {
    os << "sum > pi:";
    for (int s : g) os << " " << theta(s);
    os << "\n";
  }
  for (const auto& [p, q] : t.equalities) os << "equal: " << theta(p) << " = " << theta(q) << "\n";
  for (const auto& s : t.systems) {
    os << "system:";
    for (std::size_t i = 0; i < s.slots.size(); ++i) os << (i ? " + " : " ") << "n" << slot_name(s.slots[i]) << " " << theta(s.slots[i]);
    os << " = 2pi, sum <= " << s.max_sum;
    if (!s.same_parity.empty()) {
      os << ", same parity";
      for (int x : s.same_parity) os << " n" << slot_name(x);
    }
    if (!s.even.empty()) {
      os << ", even";
      for (int x : s.even) os << " n" << slot_name(x);
    }
    os << (s.nonzero == LinearSystemSpec::Nonzero::All ? ", all nonzero" : ", at least two nonzero") << "\n";
  }
  os << "matrix (" << t.main_type << "):";
  for (const auto& c : t.matrix) {
    os << " [";
    for (std::size_t i = 0; i < c.size(); ++i) {
      os << (i ? " + " : "");
      for (int s : c[i].sines) os << "sin" << slot_name(s) << "*";
      os << "C" << c[i].column + 1;
    }
    os << "]";
  }
  os << "\n";
  if (t.solid_angle_vertex >= 0) os << "Omega" << t.solid_angle_vertex + 1 << " divides 4pi\n";
  for (const auto& r : t.symmetry) {
    auto n = [](int s) { return "n" + slot_name(s); };
    switch (r.kind) {
      case SymmetryRule::Kind::CoeffLeq: os << "symmetry: " << n(r.a) << " <= " << n(r.b) << "\n"; break;
      case SymmetryRule::Kind::TieAngleGeq:
        os << "symmetry: if " << n(r.a) << " = " << n(r.b) << " then " << theta(r.x) << " >= " << theta(r.y) << "\n";
        break;
      case SymmetryRule::Kind::PairLexLeq:
        os << "symmetry: (" << n(r.a) << ", " << n(r.b) << ") <= (" << n(r.x) << ", " << n(r.y) << ")\n";
        break;
    }
  }
  return os.str();
}

// Reductions applied when a nonzero condition fails; "2pi/n" means every angle
// becomes 2pi/n and the 2pi/n search covers it.
struct ReductionRule {
  char type;
  std::vector<int> failed_systems;  // 1-based condition numbers as printed
  std::string target;               // a code type name or "2pi/n"
};

inline const std::vector<ReductionRule>& reduction_rules() {
  static const std::vector<ReductionRule> rules = {
      {'r', {3}, "2pi/n"},        {'n', {3}, "abcade"}, {'n', {4}, "abaacd"},   {'n', {3, 4}, "2pi/n"},
      {'t', {3}, "2pi/n"},        {'m', {3}, "2pi/n"},  {'o', {3}, "abcacd"},   {'o', {3, 4}, "abcade"},
      {'o', {2, 3, 4}, "2pi/n"},  {'v', {3}, "abcade"}, {'v', {4}, "abcade"},   {'v', {3, 4}, "2pi/n"},
      {'x', {3}, "2pi/n"},        {'h', {4}, "2pi/n"},  {'s', {3}, "2pi/n"},
  };
  return rules;
}

// ---------------------------------------------------------------------------
// Cases

struct CaseSpec {
  CodeTypeId type;
  int index = 0;                 // position within its code type's list
  std::array<int, 6> menu{};     // k for theta = pi/k on menu slots, 0 elsewhere
  std::array<int, 6> coeff{};    // n_ij on system slots, 0 elsewhere

  std::string id() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s-%03d", to_string(type), index);
    return buf;
  }
  // Menu angles compared by value: pi/2 > pi/3 > pi/4.
  double menu_angle(int s) const { return menu[s] ? kPi / menu[s] : 0.0; }
};

inline std::string describe(const CaseSpec& c) {
  std::ostringstream os;
  const auto& t = code_type(c.type);
  bool first = true;
  for (const auto& m : t.menus) {
    os << (first ? "" : ", ") << "theta" << slot_name(m.slots[0]) << "=pi/" << c.menu[m.slots[0]];
    first = false;
  }
  for (const auto& s : t.systems) {
    os << (first ? "" : ", ");
    first = false;
    bool lead = true;
    for (int x : s.slots) {
      if (!c.coeff[x]) continue;
      os << (lead ? "" : " + ") << c.coeff[x] << "theta" << slot_name(x);
      lead = false;
    }
    os << " = 2pi";
  }
  return os.str();
}

namespace detail {

inline bool system_admissible(const LinearSystemSpec& s, const std::array<int, 6>& n) {
  int sum = 0, nonzero = 0;
  for (int x : s.slots) {
    sum += n[x];
    nonzero += n[x] != 0;
  }
  if (sum > s.max_sum) return false;
  for (int x : s.even)
    if (n[x] % 2) return false;
  for (std::size_t i = 1; i < s.same_parity.size(); ++i)
    if (n[s.same_parity[i]] % 2 != n[s.same_parity[0]] % 2) return false;
  if (s.nonzero == LinearSystemSpec::Nonzero::All) return nonzero == static_cast<int>(s.slots.size());
  if (nonzero >= 2) return true;
  return nonzero == 1 && s.lone_allowed >= 0 && n[s.lone_allowed] != 0;
}

inline bool symmetry_ok(const CodeTypeSpec& t, const CaseSpec& c) {
  for (const auto& r : t.symmetry) {
    switch (r.kind) {
      case SymmetryRule::Kind::CoeffLeq:
        if (!(c.coeff[r.a] <= c.coeff[r.b])) return false;
        break;
      case SymmetryRule::Kind::TieAngleGeq:
        if (c.coeff[r.a] == c.coeff[r.b] && !(c.menu_angle(r.x) >= c.menu_angle(r.y))) return false;
        break;
      case SymmetryRule::Kind::PairLexLeq:
        if (std::make_pair(c.coeff[r.a], c.coeff[r.b]) > std::make_pair(c.coeff[r.x], c.coeff[r.y])) return false;
        break;
    }
  }
  return true;
}

inline bool menu_ok(const CodeTypeSpec& t, const CaseSpec& c) {
  for (const auto& g : t.not_all_right)
    if (std::all_of(g.begin(), g.end(), [&](int s) { return c.menu[s] == 2; })) return false;
  for (const auto& g : t.sum_exceeds_pi) {
    // 1/k sums compared exactly: sum of pi/k_i > pi.
    long num = 0, den = 1;
    for (int s : g) {
      num = num * c.menu[s] + den;
      den *= c.menu[s];
    }
    if (!(num > den)) return false;
  }
  return true;
}

}  // namespace detail

struct EnumerateOptions {
  bool symmetry_tie_breaks = true;
};

// Menu values run over pi/2, pi/3, pi/4 (outermost menu group first); coefficient
// vectors run lexicographically in slot order within each system.
inline std::vector<CaseSpec> enumerate_cases(CodeTypeId id, const EnumerateOptions& opt = {}) {
  const auto& t = code_type(id);
  std::vector<CaseSpec> out;
  std::vector<std::array<int, 6>> menus{{}};
  for (const auto& g : t.menus) {
    std::vector<std::array<int, 6>> next;
    for (const auto& m : menus)
      for (int k : {2, 3, 4}) {
        auto mm = m;
        for (int s : g.slots) mm[s] = k;
        next.push_back(mm);
      }
    menus = std::move(next);
  }
  std::vector<std::array<int, 6>> coeffs{{}};
  for (const auto& sys : t.systems) {
    std::vector<std::array<int, 6>> next;
    for (const auto& base : coeffs) {
      std::array<int, 6> n = base;
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == sys.slots.size()) {
          if (detail::system_admissible(sys, n)) next.push_back(n);
          return;
        }
        for (int v = 0; v <= sys.max_sum; ++v) {
          n[sys.slots[i]] = v;
          rec(i + 1);
        }
        n[sys.slots[i]] = 0;
      };
      rec(0);
    }
    coeffs = std::move(next);
  }
  for (const auto& m : menus)
    for (const auto& n : coeffs) {
      CaseSpec c{id, 0, m, n};
      if (!detail::menu_ok(t, c)) continue;
      if (opt.symmetry_tie_breaks && !detail::symmetry_ok(t, c)) continue;
      c.index = static_cast<int>(out.size());
      out.push_back(c);
    }
  return out;
}

inline std::vector<CaseSpec> enumerate_all_cases() {
  std::vector<CaseSpec> all;
  for (auto t : kCodeTypes) {
    auto v = enumerate_cases(t);
    all.insert(all.end(), v.begin(), v.end());
  }
  return all;
}

}  // namespace tetratile
