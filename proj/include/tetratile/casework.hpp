#pragma once
// Per-case residual systems, interval elimination, certified resolution of the
// surviving boxes, and the full campaign over all enumerated cases.

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <thread>

#include "branch_bound.hpp"
#include "code_types.hpp"
#include "dihunt.hpp"
#include "goldberg.hpp"
#include "solve.hpp"

namespace tetratile {

// Dihedral window used for the search boxes: 36.5 degrees sits just below
// theta0 = arcsin(27/(32 sqrt 2)) ~ 36.63 degrees.
inline constexpr double kWindowDegrees = 36.5;
inline const double kWindowLo = kWindowDegrees * kPi / 180;
inline const double kWindowHi = kPi - kWindowLo;

// ---------------------------------------------------------------------------
// Residual systems

struct ResidualSystem {
  CaseSpec spec;
  std::unique_ptr<ExprGraph> graph;
  std::vector<int> var_slots;               // slot carried by each variable
  std::array<Expr, 6> theta;                // every angle in terms of the variables
  std::array<int, 6> solved_from{-1, -1, -1, -1, -1, -1};  // system index for solved-out slots
  std::vector<Expr> residuals;              // the selected minors
  std::vector<std::string> residual_names;
  std::vector<Expr> all_minors;             // every minor of the strengthened matrix
  std::vector<Expr> constraints;            // g >= 0
  std::vector<std::string> constraint_names;
  Box box;

  std::size_t num_vars() const { return var_slots.size(); }
  ResidualProblem problem() const { return {graph.get(), residuals, constraints}; }

  std::array<double, 6> angles(const std::vector<double>& x) const {
    Program p(*graph, std::vector<Expr>(theta.begin(), theta.end()));
    auto out = p(x);
    std::array<double, 6> a{};
    std::copy(out.begin(), out.end(), a.begin());
    return a;
  }
  std::array<Interval, 6> angles(const std::vector<Interval>& x) const {
    Program p(*graph, std::vector<Expr>(theta.begin(), theta.end()));
    auto out = p(x);
    std::array<Interval, 6> a{};
    std::copy(out.begin(), out.end(), a.begin());
    return a;
  }
};

namespace detail {

// Solve out the slot with the largest coefficient; ties go to the later slot.
inline int solved_slot(const LinearSystemSpec& s, const std::array<int, 6>& n) {
  int best = -1;
  for (int x : s.slots)
    if (n[x] > 0 && (best < 0 || n[x] >= n[best])) best = x;
  return best;
}

inline std::vector<std::vector<int>> row_subsets(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> pick(k);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == k) {
      out.push_back(pick);
      return;
    }
    for (int r = start; r < 4; ++r) {
      pick[depth] = r;
      rec(r + 1, depth + 1);
    }
  };
  rec(0, 0);
  return out;
}

inline Expr determinant(const std::vector<std::vector<Expr>>& m) {
  const std::size_t k = m.size();
  if (k == 1) return m[0][0];
  if (k == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Minor policy: row subsets in lexicographic order, first (#variables + 1) of them.
// abccbb is the exception: its rows 1 and 2 (and 3 and 4) coincide on the type,
// so it takes one row from each pair.
inline std::vector<std::vector<int>> selected_minor_rows(CodeTypeId t, int k, std::size_t need) {
  if (t == CodeTypeId::abccbb) return {{0}, {2}};
  auto all = row_subsets(k);
  all.resize(std::min(all.size(), need));
  return all;
}

// Columns of the strengthened matrix as expressions in the six dihedral angles.
inline std::vector<std::array<Expr, 4>> strengthened_columns(ExprGraph& g, const CodeTypeSpec& t,
                                                            const std::array<Expr, 6>& theta) {
  std::array<Expr, 6> cosv, sinv;
  for (int s = 0; s < 6; ++s) {
    cosv[s] = cos(theta[s]);
    sinv[s] = sin(theta[s]);
  }
  auto entry = [&](int row, int column) -> Expr {
    if (row == column) return g.constant(-1.0);
    for (int s = 0; s < 6; ++s) {
      auto [p, q] = complement_vertices(s);
      if ((p == row && q == column) || (q == row && p == column)) return cosv[s];
    }
    return g.constant(0.0);
  };
  std::vector<std::array<Expr, 4>> columns;
  for (const auto& colspec : t.matrix) {
    std::array<Expr, 4> colv;
    for (int row = 0; row < 4; ++row) {
      Expr acc = g.constant(0.0);
      for (const auto& term : colspec) {
        Expr coef = g.constant(1.0);
        for (int s : term.sines) coef = coef * sinv[s];
        acc = acc + coef * entry(row, term.column);
      }
      colv[row] = acc;
    }
    columns.push_back(colv);
  }
  return columns;
}

}  // namespace detail

// Every maximal minor of the strengthened matrix at concrete angles. On a genuine
// tetrahedron of the type they all vanish.
inline std::vector<double> strengthened_minors(CodeTypeId id, const std::array<double, 6>& angles) {
  ExprGraph g;
  std::array<Expr, 6> theta;
  for (int s = 0; s < 6; ++s) theta[s] = g.constant(angles[s]);
  const auto& t = code_type(id);
  auto columns = detail::strengthened_columns(g, t, theta);
  const int k = static_cast<int>(t.matrix.size());
  std::vector<double> out;
  for (const auto& rows : detail::row_subsets(k)) {
    std::vector<std::vector<Expr>> m(rows.size(), std::vector<Expr>(k));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (int j = 0; j < k; ++j) m[i][j] = columns[j][rows[i]];
    out.push_back(eval(detail::determinant(m), {}));
  }
  return out;
}

inline std::string minor_name(const std::vector<int>& rows) {
  std::string s = "rows";
  for (int r : rows) s += " " + std::to_string(r + 1);
  return s;
}

inline ResidualSystem build_residual_system(const CaseSpec& c) {
  const auto& t = code_type(c.type);
  ResidualSystem rs;
  rs.spec = c;
  rs.graph = std::make_unique<ExprGraph>();
  ExprGraph& g = *rs.graph;

  std::array<bool, 6> known{};
  // Menu angles are exact constants pi/k.
  for (const auto& m : t.menus)
    for (int s : m.slots) {
      rs.theta[s] = g.pi_multiple(PiRational{1, c.menu[s]});
      known[s] = true;
    }
  std::map<int, int> alias;  // slot -> representative
  for (const auto& [p, q] : t.equalities) alias[q] = p;

  // Solved-out slots per system, then variables for everything else.
  std::array<int, 6> solved{-1, -1, -1, -1, -1, -1};
  for (std::size_t k = 0; k < t.systems.size(); ++k) {
    int s = detail::solved_slot(t.systems[k], c.coeff);
    if (s < 0) throw Error(ErrorCode::DegenerateSystem, c.id() + ": system without a nonzero coefficient");
    solved[s] = static_cast<int>(k);
    rs.solved_from[s] = static_cast<int>(k);
  }
  for (int s = 0; s < 6; ++s) {
    if (known[s] || solved[s] >= 0 || alias.count(s)) continue;
    int v = static_cast<int>(rs.var_slots.size());
    rs.var_slots.push_back(s);
    rs.theta[s] = g.var(v);
    known[s] = true;
  }
  for (int s = 0; s < 6; ++s) {
    if (solved[s] < 0) continue;
    const auto& sys = t.systems[solved[s]];
    Expr rest = g.pi_multiple(PiRational{2, 1});
    for (int x : sys.slots) {
      if (x == s || c.coeff[x] == 0) continue;
      rest = rest - static_cast<double>(c.coeff[x]) * rs.theta[x];
    }
    rs.theta[s] = rest / static_cast<double>(c.coeff[s]);
    known[s] = true;
  }
  for (const auto& [q, p] : alias) rs.theta[q] = rs.theta[p];

  const int k = static_cast<int>(t.matrix.size());
  auto columns = detail::strengthened_columns(g, t, rs.theta);
  auto minor = [&](const std::vector<int>& rows) {
    std::vector<std::vector<Expr>> m(rows.size(), std::vector<Expr>(k));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (int j = 0; j < k; ++j) m[i][j] = columns[j][rows[i]];
    return detail::determinant(m);
  };
  for (const auto& rows : detail::row_subsets(k)) rs.all_minors.push_back(minor(rows));
  for (const auto& rows : detail::selected_minor_rows(c.type, k, rs.num_vars() + 1)) {
    rs.residuals.push_back(minor(rows));
    rs.residual_names.push_back(minor_name(rows));
  }
  if (rs.residuals.size() != rs.num_vars() + 1)
    throw Error(ErrorCode::DegenerateSystem, c.id() + ": equations do not exceed variables by one");

  // Solved-out angles must stay in the window; every vertex keeps a positive solid angle.
  for (int s = 0; s < 6; ++s) {
    if (solved[s] < 0) continue;
    rs.constraints.push_back(rs.theta[s] - kWindowLo);
    rs.constraint_names.push_back("theta" + slot_name(s) + " >= 36.5deg");
    rs.constraints.push_back(kWindowHi - rs.theta[s]);
    rs.constraint_names.push_back("theta" + slot_name(s) + " <= 143.5deg");
  }
  for (int v = 0; v < 4; ++v) {
    auto inc = incident_slots(v);
    rs.constraints.push_back(rs.theta[inc[0]] + rs.theta[inc[1]] + rs.theta[inc[2]] - g.pi_multiple({1, 1}));
    rs.constraint_names.push_back("Omega" + std::to_string(v + 1) + " > 0");
  }

  rs.box.provenance = c.id();
  for (int s : rs.var_slots) {
    rs.box.names.push_back("theta" + slot_name(s));
    rs.box.ranges.push_back(Interval(kWindowLo, kWindowHi));
  }
  return rs;
}

// ---------------------------------------------------------------------------
// Resolutions

enum class Verdict {
  EliminatedByInterval,
  NoSolution,
  Solved2piOverN,
  SolvedGoldberg,
  SolidAngleObstruction,
  AreaTooLarge,
  NeedsManual,
};

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::EliminatedByInterval: return "EliminatedByInterval";
    case Verdict::NoSolution: return "NoSolution";
    case Verdict::Solved2piOverN: return "Solved2piOverN";
    case Verdict::SolvedGoldberg: return "SolvedGoldberg";
    case Verdict::SolidAngleObstruction: return "SolidAngleObstruction";
    case Verdict::AreaTooLarge: return "AreaTooLarge";
    case Verdict::NeedsManual: return "NeedsManual";
  }
  return "?";
}

inline Verdict parse_verdict(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(Verdict::NeedsManual); ++i)
    if (s == to_string(static_cast<Verdict>(i))) return static_cast<Verdict>(i);
  throw Error(ErrorCode::ParseError, "unknown verdict '" + s + "'");
}

// Evidence for one connected group of surviving boxes.
struct ClusterResolution {
  Verdict verdict = Verdict::NeedsManual;
  std::string note;
  std::vector<Interval> hull;
  std::vector<double> root;                  // numeric root (isolated) or first sample (curve)
  std::vector<Interval> root_box;            // Krawczyk enclosure, isolated roots only
  std::array<double, 6> angles{};
  bool curve = false;
  int samples = 0;
  bool budget_exhausted = false;
  std::optional<DenominatorSextuple> two_pi_over_n;
  std::string candidate_name;
  std::optional<FamilyMatch> family;
  std::optional<SolidAngleEnclosure> solid_angle;
  double area = 0;
  std::vector<PositivityCertificate> certificates;  // refinement certificates (NoSolution)
};

struct CaseResolution {
  CaseSpec spec;
  Verdict verdict = Verdict::NeedsManual;
  std::string remaining_case;  // "RC1".."RC7" for the seven hard cases
  std::optional<PositivityCertificate> certificate;  // first-pass elimination
  std::int64_t boxes_examined = 0;
  std::size_t survivor_boxes = 0;
  std::vector<ClusterResolution> clusters;
  double seconds = 0;

  bool survived_interval() const { return verdict != Verdict::EliminatedByInterval; }
};

struct CaseworkOptions {
  BoundOptions first_pass{1e-3, 400'000, true};
  BoundOptions refine{1e-9, 400'000, true};
  double root_tol = 1e-10;
  int max_starts = 24;
  int max_depth = 3;
  unsigned threads = 0;
};

// ---------------------------------------------------------------------------
// Seven hard cases with known outcomes, used as regression anchors

struct RemainingCasePattern {
  std::string label;
  CodeTypeId type;
  std::vector<std::pair<int, int>> menu;   // (slot, k) for theta = pi/k
  std::vector<std::pair<int, int>> coeff;  // (slot, n), unlisted system slots are 0
};

inline const std::vector<RemainingCasePattern>& remaining_case_patterns() {
  auto sl = [](int i, int j) { return slot_index(i - 1, j - 1); };
  static const std::vector<RemainingCasePattern> v = {
      {"RC1", CodeTypeId::aaabcd, {{sl(2, 3), 3}, {sl(2, 4), 2}, {sl(3, 4), 4}}, {{sl(1, 2), 1}, {sl(1, 3), 1}, {sl(1, 4), 3}}},
      {"RC2", CodeTypeId::aaabcd, {{sl(2, 3), 4}, {sl(2, 4), 2}, {sl(3, 4), 4}}, {{sl(1, 2), 1}, {sl(1, 3), 1}, {sl(1, 4), 3}}},
      {"RC3", CodeTypeId::abaacb, {{sl(2, 4), 2}}, {{sl(1, 2), 4}, {sl(1, 4), 4}, {sl(1, 3), 2}, {sl(3, 4), 2}}},
      {"RC4", CodeTypeId::abaacd, {{sl(1, 3), 2}, {sl(2, 4), 2}, {sl(3, 4), 3}}, {{sl(1, 2), 2}, {sl(2, 3), 4}}},
      {"RC5", CodeTypeId::abaacd, {{sl(1, 3), 2}, {sl(2, 4), 2}, {sl(3, 4), 3}}, {{sl(1, 2), 2}, {sl(1, 4), 2}, {sl(2, 3), 2}}},
      {"RC6", CodeTypeId::abcacd, {{sl(1, 3), 2}, {sl(3, 4), 3}}, {{sl(1, 2), 4}, {sl(2, 3), 4}, {sl(1, 4), 2}, {sl(2, 4), 2}}},
      {"RC7", CodeTypeId::abccbb, {{sl(1, 2), 3}, {sl(1, 4), 2}, {sl(2, 3), 2}}, {{sl(1, 3), 4}, {sl(3, 4), 2}}},
  };
  return v;
}

inline std::string remaining_case_label(const CaseSpec& c) {
  for (const auto& p : remaining_case_patterns()) {
    if (p.type != c.type) continue;
    std::array<int, 6> menu{}, coeff{};
    for (auto [s, k] : p.menu) menu[s] = k;
    for (auto [s, n] : p.coeff) coeff[s] = n;
    if (menu == c.menu && coeff == c.coeff) return p.label;
  }
  return "";
}

inline CaseSpec remaining_case(int k) {
  const auto& p = remaining_case_patterns().at(k - 1);
  for (const auto& c : enumerate_cases(p.type))
    if (remaining_case_label(c) == p.label) return c;
  throw Error(ErrorCode::InvalidConfig, p.label + " is not among the enumerated cases");
}

// ---------------------------------------------------------------------------
// Survivor resolution

namespace detail {

inline bool touches(const std::vector<Interval>& a, const std::vector<Interval>& b, double slack) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].hi + slack < b[i].lo || b[i].hi + slack < a[i].lo) return false;
  return true;
}

inline std::vector<std::vector<std::vector<Interval>>> cluster_boxes(const std::vector<std::vector<Interval>>& boxes) {
  const std::size_t n = boxes.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  // Sort by the first coordinate so the sweep only compares nearby boxes.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return boxes[a][0].lo < boxes[b][0].lo; });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& a = boxes[order[i]];
      const auto& b = boxes[order[j]];
      if (b[0].lo > a[0].hi + 1e-12) break;
      if (touches(a, b, 1e-12)) parent[find(order[i])] = find(order[j]);
    }
  std::map<std::size_t, std::vector<std::vector<Interval>>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(boxes[i]);
  std::vector<std::vector<std::vector<Interval>>> out;
  for (auto& [root, g] : groups) out.push_back(std::move(g));
  // Deterministic order: by the lower corner of each cluster's first box.
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    for (std::size_t i = 0; i < a[0].size(); ++i)
      if (a[0][i].lo != b[0][i].lo) return a[0][i].lo < b[0][i].lo;
    return false;
  });
  return out;
}

inline std::vector<Interval> hull_of(const std::vector<std::vector<Interval>>& boxes) {
  auto h = boxes.front();
  for (const auto& b : boxes)
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = hull(h[i], b[i]);
  return h;
}

inline bool inside(const std::vector<double>& x, const std::vector<Interval>& box, double slack) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < box[i].lo - slack || x[i] > box[i].hi + slack) return false;
  return true;
}

inline std::vector<double> center(const std::vector<Interval>& b) {
  std::vector<double> c;
  for (const auto& r : b) c.push_back(r.mid());
  return c;
}

// Denominators n with theta = 2pi/n for every angle, when each angle is that close to one.
inline std::optional<DenominatorSextuple> snap_two_pi_over_n(const std::array<double, 6>& a,
                                                             const std::array<Interval, 6>* enclosure,
                                                             double tol = 1e-7) {
  DenominatorSextuple n{};
  for (int s = 0; s < 6; ++s) {
    double q = 2 * kPi / a[s];
    long k = std::lround(q);
    if (k < kMinDenominator || std::abs(q - k) > tol) return std::nullopt;
    Interval exact = pi_rational(PiRational::two_pi_over(k));
    if (enclosure && !intersects((*enclosure)[s], exact)) return std::nullopt;
    n[s] = static_cast<int>(k);
  }
  return n;
}

inline bool admissible_angles(const std::array<double, 6>& a, double slack = 1e-9) {
  for (double t : a)
    if (t < kWindowLo - slack || t > kWindowHi + slack) return false;
  return satisfies_angle_inequalities(AngleSextuple::radians(a));
}

}  // namespace detail

class SurvivorResolver {
 public:
  SurvivorResolver(const ResidualSystem& rs, const CaseworkOptions& opt)
      : rs_(rs), opt_(opt), sys_(*rs.graph, rs.residuals), minors_(*rs.graph, rs.all_minors) {}

  std::vector<ClusterResolution> resolve(const std::vector<std::vector<Interval>>& boxes, int depth = 0) {
    std::vector<ClusterResolution> out;
    for (const auto& cluster : detail::cluster_boxes(boxes)) {
      auto r = resolve_cluster(cluster, depth);
      out.insert(out.end(), r.begin(), r.end());
    }
    return out;
  }

 private:
  const ResidualSystem& rs_;
  const CaseworkOptions& opt_;
  CompiledSystem sys_;
  CompiledSystem minors_;

  std::vector<std::vector<double>> roots_in(const std::vector<std::vector<Interval>>& cluster,
                                            const std::vector<Interval>& hull) {
    std::vector<std::vector<double>> starts{detail::center(hull)};
    std::size_t step = std::max<std::size_t>(1, cluster.size() / static_cast<std::size_t>(opt_.max_starts));
    for (std::size_t i = 0; i < cluster.size() && starts.size() <= static_cast<std::size_t>(opt_.max_starts); i += step)
      starts.push_back(detail::center(cluster[i]));
    double slack = std::max(opt_.first_pass.width_floor, 1e-9);
    std::vector<std::vector<double>> roots;
    for (const auto& x0 : starts) {
      auto r = levenberg_marquardt(sys_, x0);
      if (r.residual <= opt_.root_tol && detail::inside(r.x, hull, slack)) roots.push_back(r.x);
    }
    return roots;
  }

  ClusterResolution no_solution_by_refinement(const std::vector<Interval>& hull, BoundResult& br) {
    ClusterResolution c;
    c.hull = hull;
    c.verdict = Verdict::NoSolution;
    c.note = "refined interval bound excludes a common zero";
    c.certificates.push_back(br.certificate);
    return c;
  }

  std::vector<ClusterResolution> resolve_cluster(const std::vector<std::vector<Interval>>& cluster, int depth) {
    auto hull = detail::hull_of(cluster);
    Box hbox = rs_.box;
    hbox.ranges = hull;
    auto roots = roots_in(cluster, hull);
    if (roots.empty()) {
      auto br = certify_residuals(rs_.problem(), hbox, opt_.refine, rs_.spec.id() + "/refine");
      if (br.status == BoundStatus::Certified) return {no_solution_by_refinement(hull, br)};
      if (br.status == BoundStatus::Undecided && depth < opt_.max_depth) {
        // Tiny undecided boxes with no numeric root nearby: try again from their centres.
        auto again = roots_in(br.survivors, detail::hull_of(br.survivors));
        if (!again.empty()) return resolve(br.survivors, depth + 1);
      }
      ClusterResolution c;
      c.hull = hull;
      c.budget_exhausted = br.status == BoundStatus::BudgetExhausted;
      c.note = c.budget_exhausted ? "refinement budget exhausted" : "undecided boxes without a numeric root";
      return {c};
    }

    const auto& x = roots.front();
    int rank = numerical_rank(sys_.jacobian(x));
    if (rank < static_cast<int>(rs_.num_vars())) return {resolve_curve(cluster, hull, roots)};
    // Residuals vanishing to second order along a curve can pass the rank test;
    // roots spread across the cluster give the curve away.
    double spread = 0;
    for (const auto& y : roots)
      for (std::size_t i = 0; i < y.size(); ++i) spread = std::max(spread, std::abs(y[i] - x[i]));
    if (spread > 1e-5) return {resolve_curve(cluster, hull, roots)};

    ClusterResolution c;
    c.hull = hull;
    c.root = x;
    auto rows = best_square_rows(sys_.jacobian(x));
    auto kr = krawczyk(sys_, rows, x);
    if (!kr) return resolve_double_root(c, hbox, depth);
    c.root_box = kr->box;
    // Every other root in the cluster must lie in the Krawczyk box.
    auto br = certify_residuals(rs_.problem(), hbox, opt_.refine, rs_.spec.id() + "/isolate");
    if (br.status == BoundStatus::BudgetExhausted) {
      c.note = "isolation budget exhausted";
      c.budget_exhausted = true;
      return {c};
    }
    // Survivors inside the uniqueness region carry no other root of the square subsystem.
    std::vector<std::vector<Interval>> stray;
    for (const auto& b : br.survivors) {
      bool in = true;
      for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i].lo < kr->region[i].lo || b[i].hi > kr->region[i].hi) in = false;
      if (!in) stray.push_back(b);
    }
    std::vector<ClusterResolution> out;
    classify_isolated(c);
    out.push_back(c);
    if (!stray.empty()) {
      if (depth >= opt_.max_depth) {
        ClusterResolution rest;
        rest.hull = detail::hull_of(stray);
        rest.note = "undecided boxes away from the isolated root";
        out.push_back(rest);
      } else {
        auto more = resolve(stray, depth + 1);
        out.insert(out.end(), more.begin(), more.end());
      }
    }
    return out;
  }

  // Singular Jacobian at an isolated root. When the root is an exact 2pi/n point
  // (every minor vanishes at the exact angles) and the rest of the cluster is
  // certified root-free outside a small neighbourhood, classify the exact point.
  std::vector<ClusterResolution> resolve_double_root(ClusterResolution c, const Box& hbox, int depth) {
    c.angles = rs_.angles(c.root);
    auto n = detail::snap_two_pi_over_n(c.angles, nullptr, 1e-5);
    if (!n) {
      c.note = "Krawczyk test failed at an isolated numeric root";
      return {c};
    }
    std::vector<Interval> exact;
    for (int s : rs_.var_slots) exact.push_back(pi_rational(PiRational::two_pi_over((*n)[s])));
    const double r = 1e-5;
    std::vector<Interval> near;
    for (const auto& e : exact) near.push_back(Interval(down(e.lo - r), up(e.hi + r)));
    bool spurious = false;
    for (const auto& m : minors_.value(near))
      if (!m.contains_zero()) spurious = true;
    auto enc = rs_.angles(exact);
    bool zero = true;
    for (int s = 0; s < 6; ++s)
      if (!intersects(enc[s], pi_rational(PiRational::two_pi_over((*n)[s])))) zero = false;
    for (const auto& m : minors_.value(exact))
      if (!m.contains_zero() || m.width() > 1e-9) zero = false;
    if (!zero && !spurious) {
      c.note = "Krawczyk test failed and the nearby 2pi/n point is not a root";
      return {c};
    }
    auto br = certify_residuals(rs_.problem(), hbox, opt_.refine, rs_.spec.id() + "/double");
    if (br.status == BoundStatus::BudgetExhausted) {
      c.note = "isolation budget exhausted near a double root";
      c.budget_exhausted = true;
      return {c};
    }
    std::vector<std::vector<Interval>> stray;
    for (const auto& b : br.survivors) {
      bool in = true;
      for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i].lo < exact[i].lo - r || b[i].hi > exact[i].hi + r) in = false;
      if (!in) stray.push_back(b);
    }
    c.root_box = exact;
    for (std::size_t i = 0; i < exact.size(); ++i) c.root[i] = exact[i].mid();
    if (spurious) {
      c.verdict = Verdict::NoSolution;
      c.note = "double root of the selected minors; another minor is nonzero on its neighbourhood";
    } else {
      classify_isolated(c);
      c.note += " (double root)";
    }
    std::vector<ClusterResolution> out{c};
    if (!stray.empty()) {
      if (depth >= opt_.max_depth) {
        ClusterResolution rest;
        rest.hull = detail::hull_of(stray);
        rest.note = "undecided boxes away from the double root";
        out.push_back(rest);
      } else {
        auto more = resolve(stray, depth + 1);
        out.insert(out.end(), more.begin(), more.end());
      }
    }
    return out;
  }

  void classify_isolated(ClusterResolution& c) {
    auto enc = rs_.angles(c.root_box);
    c.angles = rs_.angles(c.root);
    // Spurious roots of the selected minors: some other minor is bounded away from zero.
    for (const auto& m : minors_.value(c.root_box))
      if (!m.contains_zero()) {
        c.verdict = Verdict::NoSolution;
        c.note = "root of the selected minors where another minor is nonzero";
        return;
      }
    if (code_type(rs_.spec.type).solid_angle_vertex >= 0) {
      int v = code_type(rs_.spec.type).solid_angle_vertex;
      auto inc = incident_slots(v);
      try {
        c.solid_angle = solid_angle_interval(enc[inc[0]], enc[inc[1]], enc[inc[2]]);
      } catch (const Error&) {
        c.verdict = Verdict::NoSolution;
        c.note = "solid angle at the distinguished vertex is not positive";
        return;
      }
      if (c.solid_angle->integers.empty()) {
        c.verdict = Verdict::SolidAngleObstruction;
        c.note = "4pi/Omega" + std::to_string(v + 1) + " contains no integer";
        return;
      }
      if (!resolve_with_solid_angle(c, v)) return;
      enc = rs_.angles(c.root_box);
    }
    if (auto n = detail::snap_two_pi_over_n(c.angles, &enc)) {
      auto valid = validate_candidate(*n);
      if (std::holds_alternative<CandidateRecord>(valid)) {
        c.verdict = Verdict::Solved2piOverN;
        c.two_pi_over_n = std::get<CandidateRecord>(valid).n;
        c.candidate_name = candidate_name(*n);
        c.area = std::get<CandidateRecord>(valid).area;
        c.note = "all angles 2pi/n";
      } else {
        c.verdict = Verdict::NoSolution;
        c.note = std::string("2pi/n angles rejected at the ") + to_string(std::get<Invalid>(valid).stage) + " stage";
      }
      return;
    }
    classify_point(c, true);
  }

  // With 4pi/Omega = k forced, add Omega - 4pi/k as a residual and re-solve.
  bool resolve_with_solid_angle(ClusterResolution& c, int v) {
    auto ks = c.solid_angle->integers;
    if (ks.size() != 1) {
      c.note = "solid angle enclosure contains several integers";
      return false;
    }
    long k = ks.front();
    ExprGraph& g = *rs_.graph;
    auto inc = incident_slots(v);
    Expr extra = rs_.theta[inc[0]] + rs_.theta[inc[1]] + rs_.theta[inc[2]] - g.pi_multiple({1, 1}) -
                 g.pi_multiple(PiRational{4, k});
    auto res = rs_.residuals;
    res.push_back(extra);
    CompiledSystem aug(g, res);
    auto r = levenberg_marquardt(aug, c.root);
    if (r.residual > opt_.root_tol) {
      c.verdict = Verdict::SolidAngleObstruction;
      c.note = "no root with 4pi/Omega = " + std::to_string(k);
      return false;
    }
    auto kr = krawczyk(aug, best_square_rows(aug.jacobian(r.x)), r.x);
    if (!kr) {
      c.note = "Krawczyk test failed after fixing the solid angle";
      return false;
    }
    c.root = r.x;
    c.root_box = kr->box;
    c.angles = rs_.angles(c.root);
    return true;
  }

  // Realizability, Goldberg membership and area for a numeric point. An isolated
  // root is closed by its area when that exceeds Sommerville No. 1 (a family match
  // is still recorded); along a curve the area varies, so membership comes first.
  void classify_point(ClusterResolution& c, bool isolated = false) {
    if (!detail::admissible_angles(c.angles)) {
      c.verdict = Verdict::NoSolution;
      c.note = "angles violate the dihedral window or the angle inequalities";
      return;
    }
    auto a = AngleSextuple::radians(c.angles);
    EdgeSextuple e;
    try {
      e = edges_from_angles(a);
    } catch (const Error& err) {
      c.verdict = Verdict::NoSolution;
      c.note = std::string("not realizable: ") + err.what();
      return;
    }
    c.area = normalized_area(validate_edges(e));
    c.family = match_family(a, 1e-8);
    if (isolated && c.area > kSommervilleArea + 1e-6) {
      c.verdict = Verdict::AreaTooLarge;
      c.note = "normalized area exceeds Sommerville No. 1";
      if (c.family) c.note += " (Goldberg family " + std::to_string(c.family->family) + " member)";
      return;
    }
    if (c.family) {
      c.verdict = Verdict::SolvedGoldberg;
      c.note = "Goldberg family " + std::to_string(c.family->family);
      return;
    }
    if (c.area > kSommervilleArea + 1e-6) {
      c.verdict = Verdict::AreaTooLarge;
      c.note = "normalized area exceeds Sommerville No. 1";
      return;
    }
    c.verdict = Verdict::NeedsManual;
    c.note = "realizable root with small area outside known tiles";
  }

  // Positive-dimensional solution set: sample it and classify every sample.
  ClusterResolution resolve_curve(const std::vector<std::vector<Interval>>& cluster, const std::vector<Interval>& hull,
                                  const std::vector<std::vector<double>>& roots) {
    ClusterResolution c;
    c.hull = hull;
    c.curve = true;
    c.root = roots.front();
    c.angles = rs_.angles(c.root);
    std::map<Verdict, int> tally;
    std::optional<ClusterResolution> first_family, first_other;
    for (const auto& x : roots) {
      ClusterResolution s;
      s.root = x;
      s.angles = rs_.angles(x);
      classify_point(s);
      ++tally[s.verdict];
      if (s.verdict == Verdict::SolvedGoldberg && !first_family) first_family = s;
      if (s.verdict != Verdict::SolvedGoldberg && s.verdict != Verdict::NoSolution && !first_other) first_other = s;
    }
    c.samples = static_cast<int>(roots.size());
    (void)cluster;
    if (tally[Verdict::NeedsManual] > 0) {
      c.verdict = Verdict::NeedsManual;
      c.note = "curve sample outside known tiles";
      return c;
    }
    if (first_family) {
      c.verdict = Verdict::SolvedGoldberg;
      c.family = first_family->family;
      c.root = first_family->root;
      c.angles = first_family->angles;
      c.area = first_family->area;
      c.note = "curve of Goldberg family " + std::to_string(c.family->family) + " members (" +
               std::to_string(tally[Verdict::SolvedGoldberg]) + " of " + std::to_string(c.samples) + " samples)";
      return c;
    }
    if (first_other) {
      c.verdict = first_other->verdict;
      c.area = first_other->area;
      c.note = "curve samples: " + first_other->note;
      return c;
    }
    c.verdict = Verdict::NoSolution;
    c.note = "every curve sample violates the angle constraints";
    return c;
  }
};

namespace detail {

// Case verdict from its clusters: any NeedsManual wins, then the most informative outcome.
inline Verdict combine(const std::vector<ClusterResolution>& cs) {
  static const Verdict order[] = {Verdict::NeedsManual, Verdict::Solved2piOverN, Verdict::SolidAngleObstruction,
                                  Verdict::SolvedGoldberg, Verdict::AreaTooLarge, Verdict::NoSolution};
  for (Verdict v : order)
    for (const auto& c : cs)
      if (c.verdict == v) return v;
  return Verdict::NoSolution;
}

}  // namespace detail

inline CaseResolution resolve_survivor(const CaseSpec& c, const std::vector<std::vector<Interval>>& boxes,
                                       const CaseworkOptions& opt = {}) {
  auto rs = build_residual_system(c);
  SurvivorResolver resolver(rs, opt);
  CaseResolution r;
  r.spec = c;
  r.remaining_case = remaining_case_label(c);
  r.survivor_boxes = boxes.size();
  r.clusters = resolver.resolve(boxes);
  r.verdict = detail::combine(r.clusters);
  return r;
}

inline CaseResolution eliminate_case(const CaseSpec& c, const CaseworkOptions& opt = {}) {
  auto t0 = std::chrono::steady_clock::now();
  auto rs = build_residual_system(c);
  auto br = certify_residuals(rs.problem(), rs.box, opt.first_pass, c.id());
  CaseResolution r;
  if (br.status == BoundStatus::Certified) {
    r.spec = c;
    r.remaining_case = remaining_case_label(c);
    r.verdict = Verdict::EliminatedByInterval;
  } else if (br.status == BoundStatus::BudgetExhausted) {
    r.spec = c;
    r.remaining_case = remaining_case_label(c);
    r.verdict = Verdict::NeedsManual;
    ClusterResolution cl;
    cl.hull = rs.box.ranges;
    cl.note = "first-pass budget exhausted with " + std::to_string(br.open_boxes) + " open boxes";
    cl.budget_exhausted = true;
    r.clusters.push_back(cl);
  } else {
    SurvivorResolver resolver(rs, opt);
    r.spec = c;
    r.remaining_case = remaining_case_label(c);
    r.survivor_boxes = br.survivors.size();
    r.clusters = resolver.resolve(br.survivors);
    r.verdict = detail::combine(r.clusters);
  }
  r.certificate = br.certificate;
  r.boxes_examined = br.certificate.boxes_examined;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// ---------------------------------------------------------------------------
// Campaign

struct TypeTally {
  int enumerated = 0;
  int eliminated = 0;  // by the first interval pass
  std::map<Verdict, int> resolved;
};

struct CampaignReport {
  std::vector<CaseResolution> cases;
  std::map<CodeTypeId, TypeTally> tallies;
  std::vector<std::string> survivors;        // ids of cases that survived the interval pass
  std::vector<std::string> needs_manual;     // ids left unresolved
  std::vector<std::string> remaining_cases;  // "RCk: verdict" for the seven hard cases
  bool proof_gap = false;
  bool budget_exhausted = false;  // some unresolved case ran out of budget
  std::string verdict;
  double seconds = 0;
};

inline std::string final_verdict_line() {
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "Sommerville No. 1 uniquely minimizes normalized surface area among face-to-face tetrahedral tiles, "
                "value 2^{11/6}·3^{2/3} ≈ %.4f",
                kSommervilleArea);
  return buf;
}

inline void tally(CampaignReport& rep) {
  rep.tallies.clear();
  rep.survivors.clear();
  rep.needs_manual.clear();
  rep.budget_exhausted = false;
  rep.remaining_cases.clear();
  for (auto t : kCodeTypes) rep.tallies[t];
  for (const auto& r : rep.cases) {
    auto& t = rep.tallies[r.spec.type];
    ++t.enumerated;
    if (r.verdict == Verdict::EliminatedByInterval)
      ++t.eliminated;
    else {
      ++t.resolved[r.verdict];
      rep.survivors.push_back(r.spec.id());
    }
    if (r.verdict == Verdict::NeedsManual) rep.needs_manual.push_back(r.spec.id());
    for (const auto& c : r.clusters) rep.budget_exhausted = rep.budget_exhausted || c.budget_exhausted;
    if (!r.remaining_case.empty()) rep.remaining_cases.push_back(r.remaining_case + ": " + to_string(r.verdict));
  }
  std::sort(rep.remaining_cases.begin(), rep.remaining_cases.end());
  rep.proof_gap = !rep.needs_manual.empty();
  rep.verdict = rep.proof_gap ? "ProofGap: " + std::to_string(rep.needs_manual.size()) + " unresolved case(s)"
                              : final_verdict_line();
}

// Runs every case (or the given subset) on a worker pool; the report does not
// depend on scheduling. `done` lets callers persist or skip cases (resume).
inline CampaignReport run_cases(const std::vector<CaseSpec>& cases, const CaseworkOptions& opt = {},
                                const std::function<std::optional<CaseResolution>(const CaseSpec&)>& cached = {},
                                const std::function<void(std::size_t, const CaseResolution&)>& done = {}) {
  auto t0 = std::chrono::steady_clock::now();
  CampaignReport rep;
  rep.cases.resize(cases.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next++;
      if (i >= cases.size()) return;
      std::optional<CaseResolution> r;
      if (cached) r = cached(cases[i]);
      bool fresh = !r;
      if (!r) r = eliminate_case(cases[i], opt);
      rep.cases[i] = std::move(*r);
      if (done && fresh) {
        std::lock_guard<std::mutex> lock(mu);
        done(i, rep.cases[i]);
      }
    }
  };
  unsigned nt = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  tally(rep);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// Throws ProofGap when any case is left unresolved.
inline CampaignReport run_full_casework(const CaseworkOptions& opt = {}) {
  auto rep = run_cases(enumerate_all_cases(), opt);
  if (rep.proof_gap) {
    std::string ids;
    for (const auto& id : rep.needs_manual) ids += " " + id;
    throw Error(ErrorCode::ProofGap, "unresolved cases:" + ids);
  }
  return rep;
}

}  // namespace tetratile
