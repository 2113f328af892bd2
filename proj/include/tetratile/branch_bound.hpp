#pragma once
// Interval branch and bound proving that a system of residuals has no common
// zero over a box, i.e. that the sum of their squares is strictly positive.
//
// Boxes are bisected at the midpoint of their widest variable (lowest index on
// ties) and processed lowest-lower-bound first. The bisection tree is recorded
// in preorder as a string over {S, P, X, U}:
//   S  split node, followed by its lower then upper child
//   P  leaf whose objective lower bound is > 0
//   X  leaf excluded because some side constraint g >= 0 certainly fails
//   U  undecided leaf (width at or below the floor)
// Since the split rule is a function of the box alone, the tree plus the root box
// determines every leaf box; replay_certificate re-derives and re-checks them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "expr.hpp"

namespace tetratile {

struct Box {
  std::vector<std::string> names;
  std::vector<Interval> ranges;
  std::string provenance;

  std::size_t size() const { return ranges.size(); }
  double max_width() const {
    double w = 0;
    for (const auto& r : ranges) w = std::max(w, r.width());
    return w;
  }
};

struct BoundOptions {
  double width_floor = 1e-4;
  std::int64_t budget = 1'000'000;  // maximum number of bisections
  bool mean_value = true;           // intersect natural enclosures with the mean-value form
};

// residuals must vanish simultaneously; every constraint g must satisfy g >= 0.
struct ResidualProblem {
  ExprGraph* graph = nullptr;
  std::vector<Expr> residuals;
  std::vector<Expr> constraints;
};

enum class LeafKind : char { Positive = 'P', Infeasible = 'X', Undecided = 'U' };

struct PositivityCertificate {
  std::string case_id;
  Box root;
  std::string tree;
  std::int64_t boxes_examined = 0;
  std::int64_t positive_leaves = 0;
  std::int64_t infeasible_leaves = 0;
  double min_leaf_bound = 0;  // smallest objective lower bound over the P leaves
  double wall_seconds = 0;
};

enum class BoundStatus { Certified, Undecided, BudgetExhausted };

struct BoundResult {
  BoundStatus status = BoundStatus::Certified;
  PositivityCertificate certificate;       // tree is partial unless status == Certified
  std::vector<std::vector<Interval>> survivors;  // U leaves, in preorder
  std::int64_t open_boxes = 0;             // boxes left unprocessed on budget exhaustion
};

namespace detail {

class BoxEvaluator {
 public:
  BoxEvaluator(const ResidualProblem& p, bool mean_value) : nres_(p.residuals.size()), ncons_(p.constraints.size()) {
    nvar_ = p.graph->num_vars();
    std::vector<Expr> outs = p.residuals;
    outs.insert(outs.end(), p.constraints.begin(), p.constraints.end());
    mean_value_ = mean_value && nvar_ > 0;
    if (mean_value_)
      for (const auto& r : p.residuals)
        for (int v = 0; v < nvar_; ++v) outs.push_back(p.graph->diff(r, v));
    prog_ = Program(*p.graph, outs);
    value_prog_ = Program(*p.graph, p.residuals);
  }

  struct Verdict {
    LeafKind kind;
    double lower_bound;  // of the sum of squares
  };

  // Undecided here means "not decided on this box"; the caller decides whether to split.
  Verdict test(const std::vector<Interval>& x) const {
    std::vector<Interval> out;
    {
      std::vector<Interval> scratch;
      prog_.eval<Interval>(std::span<const Interval>(x), scratch, out);
    }
    for (std::size_t c = 0; c < ncons_; ++c)
      if (out[nres_ + c].hi < 0) return {LeafKind::Infeasible, 0.0};
    std::vector<Interval> enc(out.begin(), out.begin() + nres_);
    if (mean_value_) {
      std::vector<Interval> center(x.size()), cval, scratch;
      for (std::size_t i = 0; i < x.size(); ++i) center[i] = Interval(x[i].mid());
      value_prog_.eval<Interval>(std::span<const Interval>(center), scratch, cval);
      std::size_t base = nres_ + ncons_;
      for (std::size_t k = 0; k < nres_; ++k) {
        Interval mv = cval[k];
        for (int v = 0; v < nvar_; ++v) mv += out[base + k * nvar_ + v] * (x[v] - center[v]);
        // Both forms enclose the same range, so they always overlap.
        if (intersects(mv, enc[k])) enc[k] = intersect(mv, enc[k]);
      }
    }
    Interval total(0.0);
    for (const auto& r : enc) total += sqr(r);
    if (total.lo > 0) return {LeafKind::Positive, total.lo};
    return {LeafKind::Undecided, 0.0};
  }

  std::size_t num_vars() const { return static_cast<std::size_t>(nvar_); }

 private:
  std::size_t nres_, ncons_;
  int nvar_ = 0;
  bool mean_value_ = false;
  Program prog_, value_prog_;
};

inline int split_variable(const std::vector<Interval>& x) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(x.size()); ++i)
    if (x[i].width() > x[best].width()) best = i;
  return best;
}

inline std::pair<std::vector<Interval>, std::vector<Interval>> bisect(const std::vector<Interval>& x) {
  int v = split_variable(x);
  double m = x[v].lo + 0.5 * (x[v].hi - x[v].lo);
  auto a = x, b = x;
  a[v].hi = m;
  b[v].lo = m;
  return {a, b};
}

inline double max_width(const std::vector<Interval>& x) {
  double w = 0;
  for (const auto& r : x) w = std::max(w, r.width());
  return w;
}

}  // namespace detail

inline BoundResult certify_residuals(const ResidualProblem& problem, const Box& root, const BoundOptions& opt,
                                     const std::string& case_id = "") {
  auto t0 = std::chrono::steady_clock::now();
  detail::BoxEvaluator ev(problem, opt.mean_value);

  struct TreeNode {
    std::vector<Interval> box;
    int lo_child = -1, hi_child = -1;
    char mark = '?';
  };
  std::vector<TreeNode> nodes;
  nodes.push_back({root.ranges});
  using Item = std::pair<double, int>;  // (lower bound, node id): smallest first, ties by id
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  queue.push({0.0, 0});

  BoundResult res;
  auto& cert = res.certificate;
  cert.case_id = case_id;
  cert.root = root;
  cert.min_leaf_bound = std::numeric_limits<double>::infinity();
  std::int64_t splits = 0;
  bool exhausted = false;

  while (!queue.empty()) {
    int id = queue.top().second;
    queue.pop();
    ++cert.boxes_examined;
    auto verdict = ev.test(nodes[id].box);
    if (verdict.kind == LeafKind::Positive) {
      nodes[id].mark = 'P';
      ++cert.positive_leaves;
      cert.min_leaf_bound = std::min(cert.min_leaf_bound, verdict.lower_bound);
      continue;
    }
    if (verdict.kind == LeafKind::Infeasible) {
      nodes[id].mark = 'X';
      ++cert.infeasible_leaves;
      continue;
    }
    if (detail::max_width(nodes[id].box) <= opt.width_floor) {
      nodes[id].mark = 'U';
      continue;
    }
    if (splits >= opt.budget) {
      exhausted = true;
      queue.push({0.0, id});
      break;
    }
    ++splits;
    auto [a, b] = detail::bisect(nodes[id].box);
    int ia = static_cast<int>(nodes.size());
    nodes.push_back({std::move(a)});
    nodes.push_back({std::move(b)});
    nodes[id].mark = 'S';
    nodes[id].lo_child = ia;
    nodes[id].hi_child = ia + 1;
    // Children inherit the parent's (zero) bound; the queue order is only a schedule.
    queue.push({verdict.lower_bound, ia});
    queue.push({verdict.lower_bound, ia + 1});
  }

  res.open_boxes = static_cast<std::int64_t>(queue.size());
  // Preorder serialization; unprocessed nodes appear as '?'.
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    cert.tree.push_back(nodes[id].mark);
    if (nodes[id].mark == 'U') res.survivors.push_back(nodes[id].box);
    if (nodes[id].mark == 'S') {
      stack.push_back(nodes[id].hi_child);
      stack.push_back(nodes[id].lo_child);
    }
  }
  if (cert.positive_leaves == 0) cert.min_leaf_bound = 0;
  cert.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (exhausted)
    res.status = BoundStatus::BudgetExhausted;
  else if (!res.survivors.empty())
    res.status = BoundStatus::Undecided;
  else
    res.status = BoundStatus::Certified;
  return res;
}

// Single nonnegative objective: certified when its interval lower bound is > 0 on every leaf.
// A single residual r with objective r^2 gives the same decisions as certify_residuals({r}).
inline BoundResult certify_positive(Expr objective, const Box& box, double width_floor = 1e-4,
                                    std::int64_t budget = 1'000'000) {
  ExprGraph* g = objective.g;
  // With f >= 0 pointwise, an enclosure of f that excludes zero has lower bound > 0.
  ResidualProblem p{g, {objective}, {}};
  BoundOptions opt;
  opt.width_floor = width_floor;
  opt.budget = budget;
  opt.mean_value = false;
  auto r = certify_residuals(p, box, opt);
  if (r.status == BoundStatus::BudgetExhausted)
    throw Error(ErrorCode::BudgetExhausted, std::to_string(r.open_boxes) + " boxes remaining");
  return r;
}

// Re-derives every leaf box from the tree and re-checks it with fresh evaluation.
// Returns the number of leaves checked, or nullopt when any leaf fails or the tree
// is malformed. Undecided leaves are accepted only when allow_undecided is set.
inline std::optional<std::int64_t> replay_certificate(const ResidualProblem& problem,
                                                      const PositivityCertificate& cert, bool mean_value = true,
                                                      bool allow_undecided = false) {
  detail::BoxEvaluator ev(problem, mean_value);
  std::size_t pos = 0;
  std::int64_t leaves = 0;
  std::vector<std::vector<Interval>> stack{cert.root.ranges};
  while (!stack.empty()) {
    if (pos >= cert.tree.size()) return std::nullopt;
    auto box = std::move(stack.back());
    stack.pop_back();
    char c = cert.tree[pos++];
    if (c == 'S') {
      auto [a, b] = detail::bisect(box);
      stack.push_back(std::move(b));
      stack.push_back(std::move(a));
      continue;
    }
    ++leaves;
    auto v = ev.test(box);
    if (c == 'P' && v.kind != LeafKind::Positive) return std::nullopt;
    if (c == 'X' && v.kind != LeafKind::Infeasible) return std::nullopt;
    if (c == 'U' && !allow_undecided) return std::nullopt;
    if (c != 'P' && c != 'X' && c != 'U') return std::nullopt;
  }
  if (pos != cert.tree.size()) return std::nullopt;
  return leaves;
}

// Expands the tree into its leaf boxes with their marks, in preorder.
inline std::vector<std::pair<char, std::vector<Interval>>> certificate_leaves(const PositivityCertificate& cert) {
  std::vector<std::pair<char, std::vector<Interval>>> out;
  std::size_t pos = 0;
  std::vector<std::vector<Interval>> stack{cert.root.ranges};
  while (!stack.empty() && pos < cert.tree.size()) {
    auto box = std::move(stack.back());
    stack.pop_back();
    char c = cert.tree[pos++];
    if (c == 'S') {
      auto [a, b] = detail::bisect(box);
      stack.push_back(std::move(b));
      stack.push_back(std::move(a));
    } else {
      out.emplace_back(c, std::move(box));
    }
  }
  return out;
}

struct SolidAngleEnclosure {
  Interval omega;
  Interval four_pi_over_omega;
  std::vector<long> integers;  // integers inside four_pi_over_omega
};

inline std::vector<long> integers_in(const Interval& x) {
  std::vector<long> out;
  for (double k = std::ceil(x.lo); k <= x.hi; k += 1.0) out.push_back(static_cast<long>(k));
  return out;
}

// Omega = a + b + c - pi and 4*pi/Omega for three incident dihedral angles.
inline SolidAngleEnclosure solid_angle_interval(const Interval& a, const Interval& b, const Interval& c) {
  SolidAngleEnclosure s;
  s.omega = a + b + c - kPiI;
  if (!s.omega.strictly_positive()) throw Error(ErrorCode::OmegaStraddlesZero, "solid angle interval reaches 0");
  s.four_pi_over_omega = Interval(4.0) * kPiI / s.omega;
  s.integers = integers_in(s.four_pi_over_omega);
  return s;
}

}  // namespace tetratile
