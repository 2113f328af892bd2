#pragma once
// Goldberg's three one-parameter families of tetrahedral tiles.

#include <cmath>
#include <optional>

#include "branch_bound.hpp"
#include "geom.hpp"
#include "symmetry.hpp"

namespace tetratile {

struct FamilyParam {
  int family = 1;
  double a = 0;
};

// Every family is a valid tetrahedron exactly for 0 < a < 1; at a = 1 face F4 = (1, 2, 1) is flat.
inline constexpr double kFamilyMinA = 0.0;
inline constexpr double kFamilyMaxA = 1.0;

namespace detail {

inline double lift(double, double c) { return c; }
inline Interval lift(const Interval&, double c) { return Interval(c); }
inline Expr lift(const Expr& like, double c) { return like.g->constant(c); }

}  // namespace detail

// Squared edge lengths, polynomial in a.
template <class T>
std::array<T, 6> family_squared_edges(int family, const T& a) {
  T one = detail::lift(a, 1.0);
  T a2 = a * a;
  switch (family) {
    case 1: return {one, 3.0 * a2 + 1.0, 9.0 * a2, one, 3.0 * a2 + 1.0, one};
    case 2: return {one, 3.0 * a2 + 1.0, 2.25 * a2, one, 1.0 - 0.75 * a2, 1.0 - 0.75 * a2};
    case 3: return {one, 1.5 * a2 + 0.75, 9.0 * a2, detail::lift(a, 0.25), 3.0 * a2 + 1.0, 1.5 * a2 + 0.75};
  }
  throw Error(ErrorCode::InvalidConfig, "Goldberg family must be 1, 2 or 3");
}

// Total surface area and 144 V^2 from squared edges.
template <class T>
std::pair<T, T> area_and_volume_form(const std::array<T, 6>& q) {
  using std::sqrt;
  T S = detail::lift(q[0], 0.0);
  for (int i = 0; i < 4; ++i) {
    auto f = face_slots(i);
    const T &p = q[f[0]], &r = q[f[1]], &t = q[f[2]];
    // 16 A^2 = 4 p r - (p + r - t)^2
    S = S + 0.25 * sqrt(4.0 * p * r - sqr(p + r - t));
  }
  const T &d12 = q[0], &d13 = q[1], &d14 = q[2], &d23 = q[3], &d24 = q[4], &d34 = q[5];
  T W = d12 * d34 * (d13 + d14 + d23 + d24 - d12 - d34) + d13 * d24 * (d12 + d14 + d23 + d34 - d13 - d24) +
        d14 * d23 * (d12 + d13 + d24 + d34 - d14 - d23) - d12 * d13 * d23 - d12 * d14 * d24 - d13 * d14 * d34 -
        d23 * d24 * d34;
  return {S, W};
}

inline EdgeSextuple family_edges(const FamilyParam& f) {
  if (!(f.a > kFamilyMinA && f.a < kFamilyMaxA))
    throw Error(ErrorCode::OutOfRange, "Goldberg parameter a outside (0, 1)");
  auto q = family_squared_edges(f.family, f.a);
  EdgeSextuple e{};
  for (int s = 0; s < 6; ++s) e[s] = std::sqrt(q[s]);
  try {
    validate_edges(e);
  } catch (const Error& err) {
    throw Error(ErrorCode::OutOfRange, std::string("Goldberg edges invalid: ") + err.what());
  }
  return e;
}

inline double family_area(int family, double a) {
  return normalized_area(validate_edges(family_edges({family, a})));
}

struct FamilyMinimum {
  int family = 1;
  double a_star = 0;
  double area_star = 0;
  // Interval-certified lower bound of the normalized area on [a_star - 1e-3, a_star + 1e-3].
  double certified_lower = 0;
  bool certified = false;
};

inline FamilyMinimum minimize_family(int family) {
  auto f = [&](double a) { return family_area(family, a); };
  // Coarse scan to bracket, then golden-section.
  const int n = 1000;
  double best_a = 0.5, best = 1e300;
  for (int i = 1; i < n; ++i) {
    double a = kFamilyMaxA * i / n;
    double v = f(a);
    if (v < best) best = v, best_a = a;
  }
  double lo = std::max(best_a - 1.0 / n, 1e-9), hi = std::min(best_a + 1.0 / n, 1 - 1e-9);
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-9) {
    if (f1 < f2) {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - phi * (hi - lo), f1 = f(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + phi * (hi - lo), f2 = f(x2);
    }
  }
  FamilyMinimum m;
  m.family = family;
  m.a_star = 0.5 * (lo + hi);
  m.area_star = f(m.a_star);

  // S^3 - c * 144 V^2 > 0 on the window certifies S / V^{2/3} > cbrt(144 c).
  double target = m.area_star - 1e-7;
  double c = target * target * target / 144.0;
  ExprGraph g(1);
  Expr a = g.var(0);
  auto [S, W] = area_and_volume_form(family_squared_edges(family, a));
  Expr r = S * S * S - c * W;
  Box box{{"a"}, {Interval(m.a_star - 1e-3, m.a_star + 1e-3)}, "Goldberg family " + std::to_string(family)};
  BoundOptions opt;
  opt.width_floor = 1e-12;
  opt.budget = 200'000;
  auto res = certify_residuals(ResidualProblem{&g, {r}, {}}, box, opt);
  m.certified = res.status == BoundStatus::Certified;
  if (m.certified) m.certified_lower = down(std::cbrt(144.0 * c), 4);
  return m;
}

struct FamilyMatch {
  int family = 1;
  double a = 0;
  VertexPerm perm{};  // apply_perm(input, perm) is proportional to family_edges(a)
  double residual = 0;
};

// Edge-level membership: some relabeling of e is a scaled family sextuple.
inline std::optional<FamilyMatch> match_family_edges(const EdgeSextuple& e, int family, double tol = 1e-9) {
  for (const auto& p : vertex_perms()) {
    auto y = apply_perm(e, p);
    for (int s = 5; s >= 0; --s) y[s] /= y[0];
    double a = family == 2 ? 2.0 * y[2] / 3.0 : y[2] / 3.0;
    if (!(a > kFamilyMinA && a < kFamilyMaxA)) continue;
    auto q = family_squared_edges(family, a);
    double worst = 0;
    for (int s = 0; s < 6; ++s) worst = std::max(worst, std::abs(std::sqrt(q[s]) - y[s]) / y[s]);
    if (worst <= tol) return FamilyMatch{family, a, p, worst};
  }
  return std::nullopt;
}

inline std::optional<FamilyMatch> match_family_edges(const EdgeSextuple& e, double tol = 1e-9) {
  for (int f = 1; f <= 3; ++f)
    if (auto m = match_family_edges(e, f, tol)) return m;
  return std::nullopt;
}

// Angles determine the shape up to similarity, so membership reduces to the edge test,
// followed by an angle-level check of the recovered parameter.
inline std::optional<FamilyMatch> match_family(const AngleSextuple& ang, double tol = 1e-9) {
  EdgeSextuple e;
  try {
    e = edges_from_angles(ang);
  } catch (const Error&) {
    return std::nullopt;
  }
  for (int f = 1; f <= 3; ++f) {
    auto m = match_family_edges(e, f, 1e-7);
    if (!m) continue;
    auto fam = dihedral_angles(validate_edges(family_edges({f, m->a})));
    auto moved = apply_perm(ang.theta, m->perm);
    double worst = 0;
    for (int s = 0; s < 6; ++s) worst = std::max(worst, std::abs(moved[s] - fam[s]));
    if (worst <= tol) {
      m->residual = worst;
      return m;
    }
  }
  return std::nullopt;
}

struct DoublingCheck {
  double collinearity = 0;  // distance of V4 from the line V3 V3', relative to |V3 V3'|
  double midpoint = 0;      // |V4 - (V3 + V3')/2| relative to |V3 V3'|
  EdgeSextuple doubled{};   // edges of V2 V3 V1 V3'
  std::optional<FamilyMatch> match;
};

// Two copies glued along the face opposite V3, the second turned half a revolution
// about the axis through V4 and the midpoint of V1 V2 (needs d14 = d24).
inline DoublingCheck doubling_check(const Tetrahedron& t) {
  auto P = embed(t);
  Point3 m = 0.5 * (P[0] + P[1]);
  Point3 axis = (P[3] - m).normalized();
  Point3 w = P[2] - m;
  Point3 along = axis * axis.dot(w);
  Point3 v3p = m + along - (w - along);
  DoublingCheck d;
  double len = (v3p - P[2]).norm();
  Point3 dir = (v3p - P[2]) / len;
  Point3 off = P[3] - P[2];
  d.collinearity = (off - dir * dir.dot(off)).norm() / len;
  d.midpoint = (P[3] - 0.5 * (P[2] + v3p)).norm() / len;
  d.doubled = edges_of_points({P[1], P[2], P[0], v3p});
  d.match = match_family_edges(d.doubled, 1, 1e-7);
  return d;
}

}  // namespace tetratile
