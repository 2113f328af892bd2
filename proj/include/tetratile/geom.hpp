#pragma once
// Single-tetrahedron geometry: validity, volume, face areas, dihedral angles and
// the conversions between edge-length and dihedral-angle descriptions.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "core.hpp"

namespace tetratile {

using EdgeSextuple = std::array<double, 6>;
using AreaVector = std::array<double, 4>;
using Point3 = Eigen::Vector3d;

inline constexpr double kResidualTol = 1e-9;
inline constexpr double kClampTol = 1e-12;

// 2^{11/6} * 3^{2/3}
inline const double kSommervilleArea = std::pow(2.0, 11.0 / 6.0) * std::pow(3.0, 2.0 / 3.0);

struct AngleSextuple {
  std::array<double, 6> theta{};
  std::array<std::optional<PiRational>, 6> exact{};

  static AngleSextuple radians(const std::array<double, 6>& t) {
    AngleSextuple a;
    a.theta = t;
    return a;
  }
  static AngleSextuple pi_rational(const std::array<PiRational, 6>& q) {
    AngleSextuple a;
    for (int s = 0; s < 6; ++s) {
      a.theta[s] = q[s].radians();
      a.exact[s] = q[s];
    }
    return a;
  }
  // theta_s = 2*pi / n_s
  static AngleSextuple two_pi_over(const std::array<int, 6>& n) {
    std::array<PiRational, 6> q;
    for (int s = 0; s < 6; ++s) q[s] = PiRational::two_pi_over(n[s]);
    return pi_rational(q);
  }

  double operator[](int s) const { return theta[s]; }
  bool all_exact() const {
    return std::all_of(exact.begin(), exact.end(), [](const auto& e) { return e.has_value(); });
  }
};

inline double clamp_unit(double c, const char* where) {
  if (c > 1.0 + kClampTol || c < -1.0 - kClampTol)
    throw Error(ErrorCode::NumericalInstability, std::string(where) + ": cosine/sine out of range");
  return std::clamp(c, -1.0, 1.0);
}

// Kahan's cancellation-safe Heron formula.
inline double triangle_area(double a, double b, double c) {
  if (a < b) std::swap(a, b);
  if (b < c) std::swap(b, c);
  if (a < b) std::swap(a, b);
  double p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
  return 0.25 * std::sqrt(std::max(p, 0.0));
}

inline double cayley_menger(const EdgeSextuple& e) {
  Eigen::Matrix<double, 5, 5> m = Eigen::Matrix<double, 5, 5>::Zero();
  for (int s = 0; s < 6; ++s) {
    auto [i, j] = kSlotVertices[s];
    m(i, j) = m(j, i) = e[s] * e[s];
  }
  for (int i = 0; i < 4; ++i) m(i, 4) = m(4, i) = 1.0;
  return m.fullPivLu().determinant();
}

class Tetrahedron {
 public:
  const EdgeSextuple& edges() const { return edges_; }
  double edge(int s) const { return edges_[s]; }
  double volume() const { return volume_; }
  double cayley_menger_value() const { return cm_; }
  const AreaVector& face_areas() const { return faces_; }
  double face_area(int i) const { return faces_[i]; }
  double surface_area() const { return faces_[0] + faces_[1] + faces_[2] + faces_[3]; }

 private:
  friend Tetrahedron validate_edges(const EdgeSextuple& e);
  Tetrahedron() = default;
  EdgeSextuple edges_{};
  double volume_ = 0, cm_ = 0;
  AreaVector faces_{};
};

inline Tetrahedron validate_edges(const EdgeSextuple& e) {
  for (int s = 0; s < 6; ++s)
    if (!(e[s] > 0.0) || !std::isfinite(e[s]))
      throw Error(ErrorCode::NonPositiveEdge, "d" + slot_name(s) + " must be positive");
  Tetrahedron t;
  t.edges_ = e;
  for (int i = 0; i < 4; ++i) {
    auto f = face_slots(i);
    double a = e[f[0]], b = e[f[1]], c = e[f[2]];
    if (a >= b + c || b >= a + c || c >= a + b)
      throw Error(ErrorCode::TriangleInequalityViolated, "face F" + std::to_string(i + 1));
    t.faces_[i] = triangle_area(a, b, c);
  }
  t.cm_ = cayley_menger(e);
  double scale = *std::max_element(e.begin(), e.end());
  if (!(t.cm_ > 1e-13 * std::pow(scale, 6)))
    throw Error(ErrorCode::DegenerateFlat, "Cayley-Menger determinant is not positive");
  t.volume_ = std::sqrt(t.cm_ / 288.0);
  return t;
}

// cos(theta_ij) = D_ij / (16 |F_k| |F_l|)
inline AngleSextuple dihedral_angles(const Tetrahedron& t) {
  const auto& e = t.edges();
  auto sq = [&](int a, int b) {
    double d = e[slot_index(a, b)];
    return d * d;
  };
  std::array<double, 6> th{};
  for (int s = 0; s < 6; ++s) {
    auto [i, j] = kSlotVertices[s];
    auto [k, l] = complement_vertices(s);
    double dij = sq(i, j);
    double D = -dij * dij + (sq(i, k) + sq(i, l) + sq(j, k) + sq(j, l) - 2.0 * sq(k, l)) * dij +
               (sq(i, k) - sq(j, k)) * (sq(j, l) - sq(i, l));
    double c = D / (16.0 * t.face_area(k) * t.face_area(l));
    th[s] = std::acos(clamp_unit(c, "dihedral_angles"));
  }
  return AngleSextuple::radians(th);
}

// Symmetric matrix whose (p,q) entry is cos of the dihedral angle between F_p and F_q.
inline Eigen::Matrix4d angle_matrix(const AngleSextuple& a) {
  Eigen::Matrix4d m = -Eigen::Matrix4d::Identity();
  for (int s = 0; s < 6; ++s) {
    auto [p, q] = complement_vertices(s);
    m(p, q) = m(q, p) = std::cos(a[s]);
  }
  return m;
}

inline double angle_determinant_residual(const AngleSextuple& a) {
  return angle_matrix(a).determinant();
}

inline AreaVector area_vector(const AngleSextuple& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(angle_matrix(a));
  const auto& ev = es.eigenvalues();
  int best = 0;
  for (int i = 1; i < 4; ++i)
    if (std::abs(ev[i]) < std::abs(ev[best])) best = i;
  if (std::abs(ev[best]) > kResidualTol)
    throw Error(ErrorCode::NotRealizable, "angle matrix has trivial null space");
  for (int i = 0; i < 4; ++i)
    if (i != best && std::abs(ev[i]) <= kResidualTol)
      throw Error(ErrorCode::NotRealizable, "angle matrix null space is not one-dimensional");
  Eigen::Vector4d v = es.eigenvectors().col(best);
  if (v.sum() < 0) v = -v;
  double mx = v.maxCoeff();
  AreaVector f{};
  for (int i = 0; i < 4; ++i) {
    f[i] = v[i] / mx;
    if (!(f[i] > kResidualTol))
      throw Error(ErrorCode::NotRealizable, "area vector has a non-positive entry");
  }
  return f;
}

inline double max_angle_difference(const AngleSextuple& a, const AngleSextuple& b) {
  double m = 0;
  for (int s = 0; s < 6; ++s) m = std::max(m, std::abs(a[s] - b[s]));
  return m;
}

// d_kl is proportional to |F_i||F_j| sin(theta_kl) with {i,j} the complement of {k,l}.
inline EdgeSextuple edges_from_angles(const AngleSextuple& a) {
  for (int s = 0; s < 6; ++s)
    if (!(a[s] > 0.0 && a[s] < kPi))
      throw Error(ErrorCode::NotRealizable, "angle theta" + slot_name(s) + " outside (0, pi)");
  AreaVector f = area_vector(a);
  EdgeSextuple e{};
  for (int s = 0; s < 6; ++s) {
    auto [i, j] = complement_vertices(s);
    e[s] = f[i] * f[j] * std::sin(a[s]);
  }
  double d12 = e[0];
  for (auto& x : e) x /= d12;
  Tetrahedron t = [&] {
    try {
      return validate_edges(e);
    } catch (const Error& err) {
      throw Error(ErrorCode::NotRealizable, std::string("reconstructed edges invalid: ") + err.what());
    }
  }();
  if (max_angle_difference(dihedral_angles(t), a) > kResidualTol)
    throw Error(ErrorCode::NotRealizable, "round trip through edge lengths does not reproduce the angles");
  return e;
}

inline double normalized_area(const Tetrahedron& t) {
  return t.surface_area() / std::cbrt(t.volume() * t.volume());
}

// Omega_v = sum of the three dihedral angles at vertex v, minus pi.
inline double solid_angle(const AngleSextuple& a, int vertex) {
  auto inc = incident_slots(vertex);
  return a[inc[0]] + a[inc[1]] + a[inc[2]] - kPi;
}

// Sum of the four angles left after removing slot s and its opposite; must stay below 2*pi.
inline double quadrilateral_sum(const AngleSextuple& a, int s) {
  double total = 0;
  for (int r = 0; r < 6; ++r)
    if (r != s && r != opposite_slot(s)) total += a[r];
  return total;
}

inline bool satisfies_angle_inequalities(const AngleSextuple& a) {
  for (int v = 0; v < 4; ++v)
    if (!(solid_angle(a, v) > 0)) return false;
  for (int s = 0; s < 3; ++s)
    if (!(quadrilateral_sum(a, s) < 2 * kPi)) return false;
  return true;
}

inline double min_sine_bound(double normalized) {
  return std::clamp(243.0 / (normalized * normalized * normalized), 0.0, 1.0);
}

inline double min_angle_bound(double normalized) { return std::asin(min_sine_bound(normalized)); }

struct LawOfCosinesResidual {
  double law_of_cosines = 0;  // worst face, relative to max |F|^2
  double projection = 0;      // worst face, relative to max |F|
  double max() const { return std::max(law_of_cosines, projection); }
};

inline LawOfCosinesResidual law_of_cosines_residual(const Tetrahedron& t) {
  AngleSextuple a = dihedral_angles(t);
  const auto& F = t.face_areas();
  double fmax = *std::max_element(F.begin(), F.end());
  // Angle between faces p and q lives on the edge joining the other two vertices.
  auto cos_between = [&](int p, int q) {
    int s = opposite_slot(slot_index(p, q));
    return std::cos(a[s]);
  };
  LawOfCosinesResidual r;
  for (int i = 0; i < 4; ++i) {
    double sq = 0, cross = 0, proj = 0;
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      sq += F[j] * F[j];
      proj += F[j] * cos_between(i, j);
      for (int k = j + 1; k < 4; ++k)
        if (k != i) cross += F[j] * F[k] * cos_between(j, k);
    }
    r.law_of_cosines = std::max(r.law_of_cosines, std::abs(F[i] * F[i] - (sq - 2 * cross)) / (fmax * fmax));
    r.projection = std::max(r.projection, std::abs(F[i] - proj) / fmax);
  }
  return r;
}

// Planar angle at V_i in triangle V_j V_i V_k.
inline double face_angle(const Tetrahedron& t, int i, int j, int k) {
  double a = t.edge(slot_index(i, j)), b = t.edge(slot_index(i, k)), c = t.edge(slot_index(j, k));
  return std::acos(clamp_unit((a * a + b * b - c * c) / (2 * a * b), "face_angle"));
}

// Right-hand side of V^2 = (2/9)|F_j||F_k||F_l| sin(theta_ij) sin(theta_ik) sin(angle V_j V_i V_k),
// where l is the remaining vertex.
inline double volume_squared_from_faces(const Tetrahedron& t, const AngleSextuple& a, int i, int j, int k) {
  int l = 6 - i - j - k;
  return 2.0 / 9.0 * t.face_area(j) * t.face_area(k) * t.face_area(l) * std::sin(a[slot_index(i, j)]) *
         std::sin(a[slot_index(i, k)]) * std::sin(face_angle(t, i, j, k));
}

// Places V1 at the origin, V2 on the x axis, V3 in the xy half-plane y > 0 and V4 above it (z > 0).
inline std::array<Point3, 4> embed(const Tetrahedron& t) {
  const auto& e = t.edges();
  double d12 = e[0], d13 = e[1], d14 = e[2], d23 = e[3], d24 = e[4], d34 = e[5];
  std::array<Point3, 4> p;
  p[0] = Point3::Zero();
  p[1] = Point3(d12, 0, 0);
  double x3 = (d12 * d12 + d13 * d13 - d23 * d23) / (2 * d12);
  double y3 = std::sqrt(std::max(d13 * d13 - x3 * x3, 0.0));
  p[2] = Point3(x3, y3, 0);
  double x4 = (d12 * d12 + d14 * d14 - d24 * d24) / (2 * d12);
  double y4 = (d14 * d14 - d34 * d34 + x3 * x3 + y3 * y3 - 2 * x3 * x4) / (2 * y3);
  double z4 = std::sqrt(std::max(d14 * d14 - x4 * x4 - y4 * y4, 0.0));
  p[3] = Point3(x4, y4, z4);
  return p;
}

inline EdgeSextuple edges_of_points(const std::array<Point3, 4>& p) {
  EdgeSextuple e{};
  for (int s = 0; s < 6; ++s) e[s] = (p[kSlotVertices[s][0]] - p[kSlotVertices[s][1]]).norm();
  return e;
}

}  // namespace tetratile
