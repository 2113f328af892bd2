#include <gtest/gtest.h>

#include <random>

#include "tetratile/geom.hpp"

using namespace tetratile;

namespace {

const double r3 = std::sqrt(3.0);
const EdgeSextuple kRegular{1, 1, 1, 1, 1, 1};
const EdgeSextuple kSommerville1{2, r3, r3, r3, r3, 2};

AngleSextuple so1_angles() {
  return AngleSextuple::pi_rational({PiRational(1, 2), PiRational(1, 3), PiRational(1, 3), PiRational(1, 3),
                                     PiRational(1, 3), PiRational(1, 2)});
}

// Laplace expansion on integer matrices: an exact oracle for the bordered determinant.
long long det_int(std::vector<std::vector<long long>> m) {
  std::size_t n = m.size();
  if (n == 1) return m[0][0];
  long long total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<long long>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<long long> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(row);
    }
    total += (c % 2 ? -1 : 1) * m[0][c] * det_int(minor);
  }
  return total;
}

long long cm_oracle(const std::array<long long, 6>& sq) {
  std::vector<std::vector<long long>> m(5, std::vector<long long>(5, 0));
  for (int s = 0; s < 6; ++s) {
    auto [i, j] = kSlotVertices[s];
    m[i][j] = m[j][i] = sq[s];
  }
  for (int i = 0; i < 4; ++i) m[i][4] = m[4][i] = 1;
  return det_int(m);
}

double triple_volume(const std::array<Point3, 4>& p) {
  return std::abs((p[1] - p[0]).dot((p[2] - p[0]).cross(p[3] - p[0]))) / 6.0;
}

// Random tetrahedra with a volume floor so that relative checks are meaningful.
std::vector<std::array<Point3, 4>> random_tetrahedra(int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<std::array<Point3, 4>> out;
  while (static_cast<int>(out.size()) < count) {
    std::array<Point3, 4> p;
    for (auto& q : p) q = Point3(u(rng), u(rng), u(rng));
    double v = triple_volume(p);
    double scale = edges_of_points(p)[0];
    for (double e : edges_of_points(p)) scale = std::max(scale, e);
    if (v > 0.02 * scale * scale * scale) out.push_back(p);
  }
  return out;
}

}  // namespace

TEST(ValidateEdges, RegularTetrahedron) {
  Tetrahedron t = validate_edges(kRegular);
  EXPECT_NEAR(t.volume(), 1.0 / (6.0 * std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(t.cayley_menger_value(), 4.0, 1e-13);
  for (double f : t.face_areas()) EXPECT_NEAR(f, std::sqrt(3.0) / 4.0, 1e-15);
}

TEST(ValidateEdges, DegenerateFaceRejected) {
  try {
    validate_edges({1, 1, 1, 1, 1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TriangleInequalityViolated);
  }
}

TEST(ValidateEdges, FlatConfigurationRejected) {
  // Four coplanar points: unit square with its diagonals.
  double d = std::sqrt(2.0);
  try {
    validate_edges({1, d, 1, 1, d, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateFlat);
  }
  EXPECT_THROW(validate_edges({1, 1, 0, 1, 1, 1}), Error);
}

TEST(ValidateEdges, SommervilleOneIsValid) {
  Tetrahedron t = validate_edges(kSommerville1);
  EXPECT_GT(t.volume(), 0);
}

TEST(CayleyMenger, MatchesExactOracle) {
  EXPECT_EQ(cm_oracle({1, 1, 1, 1, 1, 1}), 4);
  EXPECT_NEAR(cayley_menger(kRegular), 4.0, 1e-13);
  // Squared Sommerville No. 1 edges are integers, so the oracle is exact.
  long long exact = cm_oracle({4, 3, 3, 3, 3, 4});
  EXPECT_EQ(exact, 128);
  EXPECT_NEAR(cayley_menger(kSommerville1), static_cast<double>(exact), 1e-11);
}

TEST(CayleyMenger, DegreeSixHomogeneity) {
  for (double s : {0.5, 2.0, 3.7}) {
    EdgeSextuple e;
    e.fill(s);
    EXPECT_NEAR(cayley_menger(e) / (4 * std::pow(s, 6)), 1.0, 1e-12);
  }
}

TEST(DihedralAngles, Regular) {
  auto a = dihedral_angles(validate_edges(kRegular));
  for (int s = 0; s < 6; ++s) EXPECT_NEAR(a[s], std::acos(1.0 / 3.0), 1e-14);
  EXPECT_NEAR(std::acos(1.0 / 3.0), 1.230959, 1e-6);
}

TEST(DihedralAngles, SommervilleOne) {
  auto a = dihedral_angles(validate_edges(kSommerville1));
  auto want = so1_angles();
  for (int s = 0; s < 6; ++s) EXPECT_NEAR(a[s], want[s], 1e-12);
}

TEST(AngleDeterminant, VanishesForRealTetrahedra) {
  EXPECT_NEAR(angle_determinant_residual(so1_angles()), 0.0, 1e-14);
  AngleSextuple reg = AngleSextuple::radians({1, 1, 1, 1, 1, 1});
  reg.theta.fill(std::acos(1.0 / 3.0));
  EXPECT_NEAR(angle_determinant_residual(reg), 0.0, 1e-14);
}

TEST(AngleDeterminant, AllRightAngles) {
  // With every cosine zero the matrix is -I; Laplace expansion gives det = 1.
  std::vector<std::vector<long long>> minus_id(4, std::vector<long long>(4, 0));
  for (int i = 0; i < 4; ++i) minus_id[i][i] = -1;
  long long oracle = det_int(minus_id);
  EXPECT_EQ(oracle, 1);
  AngleSextuple a = AngleSextuple::radians({0, 0, 0, 0, 0, 0});
  a.theta.fill(kPi / 2);
  EXPECT_NEAR(angle_determinant_residual(a), static_cast<double>(oracle), 1e-14);
}

TEST(AreaVector, CongruentFaces) {
  for (double f : area_vector(so1_angles())) EXPECT_NEAR(f, 1.0, 1e-12);
  AngleSextuple reg;
  reg.theta.fill(std::acos(1.0 / 3.0));
  for (double f : area_vector(reg)) EXPECT_NEAR(f, 1.0, 1e-12);
}

TEST(AreaVector, SommervilleThreeFaceAreas) {
  auto a = AngleSextuple::pi_rational({PiRational(2, 3), PiRational(1, 3), PiRational(1, 3), PiRational(1, 4),
                                       PiRational(1, 4), PiRational(1, 2)});
  AreaVector f = area_vector(a);
  // Cross-check against Heron areas of the reconstructed edges.
  Tetrahedron t = validate_edges(edges_from_angles(a));
  double fmax = *std::max_element(t.face_areas().begin(), t.face_areas().end());
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(f[i], t.face_area(i) / fmax, 1e-10);
  // Null-space oracle: F1 is the largest face and the other three are congruent, ratio 1/sqrt(2).
  EXPECT_NEAR(f[0], 1.0, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(f[i], std::sqrt(0.5), 1e-12);
}

TEST(AreaVector, RejectsUnrealizable) {
  AngleSextuple a;
  a.theta.fill(kPi / 2);
  EXPECT_THROW(area_vector(a), Error);
}

TEST(EdgesFromAngles, SommervilleOne) {
  EdgeSextuple e = edges_from_angles(so1_angles());
  for (int s = 0; s < 6; ++s) EXPECT_NEAR(e[s], kSommerville1[s] / 2.0, 1e-12);
}

TEST(EdgesFromAngles, RegularGivesEqualEdges) {
  AngleSextuple reg;
  reg.theta.fill(std::acos(1.0 / 3.0));
  for (double d : edges_from_angles(reg)) EXPECT_NEAR(d, 1.0, 1e-12);
}

TEST(EdgesFromAngles, NonTilingCandidateStillExists) {
  auto a = AngleSextuple::two_pi_over({4, 5, 6, 5, 6, 5});
  EdgeSextuple e = edges_from_angles(a);
  auto back = dihedral_angles(validate_edges(e));
  EXPECT_LT(max_angle_difference(back, a), 1e-9);
  EXPECT_NEAR(e[1], e[3], 1e-9);  // d13 = d23
  EXPECT_NEAR(e[2], e[4], 1e-9);  // d14 = d24
}

TEST(NormalizedArea, ReferenceValues) {
  EXPECT_NEAR(normalized_area(validate_edges(kRegular)), 7.2057, 1e-4);
  EXPECT_NEAR(normalized_area(validate_edges(kSommerville1)), kSommervilleArea, 1e-12);
  EXPECT_NEAR(kSommervilleArea, 7.4126, 1e-4);
  auto ntd = edges_from_angles(AngleSextuple::two_pi_over({3, 6, 10, 10, 10, 3}));
  EXPECT_NEAR(normalized_area(validate_edges(ntd)), 9.28, 5e-3);
}

TEST(SolidAngle, Values) {
  AngleSextuple reg;
  reg.theta.fill(std::acos(1.0 / 3.0));
  EXPECT_NEAR(solid_angle(reg, 0), 0.551286, 1e-6);
  EXPECT_NEAR(solid_angle(so1_angles(), 0), kPi / 6, 1e-15);
}

TEST(MinSineBound, SommervilleValue) {
  double s = min_sine_bound(kSommervilleArea);
  double want = 27.0 / (32.0 * std::sqrt(2.0));
  EXPECT_NEAR(s / want - 1.0, 0.0, 1e-12);
  double deg = min_angle_bound(kSommervilleArea) * 180 / kPi;
  EXPECT_NEAR(deg, 36.63, 0.005);
}

TEST(MinSineBound, RegularAndLimits) {
  // Regular tetrahedron: S^3/V^2 = 216 sqrt(3), so the bound is 9/(8 sqrt(3)) = 0.649519 (40.5054 deg).
  double s = min_sine_bound(normalized_area(validate_edges(kRegular)));
  EXPECT_NEAR(s, 9.0 / (8.0 * std::sqrt(3.0)), 1e-12);
  EXPECT_NEAR(std::asin(s) * 180 / kPi, 40.5054, 1e-4);
  EXPECT_GT(std::acos(1.0 / 3.0), std::asin(s));
  EXPECT_LT(min_sine_bound(1e6), 1e-12);
  double prev = 2;
  for (double a = 7.0; a < 20; a += 0.25) {
    double v = min_sine_bound(a);
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(LawOfCosines, KnownTetrahedra) {
  EXPECT_LT(law_of_cosines_residual(validate_edges(kRegular)).max(), 1e-12);
  EXPECT_LT(law_of_cosines_residual(validate_edges(kSommerville1)).max(), 1e-12);
}

TEST(Properties, RandomTetrahedra) {
  for (const auto& p : random_tetrahedra(2000, 7)) {
    EdgeSextuple e = edges_of_points(p);
    Tetrahedron t = validate_edges(e);
    double v = triple_volume(p);

    // D = 288 V^2 against an independent coordinate volume.
    EXPECT_NEAR(cayley_menger(e) / (288 * v * v), 1.0, 1e-12);
    EXPECT_NEAR(t.volume() / v, 1.0, 1e-12);

    AngleSextuple a = dihedral_angles(t);
    EXPECT_LE(std::abs(angle_determinant_residual(a)), 1e-9);
    EXPECT_LE(law_of_cosines_residual(t).max(), 1e-9);
    EXPECT_TRUE(satisfies_angle_inequalities(a));

    // Round trip up to one global scale.
    EdgeSextuple back = edges_from_angles(a);
    for (int s = 0; s < 6; ++s) EXPECT_NEAR(back[s] * e[0] / e[s], 1.0, 1e-9);

    // Volume identity for all 12 (i, {j,k}) choices.
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = j + 1; k < 4; ++k) {
          if (j == i || k == i) continue;
          EXPECT_NEAR(volume_squared_from_faces(t, a, i, j, k) / (v * v), 1.0, 1e-9);
        }

    // Homogeneity.
    double s = 2.75;
    EdgeSextuple es = e;
    for (auto& x : es) x *= s;
    Tetrahedron ts = validate_edges(es);
    EXPECT_NEAR(ts.volume() / (t.volume() * s * s * s), 1.0, 1e-12);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(ts.face_area(i) / (t.face_area(i) * s * s), 1.0, 1e-12);
    EXPECT_NEAR(normalized_area(ts) / normalized_area(t), 1.0, 1e-12);
    EXPECT_LT(max_angle_difference(dihedral_angles(ts), a), 1e-12);
  }
}

TEST(Properties, EqualEdgeFaceRatio) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  int done = 0;
  while (done < 500) {
    // d_ij = d_ik with i = V1, j = V2, k = V3: V3 placed on the sphere through V2 around V1.
    Point3 v1(u(rng), u(rng), u(rng)), v2(u(rng), u(rng), u(rng)), v4(u(rng), u(rng), u(rng));
    Point3 dir(u(rng), u(rng), u(rng));
    if (dir.norm() < 0.1) continue;
    Point3 v3 = v1 + dir.normalized() * (v2 - v1).norm();
    std::array<Point3, 4> p{v1, v2, v3, v4};
    EdgeSextuple e = edges_of_points(p);
    double mx = *std::max_element(e.begin(), e.end());
    if (triple_volume(p) < 0.02 * mx * mx * mx) continue;
    e[1] = e[0];  // exact equality d12 = d13
    Tetrahedron t = validate_edges(e);
    AngleSextuple a = dihedral_angles(t);
    // |F_k| sin(theta_ij) = |F_j| sin(theta_ik) with i=1, j=2, k=3.
    double lhs = t.face_area(2) * std::sin(a[slot_index(0, 1)]);
    double rhs = t.face_area(1) * std::sin(a[slot_index(0, 2)]);
    EXPECT_NEAR(lhs / rhs, 1.0, 1e-9);
    ++done;
  }
}

TEST(Embedding, ReproducesEdges) {
  Tetrahedron t = validate_edges({1.0, 1.2, 0.9, 1.1, 1.3, 1.05});
  auto p = embed(t);
  auto e = edges_of_points(p);
  for (int s = 0; s < 6; ++s) EXPECT_NEAR(e[s], t.edge(s), 1e-12);
}
