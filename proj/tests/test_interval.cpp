#include <gtest/gtest.h>

#include <random>

#include "tetratile/branch_bound.hpp"
#include "tetratile/interval.hpp"

using namespace tetratile;

TEST(Interval, SquareOverPositiveRange) {
  Interval x(2, 3);
  Interval y = sqr(x);
  EXPECT_LE(y.lo, 4.0);
  EXPECT_GE(y.hi, 9.0);
  EXPECT_NEAR(y.lo, 4.0, 1e-14);
  EXPECT_NEAR(y.hi, 9.0, 1e-14);
}

TEST(Interval, SineDetectsInteriorMaximum) {
  Interval s = sin(Interval(0.0, kPi));
  EXPECT_EQ(s.hi, 1.0);
  EXPECT_LE(s.lo, 0.0);
  EXPECT_GT(s.lo, -1e-15);
}

TEST(Interval, CosineNearMultiplesOfPi) {
  // pi itself is not a double; the interval around the double nearest pi must still reach -1.
  Interval c = cos(Interval(3.14159, 3.1416));
  EXPECT_EQ(c.lo, -1.0);
  Interval c2 = cos(Interval(kPi, kPi));
  EXPECT_EQ(c2.lo, -1.0);
}

TEST(Interval, OutputsClippedToUnitRange) {
  for (double a = -10; a < 10; a += 0.37) {
    Interval s = sin(Interval(a, a + 0.5)), c = cos(Interval(a, a + 0.5));
    EXPECT_GE(s.lo, -1.0);
    EXPECT_LE(s.hi, 1.0);
    EXPECT_GE(c.lo, -1.0);
    EXPECT_LE(c.hi, 1.0);
  }
}

TEST(Interval, DependencyProblemStillEncloses) {
  ExprGraph g;
  Expr x = g.var(0);
  Expr f = sqr(x) - 2.0 * x;
  Interval r = ieval(f, {Interval(0, 2)});
  // Dense sampling of the exact range [-1, 0].
  double mn = 1e9, mx = -1e9;
  for (int i = 0; i <= 100000; ++i) {
    double t = 2.0 * i / 100000;
    double v = t * t - 2 * t;
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  EXPECT_LE(r.lo, mn);
  EXPECT_GE(r.hi, mx);
  EXPECT_NEAR(mn, -1.0, 1e-9);
}

TEST(Interval, ErrorsOnBadOperands) {
  EXPECT_THROW(Interval(1) / Interval(-1, 1), Error);
  EXPECT_THROW(sqrt(Interval(-2, -1)), Error);
  EXPECT_NO_THROW(sqrt(Interval(-1e-20, 1)));
}

TEST(Interval, PiEnclosure) {
  EXPECT_LT(kPiI.lo, kPiI.hi);
  EXPECT_TRUE(kPiI.contains(kPi));
  Interval q = pi_rational(PiRational(2, 3));
  EXPECT_TRUE(q.contains(2 * kPi / 3));
}

namespace {

// Random expression over three variables, evaluated at a point and on a box.
Expr random_expr(ExprGraph& g, std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  std::uniform_real_distribution<double> cst(-3, 3);
  switch (pick(rng)) {
    case 0: return g.var(static_cast<int>(rng() % 3));
    case 1: return g.constant(cst(rng));
    case 2: return random_expr(g, rng, depth - 1) + random_expr(g, rng, depth - 1);
    case 3: return random_expr(g, rng, depth - 1) - random_expr(g, rng, depth - 1);
    case 4: return random_expr(g, rng, depth - 1) * random_expr(g, rng, depth - 1);
    case 5: return random_expr(g, rng, depth - 1) / (2.5 + sqr(random_expr(g, rng, depth - 1)));
    case 6: return sin(random_expr(g, rng, depth - 1));
    case 7: return cos(random_expr(g, rng, depth - 1));
    case 8: return sqrt(1.0 + sqr(random_expr(g, rng, depth - 1)));
    default: return sqr(random_expr(g, rng, depth - 1));
  }
}

}  // namespace

TEST(Interval, ContainmentFuzz) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-4, 4), w(0, 1.5), t(0, 1);
  long violations = 0, checked = 0;
  for (int trial = 0; trial < 100000; ++trial) {
    ExprGraph g(3);
    Expr e = random_expr(g, rng, 4);
    Program p(g, {e});
    std::vector<Interval> box(3);
    std::vector<long double> pt(3);
    std::vector<double> ptd(3);
    for (int i = 0; i < 3; ++i) {
      double lo = u(rng);
      box[i] = Interval(lo, lo + w(rng));
      ptd[i] = box[i].lo + t(rng) * box[i].width();
      if (ptd[i] > box[i].hi) ptd[i] = box[i].hi;
    }
    Interval enc = p(box)[0];
    // Reference value in extended precision.
    ExprGraph* gp = &g;
    std::function<long double(int)> ref = [&](int id) -> long double {
      const auto& n = gp->node(id);
      switch (n.op) {
        case Op::Const: return n.value;
        case Op::Var: return ptd[n.var];
        case Op::Add: return ref(n.a) + ref(n.b);
        case Op::Sub: return ref(n.a) - ref(n.b);
        case Op::Mul: return ref(n.a) * ref(n.b);
        case Op::Div: return ref(n.a) / ref(n.b);
        case Op::Neg: return -ref(n.a);
        case Op::Sqr: { long double v = ref(n.a); return v * v; }
        case Op::Sqrt: return std::sqrt(ref(n.a));
        case Op::Sin: return std::sin(ref(n.a));
        case Op::Cos: return std::cos(ref(n.a));
      }
      return 0;
    };
    long double v = ref(e.id);
    ++checked;
    if (!(enc.lo <= v && v <= enc.hi)) ++violations;
  }
  EXPECT_EQ(checked, 100000);
  EXPECT_EQ(violations, 0);
}

TEST(SolidAngle, RightAngles) {
  Interval h = pi_rational(PiRational(1, 2));
  auto s = solid_angle_interval(h, h, h);
  EXPECT_TRUE(s.omega.contains(kPi / 2));
  EXPECT_LT(s.omega.width(), 1e-14);
  EXPECT_EQ(s.integers, std::vector<long>{8});
}

TEST(SolidAngle, StraddlingZeroIsAnError) {
  Interval a(kPi / 3 - 0.1, kPi / 3 + 0.1);
  EXPECT_THROW(solid_angle_interval(a, a, a), Error);
}
