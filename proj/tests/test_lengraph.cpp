#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "tetratile/lengraph.hpp"

using namespace tetratile;

namespace {

bool has_edge(const EdgeLengthGraph& g, LetterPair a, LetterPair b, std::set<int> labels) {
  int u = g.node_index(a), v = g.node_index(b);
  if (u < 0 || v < 0) return false;
  for (const auto& e : g.edges)
    if (((e.u == u && e.v == v) || (e.u == v && e.v == u)) && e.labels == labels) return true;
  return false;
}

int S(int i, int j) { return slot_index(i - 1, j - 1); }

// Independent oracle: an odd closed walk of length <= 12 exists, by boolean matrix powers.
bool odd_walk_oracle(const EdgeLengthGraph& g) {
  int n = static_cast<int>(g.nodes.size());
  std::vector<std::vector<int>> A(n, std::vector<int>(n, 0));
  for (const auto& e : g.edges) A[e.u][e.v] = A[e.v][e.u] = 1;
  auto P = A;
  for (int len = 1; len <= 12; ++len) {
    if (len % 2 == 1)
      for (int i = 0; i < n; ++i)
        if (P[i][i]) return true;
    std::vector<std::vector<int>> Q(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        if (P[i][k])
          for (int j = 0; j < n; ++j)
            if (A[k][j]) Q[i][j] = 1;
    P = Q;
  }
  return false;
}

}  // namespace

TEST(BuildGraph, AllDistinctLengths) {
  // Lengths as in the stacking figure: e13 = a, d12 = b, d23 = c, d14 = d, d34 = e, d24 = f.
  auto lab = parse_labeling("badcfe");
  auto g = build_graph(lab, 'a');
  EXPECT_EQ(g.nodes.size(), 4u);
  EXPECT_EQ(g.edges.size(), 2u);
  EXPECT_TRUE(has_edge(g, {'b', 'c'}, {'d', 'e'}, {S(1, 3)}));
  EXPECT_TRUE(has_edge(g, {'c', 'b'}, {'e', 'd'}, {S(1, 3)}));
}

TEST(BuildGraph, TypeGLetterA) {
  auto g = build_graph(labeling_of({'g'}), 'a');
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_TRUE(has_edge(g, {'b', 'c'}, {'c', 'b'}, {S(1, 2), S(3, 4)}));
}

TEST(BuildGraph, TypeHLetterC) {
  auto g = build_graph(labeling_of({'h'}), 'c');
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_TRUE(has_edge(g, {'a', 'b'}, {'b', 'b'}, {S(1, 4), S(2, 3)}));
  EXPECT_TRUE(has_edge(g, {'b', 'b'}, {'b', 'a'}, {S(1, 4), S(2, 3)}));
}

TEST(BuildGraph, TypeHLetterBPath) {
  auto g = build_graph(labeling_of({'h'}), 'b');
  EXPECT_TRUE(has_edge(g, {'a', 'c'}, {'c', 'b'}, {S(1, 3), S(2, 4)}));
  EXPECT_TRUE(has_edge(g, {'c', 'b'}, {'b', 'c'}, {S(3, 4)}));
  EXPECT_TRUE(has_edge(g, {'b', 'c'}, {'c', 'a'}, {S(1, 3), S(2, 4)}));
  EXPECT_FALSE(has_odd_closed_walk(g).odd);
}

TEST(BuildGraph, TypeMLetterATriangles) {
  auto g = build_graph(labeling_of({'m'}), 'a');
  EXPECT_TRUE(has_edge(g, {'a', 'a'}, {'a', 'b'}, {S(2, 3)}));
  EXPECT_TRUE(has_edge(g, {'a', 'b'}, {'a', 'c'}, {S(1, 2)}));
  EXPECT_TRUE(has_edge(g, {'a', 'a'}, {'a', 'c'}, {S(2, 4)}));
  EXPECT_TRUE(has_edge(g, {'a', 'a'}, {'b', 'c'}, {S(3, 4)}));
  EXPECT_TRUE(has_odd_closed_walk(g).odd);
}

TEST(BuildGraph, TypeWLetterAFourComponents) {
  auto g = build_graph(labeling_of({'w'}), 'a');
  EXPECT_EQ(edge_components(g).size(), 4u);
  EXPECT_TRUE(has_edge(g, {'b', 'd'}, {'c', 'e'}, {S(1, 3)}));
  EXPECT_TRUE(has_edge(g, {'b', 'c'}, {'d', 'e'}, {S(2, 4)}));
}

TEST(BuildGraph, UnknownLetter) { EXPECT_THROW(build_graph(labeling_of({'a'}), 'b'), Error); }

TEST(BuildGraph, InvariantUnderLetterRenaming) {
  for (const auto& t : kTypes) {
    auto lab = labeling_of({t.letter});
    EdgeLabeling renamed{};
    for (int s = 0; s < 6; ++s) renamed[s] = static_cast<char>('z' - (lab[s] - 'a'));
    for (char d : std::set<char>(lab.begin(), lab.end())) {
      auto g = build_graph(lab, d), h = build_graph(renamed, static_cast<char>('z' - (d - 'a')));
      ASSERT_EQ(g.nodes.size(), h.nodes.size());
      ASSERT_EQ(g.edges.size(), h.edges.size());
      for (std::size_t k = 0; k < g.edges.size(); ++k) {
        auto rn = [](LetterPair p) {
          return LetterPair{static_cast<char>('z' - (p.first - 'a')), static_cast<char>('z' - (p.second - 'a'))};
        };
        EXPECT_TRUE(has_edge(h, rn(g.nodes[g.edges[k].u]), rn(g.nodes[g.edges[k].v]), g.edges[k].labels));
      }
      EXPECT_EQ(has_odd_closed_walk(g).odd, has_odd_closed_walk(h).odd);
    }
  }
}

TEST(OddClosedWalk, SmallGraphs) {
  EdgeLengthGraph g;
  g.nodes = {{'a', 'b'}, {'b', 'a'}};
  g.edges = {{0, 1, {0}}};
  auto r = has_odd_closed_walk(g);
  EXPECT_FALSE(r.odd);
  EXPECT_NE(r.color[0], r.color[1]);
  EdgeLengthGraph loop;
  loop.nodes = {{'a', 'a'}};
  loop.edges = {{0, 0, {0}}};
  EXPECT_TRUE(has_odd_closed_walk(loop).odd);
}

TEST(OddClosedWalk, AgreesWithWalkEnumerationOnAllTypes) {
  int graphs = 0;
  for (const auto& t : kTypes) {
    auto lab = labeling_of({t.letter});
    for (char d : std::set<char>(lab.begin(), lab.end())) {
      auto g = build_graph(lab, d);
      auto r = has_odd_closed_walk(g);
      EXPECT_EQ(r.odd, odd_walk_oracle(g)) << t.letter << " " << d;
      if (!r.odd) {
        for (const auto& e : g.edges) EXPECT_NE(r.color[e.u], r.color[e.v]);
      }
      ++graphs;
    }
  }
  EXPECT_GT(graphs, 60);
}

// Hand copy of the linear systems table for the ten non-characterized types.
TEST(AngleConstraints, MatchesTableForNonCharacterizedTypes) {
  const std::map<char, std::vector<std::string>> golden{
      {'h',
       {"theta12 = pi/n", "n13 theta13 + n34 theta34 = 2pi | even {13,34}", "theta13 = theta24", "theta14 = pi/n",
        "theta14 = theta23"}},
      {'m',
       {"theta13 = pi/n", "theta14 = pi/n",
        "n12 theta12 + n23 theta23 + n24 theta24 + n34 theta34 = 2pi | same parity {12,23,24} | even {34}"}},
      {'n',
       {"theta24 = pi/n", "n12 theta12 + n14 theta14 + n23 theta23 = 2pi | even {12,14,23}",
        "n13 theta13 + n34 theta34 = 2pi | even {13,34}"}},
      {'o',
       {"n12 theta12 + n23 theta23 = 2pi | even {12,23}", "n13 theta13 + n34 theta34 = 2pi | even {13,34}",
        "n14 theta14 + n24 theta24 = 2pi | even {14,24}"}},
      {'r',
       {"theta23 = pi/n", "theta24 = pi/n", "theta34 = pi/n",
        "n12 theta12 + n13 theta13 + n14 theta14 = 2pi | same parity {12,13,14}"}},
      {'s',
       {"theta12 = pi/n", "theta13 = pi/n", "theta14 = pi/n",
        "n23 theta23 + n24 theta24 + n34 theta34 = 2pi | even {23,24,34}"}},
      {'t',
       {"theta13 = pi/n", "theta24 = pi/n", "theta34 = pi/n",
        "n12 theta12 + n14 theta14 + n23 theta23 = 2pi | even {12,14,23}"}},
      {'u',
       {"theta24 = pi/n", "theta34 = pi/n", "n12 theta12 + n13 theta13 = 2pi | even {12,13}", "theta14 = pi/n",
        "theta23 = pi/n"}},
      {'v',
       {"theta13 = pi/n", "theta34 = pi/n", "n12 theta12 + n23 theta23 = 2pi | even {12,23}",
        "n14 theta14 + n24 theta24 = 2pi | even {14,24}"}},
      {'x',
       {"theta13 = pi/n", "theta14 = pi/n", "theta24 = pi/n", "theta34 = pi/n",
        "n12 theta12 + n23 theta23 = 2pi | even {12,23}"}},
  };
  for (const auto& [letter, rows] : golden) {
    auto want = rows;
    std::sort(want.begin(), want.end());
    EXPECT_EQ(angle_constraints(TypeId{letter}).strings(), want) << "type " << letter;
  }
}

TEST(AngleConstraints, TwoPiOverNGroupForcesEveryAngle) {
  // Every row of types g, p, w, y names a single angle class.
  for (char t : {'g', 'p', 'w', 'y'}) {
    auto tc = angle_constraints(TypeId{t});
    std::set<int> covered;
    for (const auto& r : tc.rows) {
      EXPECT_NE(r.form, ConstraintTemplate::Sum) << t << ": " << r.str();
      covered.insert(r.slots[0]);
    }
    for (auto [a, b] : tc.equalities) covered.insert(b);
    EXPECT_EQ(covered.size(), 6u) << t;
  }
}

TEST(AngleConstraints, AllTypesDerive) {
  for (const auto& t : kTypes) EXPECT_NO_THROW(angle_constraints(TypeId{t.letter})) << t.letter;
}

TEST(NonTiling, OddDenominatorCertificates) {
  struct Row {
    const char* name;
    std::array<int, 6> n;
    int slot;
  };
  std::vector<Row> rows{{"NT(A)", {3, 4, 5, 10, 6, 6}, S(1, 2)}, {"NT(B)", {3, 5, 5, 10, 10, 4}, S(1, 3)},
                        {"NT(C)", {3, 5, 10, 10, 6, 4}, S(1, 2)}, {"NT(D)", {3, 6, 10, 10, 10, 3}, S(1, 2)},
                        {"NT(E)", {4, 4, 4, 5, 6, 10}, S(2, 3)}, {"NT(F)", {4, 5, 6, 5, 6, 5}, S(1, 3)}};
  for (const auto& r : rows) {
    auto a = AngleSextuple::two_pi_over(r.n);
    auto lab = equality_labeling(edges_from_angles(a), 1e-8);
    auto c = non_tiling_certificate(a, lab, r.name);
    ASSERT_TRUE(c.has_value()) << r.name;
    EXPECT_EQ(c->n % 2, 1);
    EXPECT_TRUE(std::count(c->slots.begin(), c->slots.end(), r.slot)) << r.name << " used " << slot_name(c->slot);
    EXPECT_GE(c->refinements_checked, 1);
  }
}

TEST(NonTiling, KnownTilesHaveNoCertificate) {
  for (auto n : {std::array<int, 6>{4, 6, 6, 6, 6, 4}, std::array<int, 6>{3, 6, 6, 8, 8, 4},
                 std::array<int, 6>{4, 4, 4, 6, 6, 8}, std::array<int, 6>{4, 4, 8, 8, 4, 6},
                 std::array<int, 6>{4, 5, 6, 10, 5, 4}}) {
    auto a = AngleSextuple::two_pi_over(n);
    auto lab = equality_labeling(edges_from_angles(a), 1e-8);
    EXPECT_FALSE(non_tiling_certificate(a, lab).has_value());
  }
}

TEST(NonTiling, NeedsExactAngles) {
  auto a = AngleSextuple::radians({1, 1, 1, 1, 1, 1});
  EXPECT_THROW(non_tiling_certificate(a, labeling_of({'a'})), Error);
}

TEST(AngleConstraints, GoldenFile) {
  std::ifstream in(std::string(TT_GOLDEN_DIR) + "/angle_constraints.txt");
  ASSERT_TRUE(in);
  std::stringstream want;
  want << in.rdbuf();
  std::string got;
  for (char t : std::string("hmnorstuvx")) got += describe_constraints(TypeId{t});
  EXPECT_EQ(got, want.str());
}
