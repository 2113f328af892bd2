// Library walk-through: build Sommerville No. 1 from its dihedral angles, classify it,
// then show that the first Goldberg family bottoms out at the same tetrahedron.

#include <cstdio>

#include "tetratile/goldberg.hpp"
#include "tetratile/taxonomy.hpp"

using namespace tetratile;

int main() {
  auto angles = AngleSextuple::pi_rational(
      {PiRational(1, 2), PiRational(1, 3), PiRational(1, 3), PiRational(1, 3), PiRational(1, 3), PiRational(1, 2)});
  auto edges = edges_from_angles(angles);
  auto tet = validate_edges(edges);

  std::printf("edges (unit scale):");
  for (int s = 0; s < 6; ++s) std::printf(" d%s=%.6f", slot_name(s).c_str(), edges[s]);
  TypeId type = classify(edges, 1e-9);
  std::printf("\ntype (%c) %s\n", type.letter, type_info(type).labeling);
  std::printf("normalized area %.6f, closed form %.6f\n", normalized_area(tet), kSommervilleArea);
  auto verdict = known_tile_verdict(type, edges);
  std::printf("tile verdict: %s (%s)\n", to_string(verdict.kind), verdict.reason.c_str());

  auto best = minimize_family(1);
  std::printf("family 1 minimum at a = %.6f, area %.6f (certified lower bound %.6f)\n", best.a_star, best.area_star,
              best.certified_lower);
  return 0;
}
