#pragma once
// The S4 action on vertex labels and the induced action on the six edge slots.

#include <algorithm>
#include <array>
#include <vector>

#include "core.hpp"

namespace tetratile {

using VertexPerm = std::array<int, 4>;
using SlotPerm = std::array<int, 6>;

// All 24 vertex permutations in lexicographic order, identity first.
inline const std::vector<VertexPerm>& vertex_perms() {
  static const std::vector<VertexPerm> perms = [] {
    std::vector<VertexPerm> out;
    VertexPerm p{0, 1, 2, 3};
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
  }();
  return perms;
}

// Slot s = {i,j} is carried to slot {p[i], p[j]}.
inline SlotPerm slot_perm(const VertexPerm& p) {
  SlotPerm m{};
  for (int s = 0; s < 6; ++s) m[s] = slot_index(p[kSlotVertices[s][0]], p[kSlotVertices[s][1]]);
  return m;
}

inline const std::vector<SlotPerm>& slot_perms() {
  static const std::vector<SlotPerm> table = [] {
    std::vector<SlotPerm> out;
    for (const auto& p : vertex_perms()) out.push_back(slot_perm(p));
    return out;
  }();
  return table;
}

// Relabel vertices by p: the value on slot s moves to slot m[s].
template <class T>
std::array<T, 6> apply_perm(const std::array<T, 6>& x, const SlotPerm& m) {
  std::array<T, 6> y{};
  for (int s = 0; s < 6; ++s) y[m[s]] = x[s];
  return y;
}

template <class T>
std::array<T, 6> apply_perm(const std::array<T, 6>& x, const VertexPerm& p) {
  return apply_perm(x, slot_perm(p));
}

template <class T>
std::array<T, 6> canonicalize(const std::array<T, 6>& x) {
  std::array<T, 6> best = x;
  for (const auto& m : slot_perms()) best = std::min(best, apply_perm(x, m));
  return best;
}

template <class T>
std::vector<std::array<T, 6>> orbit(const std::array<T, 6>& x) {
  std::vector<std::array<T, 6>> out;
  for (const auto& m : slot_perms()) out.push_back(apply_perm(x, m));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace tetratile
