#pragma once
// Edge-length graphs: for a length letter d, every edge e_ij of length d joins the ordered
// pairs (d_ik, d_jk) and (d_il, d_jl). Closed walks in these graphs are the possible
// sequences of tetrahedra stacked around an edge of length d.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "geom.hpp"
#include "taxonomy.hpp"

namespace tetratile {

using LetterPair = std::pair<char, char>;

struct GraphEdge {
  int u = 0, v = 0;  // u <= v; u == v is a loop
  std::set<int> labels;  // slots realizing this edge
};

struct EdgeLengthGraph {
  char letter = 'a';
  std::vector<LetterPair> nodes;
  std::vector<GraphEdge> edges;

  int node_index(const LetterPair& p) const {
    auto it = std::find(nodes.begin(), nodes.end(), p);
    return it == nodes.end() ? -1 : static_cast<int>(it - nodes.begin());
  }
};

inline std::string to_string(const LetterPair& p) { return std::string("(") + p.first + "," + p.second + ")"; }

inline EdgeLengthGraph build_graph(const EdgeLabeling& lab, char letter) {
  if (std::find(lab.begin(), lab.end(), letter) == lab.end())
    throw Error(ErrorCode::UnknownLetter, std::string("letter ") + letter + " not in " + to_string(lab));
  EdgeLengthGraph g;
  g.letter = letter;
  auto L = [&](int a, int b) { return lab[slot_index(a, b)]; };
  auto node = [&](LetterPair p) {
    int k = g.node_index(p);
    if (k >= 0) return k;
    g.nodes.push_back(p);
    return static_cast<int>(g.nodes.size()) - 1;
  };
  std::map<std::pair<int, int>, int> index;
  for (int s = 0; s < 6; ++s) {
    if (lab[s] != letter) continue;
    auto [k, l] = complement_vertices(s);
    for (int flip = 0; flip < 2; ++flip) {
      int i = kSlotVertices[s][flip], j = kSlotVertices[s][1 - flip];
      int u = node({L(i, k), L(j, k)}), v = node({L(i, l), L(j, l)});
      if (u > v) std::swap(u, v);
      auto [it, fresh] = index.emplace(std::make_pair(u, v), static_cast<int>(g.edges.size()));
      if (fresh) g.edges.push_back({u, v, {}});
      g.edges[it->second].labels.insert(s);
    }
  }
  return g;
}

struct OddWalkResult {
  bool odd = false;
  std::vector<int> color;  // 2-coloring of the nodes when !odd
};

inline OddWalkResult has_odd_closed_walk(const EdgeLengthGraph& g) {
  int n = static_cast<int>(g.nodes.size());
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : g.edges) {
    if (e.u == e.v) return {true, {}};
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<int> color(n, -1);
  for (int s = 0; s < n; ++s) {
    if (color[s] >= 0) continue;
    color[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        if (color[v] < 0) {
          color[v] = 1 - color[u];
          q.push(v);
        } else if (color[v] == color[u]) {
          return {true, {}};
        }
      }
    }
  }
  return {false, color};
}

// Connected components, each as a list of edge indices (isolated nodes cannot occur).
inline std::vector<std::vector<int>> edge_components(const EdgeLengthGraph& g) {
  int n = static_cast<int>(g.nodes.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& e : g.edges) parent[find(e.u)] = find(e.v);
  std::map<int, std::vector<int>> comp;
  for (int k = 0; k < static_cast<int>(g.edges.size()); ++k) comp[find(g.edges[k].u)].push_back(k);
  std::vector<std::vector<int>> out;
  for (auto& [r, es] : comp) out.push_back(es);
  return out;
}

// Vertex relabelings fixing the labeling identify dihedral angles (theta_s = theta_{m(s)}).
// Returns the smallest slot of each slot's class.
inline std::array<int, 6> symmetry_classes(const EdgeLabeling& lab) {
  std::array<int, 6> rep{0, 1, 2, 3, 4, 5};
  std::function<int(int)> find = [&](int x) { return rep[x] == x ? x : rep[x] = find(rep[x]); };
  for (const auto& m : slot_perms()) {
    if (apply_perm(lab, m) != lab) continue;
    for (int s = 0; s < 6; ++s) {
      int a = find(s), b = find(m[s]);
      if (a != b) rep[std::max(a, b)] = std::min(a, b);
    }
  }
  for (int s = 0; s < 6; ++s) rep[s] = find(s);
  return rep;
}

struct ConstraintTemplate {
  enum Form { PiOverN, TwoPiOverN, Sum } form = Sum;
  char letter = 'a';
  std::vector<int> slots;                // angle classes in the sum, by representative slot
  std::vector<std::vector<int>> parity;  // GF(2) basis of achievable odd-coefficient sets

  std::string str() const {
    auto set_str = [](const std::vector<int>& v) {
      std::string s = "{";
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + slot_name(v[i]);
      return s + "}";
    };
    if (form == PiOverN) return "theta" + slot_name(slots[0]) + " = pi/n";
    if (form == TwoPiOverN) return "theta" + slot_name(slots[0]) + " = 2pi/n";
    std::string s;
    for (std::size_t i = 0; i < slots.size(); ++i)
      s += (i ? " + n" : "n") + slot_name(slots[i]) + " theta" + slot_name(slots[i]);
    s += " = 2pi";
    if (parity.empty()) return s + " | even " + set_str(slots);
    if (parity.size() == 1) {
      std::vector<int> rest;
      for (int x : slots)
        if (!std::count(parity[0].begin(), parity[0].end(), x)) rest.push_back(x);
      s += " | same parity " + set_str(parity[0]);
      if (!rest.empty()) s += " | even " + set_str(rest);
      return s;
    }
    s += " | parity span";
    for (const auto& b : parity) s += " " + set_str(b);
    return s;
  }
};

struct TypeConstraints {
  std::vector<ConstraintTemplate> rows;
  std::vector<std::pair<int, int>> equalities;  // theta_a = theta_b from symmetry

  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (const auto& r : rows) out.push_back(r.str());
    for (auto [a, b] : equalities) out.push_back("theta" + slot_name(a) + " = theta" + slot_name(b));
    std::sort(out.begin(), out.end());
    return out;
  }
};

namespace detail {

// Row-reduce bit vectors over GF(2); returns a reduced basis.
inline std::vector<unsigned> gf2_basis(std::vector<unsigned> v) {
  std::vector<unsigned> basis;
  for (unsigned x : v) {
    for (unsigned b : basis) x = std::min(x, x ^ b);
    if (x) {
      for (auto& b : basis) b = std::min(b, b ^ x);
      basis.push_back(x);
      std::sort(basis.rbegin(), basis.rend());
    }
  }
  return basis;
}

}  // namespace detail

// Per component of the letter's graph: the angles its closed walks can use, and the parities
// their coefficients can take (from the cycle space of the component).
inline std::vector<ConstraintTemplate> letter_constraints(const EdgeLabeling& lab, char letter,
                                                          const std::array<int, 6>& cls) {
  auto g = build_graph(lab, letter);
  std::vector<ConstraintTemplate> out;
  for (const auto& comp : edge_components(g)) {
    std::vector<int> edge_class;
    std::set<int> classes;
    for (int k : comp) {
      std::set<int> c;
      for (int s : g.edges[k].labels) c.insert(cls[s]);
      if (c.size() != 1)
        throw Error(ErrorCode::InvalidConfig, "graph edge carries angles that are not forced equal");
      edge_class.push_back(*c.begin());
      classes.insert(*c.begin());
    }
    // Fundamental cycles of a spanning forest.
    std::map<int, std::vector<std::pair<int, int>>> adj;  // node -> (neighbor, local edge)
    for (int k = 0; k < static_cast<int>(comp.size()); ++k) {
      const auto& e = g.edges[comp[k]];
      adj[e.u].push_back({e.v, k});
      if (e.u != e.v) adj[e.v].push_back({e.u, k});
    }
    std::map<int, int> parent_edge, depth, parent;
    int root = g.edges[comp[0]].u;
    std::vector<bool> tree(comp.size(), false);
    std::queue<int> q;
    q.push(root);
    depth[root] = 0;
    parent_edge[root] = -1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (auto [v, k] : adj[u])
        if (!depth.count(v)) {
          depth[v] = depth[u] + 1;
          parent[v] = u;
          parent_edge[v] = k;
          tree[k] = true;
          q.push(v);
        }
    }
    auto bit = [&](int k) { return 1u << edge_class[k]; };
    std::vector<unsigned> cycles;
    for (int k = 0; k < static_cast<int>(comp.size()); ++k) {
      if (tree[k]) continue;
      unsigned c = bit(k);
      int a = g.edges[comp[k]].u, b = g.edges[comp[k]].v;
      while (a != b) {
        if (depth[a] < depth[b]) std::swap(a, b);
        c ^= bit(parent_edge[a]);
        a = parent[a];
      }
      cycles.push_back(c);
    }
    ConstraintTemplate t;
    t.letter = letter;
    t.slots.assign(classes.begin(), classes.end());
    for (unsigned b : detail::gf2_basis(cycles)) {
      std::vector<int> v;
      for (int s = 0; s < 6; ++s)
        if (b >> s & 1u) v.push_back(s);
      t.parity.push_back(v);
    }
    if (t.slots.size() == 1) t.form = t.parity.empty() ? ConstraintTemplate::PiOverN : ConstraintTemplate::TwoPiOverN;
    if (std::none_of(out.begin(), out.end(), [&](const auto& o) { return o.str() == t.str(); })) out.push_back(t);
  }
  return out;
}

inline TypeConstraints angle_constraints(const EdgeLabeling& lab) {
  classify_labeling(lab);  // NotATetrahedronType for anything else
  auto cls = symmetry_classes(lab);
  TypeConstraints tc;
  std::set<char> letters(lab.begin(), lab.end());
  for (char d : letters)
    for (auto& t : letter_constraints(lab, d, cls)) tc.rows.push_back(std::move(t));
  for (int s = 0; s < 6; ++s)
    if (cls[s] != s) tc.equalities.push_back({cls[s], s});
  return tc;
}

inline TypeConstraints angle_constraints(TypeId t) { return angle_constraints(labeling_of(t)); }

// Printable block: a header line with the labeling, then one indented line per constraint.
inline std::string describe_constraints(TypeId t) {
  std::string out = std::string("type ") + t.letter + " " + to_string(labeling_of(t)) + "\n";
  for (const auto& row : angle_constraints(t).strings()) out += "  " + row + "\n";
  return out;
}

struct NonTilingCertificate {
  std::string candidate;
  char letter = 'a';
  std::vector<int> slots;  // all edges of that length; their angles are equal
  int slot = 0;            // the angle quoted, theta_slot = 2pi/n
  long n = 0;              // odd
  std::vector<std::pair<LetterPair, int>> coloring;  // bipartition witness
  std::int64_t refinements_checked = 0;              // labelings with claimed-equal lengths split apart
  std::string conclusion;
};

namespace detail {

// Every labeling whose equality classes refine those of lab.
inline std::vector<EdgeLabeling> refinements(const EdgeLabeling& lab) {
  std::vector<EdgeLabeling> out;
  EdgeLabeling cur{};
  std::function<void(int, char)> rec = [&](int s, char next) {
    if (s == 6) {
      out.push_back(cur);
      return;
    }
    // Reuse a letter already given to an earlier slot of the same class, or open a new one.
    std::set<char> options;
    for (int t = 0; t < s; ++t)
      if (lab[t] == lab[s]) options.insert(cur[t]);
    for (char c : options) {
      cur[s] = c;
      rec(s + 1, next);
    }
    cur[s] = next;
    rec(s + 1, static_cast<char>(next + 1));
  };
  rec(0, 'a');
  return out;
}

}  // namespace detail

inline std::optional<NonTilingCertificate> non_tiling_certificate(const AngleSextuple& a, const EdgeLabeling& lab,
                                                                  const std::string& candidate = "") {
  if (!a.all_exact())
    throw Error(ErrorCode::AngleNotRationalMultiple, "non-tiling certificates need exact 2pi/n angles");
  std::set<char> letters(lab.begin(), lab.end());
  for (char d : letters) {
    std::vector<int> slots;
    for (int s = 0; s < 6; ++s)
      if (lab[s] == d) slots.push_back(s);
    const PiRational q = *a.exact[slots[0]];
    // 2pi/n with n odd stays 2/n after reduction.
    if (q.num != 2 || q.den % 2 == 0) continue;
    if (!std::all_of(slots.begin(), slots.end(), [&](int s) { return *a.exact[s] == q; })) continue;
    auto g = build_graph(lab, d);
    auto w = has_odd_closed_walk(g);
    if (w.odd) continue;
    // The lengths claimed equal might differ; the class of slots[0] then shrinks and the
    // graph changes, but its angles stay equal to 2pi/n.
    bool robust = true;
    std::int64_t checked = 0;
    for (const auto& r : detail::refinements(lab)) {
      ++checked;
      if (has_odd_closed_walk(build_graph(r, r[slots[0]])).odd) {
        robust = false;
        break;
      }
    }
    if (!robust) continue;
    NonTilingCertificate c;
    c.candidate = candidate;
    c.letter = d;
    c.slots = slots;
    c.slot = slots[0];
    c.n = q.den;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) c.coloring.push_back({g.nodes[k], w.color[k]});
    c.refinements_checked = checked;
    std::ostringstream os;
    os << "theta" << slot_name(c.slot) << " = 2pi/" << c.n << " with n odd, but the " << d
       << "-edge-length graph has no closed walk of odd length, so a tile would need theta = pi/m";
    c.conclusion = os.str();
    return c;
  }
  return std::nullopt;
}

}  // namespace tetratile
