#pragma once
// Exhaustive search for tetrahedra whose dihedral angles are all 2pi/n.

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <variant>

#include "goldberg.hpp"
#include "interval.hpp"
#include "lengraph.hpp"
#include "taxonomy.hpp"

namespace tetratile {

using DenominatorSextuple = std::array<int, 6>;

// Every n_ij is below 42 when all angles are 2pi/n; n >= 3 because theta < pi.
inline constexpr int kMinDenominator = 3;
inline constexpr int kMaxDenominator = 41;

struct CandidateVerdict {
  enum Kind { Tiles, DoesNotTile } kind = Tiles;
  std::string name;
  std::optional<NonTilingCertificate> certificate;
};

struct CandidateRecord {
  DenominatorSextuple n{};  // canonical
  EdgeSextuple edges{};
  double area = 0;
  Interval determinant;  // interval enclosure at the exact angles
  CandidateVerdict verdict;
};

enum class InvalidStage { Determinant, Edges, RoundTrip };

inline const char* to_string(InvalidStage s) {
  switch (s) {
    case InvalidStage::Determinant: return "determinant";
    case InvalidStage::Edges: return "edges";
    case InvalidStage::RoundTrip: return "round-trip";
  }
  return "?";
}

struct Invalid {
  InvalidStage stage;
  std::string detail;
};

// Necessary conditions on 1/n: every vertex has angle sum above pi,
// every skew quadrilateral of four angles stays below 2pi.
inline bool denominators_admissible(const DenominatorSextuple& n) {
  auto r = [&](int s) { return 1.0 / n[s]; };
  for (int v = 0; v < 4; ++v) {
    auto inc = incident_slots(v);
    if (!(r(inc[0]) + r(inc[1]) + r(inc[2]) > 0.5 + 1e-12)) return false;
  }
  for (int s = 0; s < 3; ++s) {
    double q = 0;
    for (int t = 0; t < 6; ++t)
      if (t != s && t != opposite_slot(s)) q += r(t);
    if (!(q < 1.0 - 1e-12)) return false;
  }
  return true;
}

// det of the 4x4 angle matrix with outward-rounded cosines of 2pi/n.
inline Interval interval_angle_determinant(const DenominatorSextuple& n) {
  std::array<std::array<Interval, 4>, 4> m;
  for (int i = 0; i < 4; ++i) m[i][i] = Interval(-1.0);
  for (int s = 0; s < 6; ++s) {
    auto [p, q] = complement_vertices(s);
    m[p][q] = m[q][p] = cos(pi_rational(PiRational::two_pi_over(n[s])));
  }
  auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
    return m[r0][c0] * (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]) -
           m[r0][c1] * (m[r1][c0] * m[r2][c2] - m[r1][c2] * m[r2][c0]) +
           m[r0][c2] * (m[r1][c0] * m[r2][c1] - m[r1][c1] * m[r2][c0]);
  };
  return m[0][0] * det3(1, 2, 3, 1, 2, 3) - m[0][1] * det3(1, 2, 3, 0, 2, 3) + m[0][2] * det3(1, 2, 3, 0, 1, 3) -
         m[0][3] * det3(1, 2, 3, 0, 1, 2);
}

// Table names of the eleven candidates, keyed by canonical denominators.
inline const std::map<DenominatorSextuple, std::string>& known_candidate_names() {
  static const std::map<DenominatorSextuple, std::string> names = [] {
    std::map<DenominatorSextuple, std::string> m;
    auto add = [&](DenominatorSextuple n, const char* s) { m[canonicalize(n)] = s; };
    add({3, 6, 6, 8, 8, 4}, "Sommerville No. 3");
    add({4, 4, 4, 6, 6, 8}, "Sommerville No. 2");
    add({4, 4, 8, 8, 4, 6}, "First Goldberg family, alpha = 2pi/8");
    add({4, 5, 6, 10, 5, 4}, "First Goldberg family, alpha = 2pi/5");
    add({4, 6, 6, 6, 6, 4}, "Sommerville No. 1");
    add({3, 4, 5, 10, 6, 6}, "NT(A)");
    add({3, 5, 5, 10, 10, 4}, "NT(B)");
    add({3, 5, 10, 10, 6, 4}, "NT(C)");
    add({3, 6, 10, 10, 10, 3}, "NT(D)");
    add({4, 4, 4, 5, 6, 10}, "NT(E)");
    add({4, 5, 6, 5, 6, 5}, "NT(F)");
    return m;
  }();
  return names;
}

inline std::string candidate_name(const DenominatorSextuple& n) {
  auto it = known_candidate_names().find(canonicalize(n));
  if (it != known_candidate_names().end()) return it->second;
  std::string s = "(";
  for (int i = 0; i < 6; ++i) s += (i ? "," : "") + std::to_string(n[i]);
  return s + ")";
}

// Tiles when a known tile test recognizes it (Sommerville ratios by type, or Goldberg
// membership); otherwise a non-tiling certificate is required.
inline CandidateVerdict candidate_verdict(const CandidateRecord& c) {
  auto a = AngleSextuple::two_pi_over(c.n);
  EdgeLabeling lab = equality_labeling(c.edges, 1e-8);
  TypeId t = classify_labeling(lab);
  auto kv = known_tile_verdict(t, c.edges, 1e-8);
  if (kv.kind == TileVerdict::Tiles) return {CandidateVerdict::Tiles, kv.reason, std::nullopt};
  if (auto m = match_family(a)) {
    std::string name = m->family == 1 ? "first" : (m->family == 2 ? "second" : "third");
    return {CandidateVerdict::Tiles, name + " Goldberg family", std::nullopt};
  }
  if (auto cert = non_tiling_certificate(a, lab, candidate_name(c.n)))
    return {CandidateVerdict::DoesNotTile, cert->candidate, cert};
  throw Error(ErrorCode::UnmatchedCandidate, "valid candidate " + candidate_name(c.n) + " neither tiles nor is excluded");
}

inline std::variant<CandidateRecord, Invalid> validate_candidate(const DenominatorSextuple& n) {
  CandidateRecord c;
  c.n = canonicalize(n);
  auto a = AngleSextuple::two_pi_over(c.n);
  if (!denominators_admissible(c.n)) return Invalid{InvalidStage::Determinant, "angle inequalities fail"};
  c.determinant = interval_angle_determinant(c.n);
  if (!c.determinant.contains_zero()) return Invalid{InvalidStage::Determinant, "determinant bounded away from 0"};
  if (!(c.determinant.width() < 1e-12)) return Invalid{InvalidStage::Determinant, "determinant enclosure too wide"};
  try {
    c.edges = edges_from_angles(a);
  } catch (const Error& e) {
    std::string what = e.what();
    // edges_from_angles also checks the round trip; report that separately.
    if (what.find("round trip") != std::string::npos) return Invalid{InvalidStage::RoundTrip, what};
    return Invalid{InvalidStage::Edges, what};
  }
  auto back = dihedral_angles(validate_edges(c.edges));
  if (max_angle_difference(back, a) > 1e-9) return Invalid{InvalidStage::RoundTrip, "angles not reproduced"};
  c.area = normalized_area(validate_edges(c.edges));
  return c;
}

struct SearchOptions {
  bool dedupe = true;  // keep only canonical representatives
  unsigned threads = 0;  // 0: hardware concurrency
  int max_denominator = kMaxDenominator;
};

struct SearchStats {
  std::int64_t admissible = 0;  // sextuples passing the angle inequalities
  std::int64_t determinant_hits = 0;
};

// Raw hits: sextuples with n12 minimal among the six (every orbit has such a member),
// passing the inequalities and a floating determinant filter.
inline std::vector<DenominatorSextuple> search_raw(const SearchOptions& opt, SearchStats* stats = nullptr) {
  const int top = opt.max_denominator;
  std::vector<double> c(top + 1), r(top + 1);
  for (int n = kMinDenominator; n <= top; ++n) {
    c[n] = std::cos(2 * kPi / n);
    r[n] = 1.0 / n;
  }
  const double eps = 1e-12;
  std::mutex mu;
  std::vector<DenominatorSextuple> hits;
  std::int64_t admissible = 0;
  auto work = [&](int n12) {
    std::vector<DenominatorSextuple> local;
    std::int64_t adm = 0;
    for (int n13 = n12; n13 <= top; ++n13)
      for (int n14 = n12; n14 <= top; ++n14) {
        if (!(r[n12] + r[n13] + r[n14] > 0.5 + eps)) continue;
        for (int n23 = n12; n23 <= top; ++n23)
          for (int n24 = n12; n24 <= top; ++n24) {
            if (!(r[n12] + r[n23] + r[n24] > 0.5 + eps)) continue;
            // theta13 + theta14 + theta23 + theta24 < 2pi
            if (!(r[n13] + r[n14] + r[n23] + r[n24] < 1.0 - eps)) continue;
            for (int n34 = n12; n34 <= top; ++n34) {
              if (!(r[n13] + r[n23] + r[n34] > 0.5 + eps)) continue;
              if (!(r[n14] + r[n24] + r[n34] > 0.5 + eps)) continue;
              if (!(r[n12] + r[n14] + r[n23] + r[n34] < 1.0 - eps)) continue;
              if (!(r[n12] + r[n13] + r[n24] + r[n34] < 1.0 - eps)) continue;
              ++adm;
              // Same layout as angle_matrix: theta_s couples F_p and F_q, {p,q} the complement of s.
              Eigen::Matrix4d m = -Eigen::Matrix4d::Identity();
              DenominatorSextuple n{n12, n13, n14, n23, n24, n34};
              for (int s = 0; s < 6; ++s) {
                auto [p, q] = complement_vertices(s);
                m(p, q) = m(q, p) = c[n[s]];
              }
              if (std::abs(m.determinant()) > 1e-9) continue;
              local.push_back(n);
            }
          }
      }
    std::lock_guard<std::mutex> lock(mu);
    hits.insert(hits.end(), local.begin(), local.end());
    admissible += adm;
  };
  unsigned nt = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  std::vector<int> leads;
  for (int n = kMinDenominator; n <= top; ++n) leads.push_back(n);
  std::size_t next = 0;
  std::mutex qmu;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (;;) {
        int lead;
        {
          std::lock_guard<std::mutex> lock(qmu);
          if (next == leads.size()) return;
          lead = leads[next++];
        }
        work(lead);
      }
    });
  for (auto& th : pool) th.join();
  std::sort(hits.begin(), hits.end());
  if (stats) {
    stats->admissible = admissible;
    stats->determinant_hits = static_cast<std::int64_t>(hits.size());
  }
  return hits;
}

// With dedupe off, the result is the full orbit closure of every valid candidate.
inline std::vector<CandidateRecord> search_2pi_over_n(const SearchOptions& opt = {}, SearchStats* stats = nullptr) {
  auto raw = search_raw(opt, stats);
  std::set<DenominatorSextuple> seen;
  std::vector<CandidateRecord> out;
  for (const auto& n : raw) {
    auto canon = canonicalize(n);
    if (!seen.insert(canon).second) continue;
    auto v = validate_candidate(canon);
    if (!std::holds_alternative<CandidateRecord>(v)) continue;
    auto rec = std::get<CandidateRecord>(v);
    rec.verdict = candidate_verdict(rec);
    if (opt.dedupe) {
      out.push_back(rec);
    } else {
      for (const auto& member : orbit(canon)) {
        auto copy = rec;
        copy.n = member;
        copy.edges = edges_from_angles(AngleSextuple::two_pi_over(member));
        out.push_back(copy);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
  return out;
}

}  // namespace tetratile
