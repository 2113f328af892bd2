#pragma once
// Shared conventions: vertex/edge slot indexing, exact pi-rational angles and
// the library-wide error type.
//
// Vertices are V1..V4, stored 0-based. Edge slots follow the fixed order
// (12, 13, 14, 23, 24, 34); slot s joins kSlotVertices[s]. Face F_i is the face
// opposite V_i. The dihedral angle theta_ij sits on edge e_ij, between the two
// faces F_k and F_l with {k,l} the complement of {i,j}. Nothing in the library
// permutes this order implicitly; all permutation handling is in taxonomy.hpp.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace tetratile {

inline constexpr double kPi = std::numbers::pi;

inline constexpr std::array<std::array<int, 2>, 6> kSlotVertices{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

constexpr int slot_index(int i, int j) {
  if (i > j) std::swap(i, j);
  // (0,1)->0 (0,2)->1 (0,3)->2 (1,2)->3 (1,3)->4 (2,3)->5
  return i == 0 ? j - 1 : (i == 1 ? j + 1 : 5);
}

// Slot of the edge disjoint from slot s: 12<->34, 13<->24, 14<->23.
constexpr int opposite_slot(int s) { return 5 - s; }

// The two vertices not on slot s, ascending.
constexpr std::array<int, 2> complement_vertices(int s) {
  auto [i, j] = kSlotVertices[s];
  std::array<int, 2> out{};
  int n = 0;
  for (int v = 0; v < 4; ++v)
    if (v != i && v != j) out[n++] = v;
  return out;
}

// Three slots incident to vertex v.
constexpr std::array<int, 3> incident_slots(int v) {
  std::array<int, 3> out{};
  int n = 0;
  for (int s = 0; s < 6; ++s)
    if (kSlotVertices[s][0] == v || kSlotVertices[s][1] == v) out[n++] = s;
  return out;
}

// Three slots of face F_i (the face opposite vertex i).
constexpr std::array<int, 3> face_slots(int i) {
  std::array<int, 3> out{};
  int n = 0;
  for (int s = 0; s < 6; ++s)
    if (kSlotVertices[s][0] != i && kSlotVertices[s][1] != i) out[n++] = s;
  return out;
}

inline std::string slot_name(int s) {
  return std::to_string(kSlotVertices[s][0] + 1) + std::to_string(kSlotVertices[s][1] + 1);
}

// Parses "12".."34" (either vertex order); returns -1 on failure.
inline int parse_slot(const std::string& text) {
  if (text.size() != 2) return -1;
  int i = text[0] - '1', j = text[1] - '1';
  if (i < 0 || i > 3 || j < 0 || j > 3 || i == j) return -1;
  return slot_index(i, j);
}

enum class ErrorCode {
  ParseError,
  InvalidConfig,
  NonPositiveEdge,
  TriangleInequalityViolated,
  DegenerateFlat,
  NumericalInstability,
  NotRealizable,
  DivisorStraddlesZero,
  NegativeSqrt,
  OmegaStraddlesZero,
  BudgetExhausted,
  UnknownLetter,
  NotATetrahedronType,
  AngleNotRationalMultiple,
  AmbiguousEquality,
  OutOfRange,
  DegenerateSystem,
  UnmatchedCandidate,
  ProofGap,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NonPositiveEdge: return "NonPositiveEdge";
    case ErrorCode::TriangleInequalityViolated: return "TriangleInequalityViolated";
    case ErrorCode::DegenerateFlat: return "DegenerateFlat";
    case ErrorCode::NumericalInstability: return "NumericalInstability";
    case ErrorCode::NotRealizable: return "NotRealizable";
    case ErrorCode::DivisorStraddlesZero: return "DivisorStraddlesZero";
    case ErrorCode::NegativeSqrt: return "NegativeSqrt";
    case ErrorCode::OmegaStraddlesZero: return "OmegaStraddlesZero";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::UnknownLetter: return "UnknownLetter";
    case ErrorCode::NotATetrahedronType: return "NotATetrahedronType";
    case ErrorCode::AngleNotRationalMultiple: return "AngleNotRationalMultiple";
    case ErrorCode::AmbiguousEquality: return "AmbiguousEquality";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DegenerateSystem: return "DegenerateSystem";
    case ErrorCode::UnmatchedCandidate: return "UnmatchedCandidate";
    case ErrorCode::ProofGap: return "ProofGap";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// An angle num*pi/den held exactly; always stored reduced with den > 0.
struct PiRational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr PiRational() = default;
  constexpr PiRational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    auto g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  static constexpr PiRational pi_over(std::int64_t n) { return {1, n}; }
  static constexpr PiRational two_pi_over(std::int64_t n) { return {2, n}; }

  double radians() const { return kPi * static_cast<double>(num) / static_cast<double>(den); }

  friend constexpr bool operator==(const PiRational&, const PiRational&) = default;
  friend constexpr PiRational operator+(PiRational a, PiRational b) {
    return {a.num * b.den + b.num * a.den, a.den * b.den};
  }
  friend constexpr PiRational operator-(PiRational a, PiRational b) {
    return {a.num * b.den - b.num * a.den, a.den * b.den};
  }
  friend constexpr PiRational operator*(std::int64_t k, PiRational a) { return {k * a.num, a.den}; }
  friend constexpr bool operator<(PiRational a, PiRational b) { return a.num * b.den < b.num * a.den; }

  // "pi/3", "2pi/5", "pi", "0".
  std::string str() const {
    if (num == 0) return "0";
    std::string s = (num == 1 ? "" : (num == -1 ? "-" : std::to_string(num))) + "pi";
    if (den != 1) s += "/" + std::to_string(den);
    return s;
  }
};

}  // namespace tetratile
