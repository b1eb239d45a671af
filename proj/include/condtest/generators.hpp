#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "condtest/distribution.hpp"
#include "condtest/rng.hpp"

namespace condtest {

// Relation a generated pair promises; checked against the exact vectors
// before any trial runs.
enum class PairRelation { Equal, Far };

struct GeneratedPair {
  Distribution p;
  Distribution q;
  PairRelation relation;
  double far_eps = 0.0;  // promised l1 lower bound when relation == Far
};

// Synthetic pair generators:
//   uniform               p = q uniform
//   zipf(s)               p = q, p(i) proportional to 1/i^s
//   dirichlet(a)          p = q, one seeded Dirichlet(a) draw
//   two-bump(eps)         p uniform, q = (1 +/- eps)/k halves; l1 = eps
//   spike(eps)            p(1) = eps/2, p(2) = 0 vs the spike moved; l1 = eps
//   swap-pair(base, eps)  q = base with eps/2 mass moved max -> min element
// Spec strings: "uniform", "zipf(1.0)", "two-bump(0.5)",
// "swap-pair(zipf(1.0),0.5)", ...
struct GeneratorSpec {
  std::string name;
  std::vector<double> params;
  std::optional<std::string> base;  // swap-pair only

  static GeneratorSpec parse(const std::string& text);
  std::string to_string() const;

  GeneratedPair make(std::int64_t k, std::uint64_t seed) const;
};

}  // namespace condtest
