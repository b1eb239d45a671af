#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "condtest/equality.hpp"
#include "condtest/find_element.hpp"
#include "condtest/oracle.hpp"
#include "condtest/verdict.hpp"

namespace condtest {

// Leading constants for every count the algorithm boxes leave as O(.).
// At 1.0 each parameter equals its boxed formula; the defaults are desk-scale
// settings (the boxed constants are far too conservative to execute) and live
// in one place so sweeps can override them from a config file.
struct ClosenessMultipliers {
  double gamma = 0.004;
  double m = 4e-8;
  double n1 = 6e-5;
  double n2 = 24.0;
  double n3 = 4.0;
  double n4 = 0.01;
  double beta_dd = 3.6e6;
  double chi_induced = 5e13;
  double c_te = 10.0;
};

// Derived parameters for one closeness run; per-tuple values depend on the
// tuple's (beta, alpha).
struct ClosenessParams {
  std::int64_t k = 0;
  double eps = 0.0, delta = 0.0;
  double gamma = 0.0;
  int rounds = 0;  // ceil(log2 log2 k) binary-search steps
  double loglogk = 0.0;
  std::int64_t n2 = 0, n3 = 0;
  ClosenessMultipliers mult;

  struct TupleParams {
    double beta = 0.0, alpha = 0.0;
    double beta_dd = 0.0;           // ratio-deviation threshold beta''
    double chi_pair = 0.0;          // (beta'')^2 / 25
    double chi_induced = 0.0;       // alpha^3 beta^3 / (2^23 gamma^2 ln^3(128 gamma/(alpha beta^2)))
    double delta_te = 0.0;          // eps delta / (32 m (n4+1) lnln k)
    double delta_prune_bs = 0.0;    // delta / (40 * 1 * lnln k)
    double delta_prune_act = 0.0;   // delta / (40 * m * lnln k)
    std::int64_t m = 0;             // candidate sets per assisted run
    std::int64_t n1_bs = 0, n1_act = 0, n4 = 0;
  };
  TupleParams tuple_params(const CandidateTuple& t) const;

  static ClosenessParams make(std::int64_t k, double eps, double delta,
                              const ClosenessMultipliers& mult);
};

// Random candidate set: each element of {1..k} \ {i} kept with probability
// `rate`, the distinguished element excluded by construction.
struct CandidateSet {
  std::vector<ElementId> members;
  bool pruned = false;
};
CandidateSet make_candidate_set(std::int64_t k, ElementId i, double rate, Rng& rng);

// Repeats n1 times: draw j from r_S, take n2 samples from r_{j,i}, and drop
// j when its count reaches 3 n2 / 4. Keeps elements lighter than ~2 r(i),
// removes ones heavier than ~4 r(i).
CandidateSet prune_set(CandidateSet set, ElementId i, const ClosenessParams& params,
                       std::int64_t n1, MixtureOracle& oracle, Rng& rng);

// Binary-search progress hook: (round, log r_guess at entry, went_heavy).
using SearchObserver = std::function<void(int, double, bool)>;

struct ClosenessConfig {
  ClosenessMultipliers mult;
  bool log2_legs = false;
  SearchObserver search_observer;
};

// Closeness test core given a guessed sampling rate for r(i)/r(G_i).
Verdict assisted_closeness_test(double r_guess, const CandidateTuple& tuple,
                                const ClosenessParams& params, CondOracle& p_oracle,
                                CondOracle& q_oracle, MixtureOracle& mixture, Rng& rng);

// Bisects log r_guess over [-log k, 0], running the assisted test at every
// visited guess; a comparator on n(i) out of n3 samples from S u {i} steers
// the search. Diff when any visited assisted test says diff.
Verdict binary_search(const CandidateTuple& tuple, const ClosenessParams& params,
                      CondOracle& p_oracle, CondOracle& q_oracle, MixtureOracle& mixture,
                      Rng& rng, const SearchObserver& observer = {});

// Full closeness test: same with probability >= 1 - delta when p = q, diff
// with probability >= 1/30 when ||p-q||_1 >= eps.
Verdict closeness_test(CondOracle& p_oracle, CondOracle& q_oracle, double eps, double delta,
                       std::int64_t k, const ClosenessConfig& cfg, Rng& rng);

}  // namespace condtest
