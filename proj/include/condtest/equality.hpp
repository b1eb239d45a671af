#pragma once

#include <cstdint>

#include "condtest/oracle.hpp"
#include "condtest/rng.hpp"
#include "condtest/verdict.hpp"

namespace condtest {

// Parameters of the Poissonized binary equality test. `chi_bound` is the
// chi-squared distance the test must detect, `n` the Poisson batch mean.
struct EqualityParams {
  double chi_bound = 0.0;
  double delta = 0.0;
  std::int64_t n = 0;
  int repetitions = 0;

  // n = ceil(c_te / chi_bound), repetitions = ceil(18 ln(1/delta)).
  // Requires chi_bound in (0, 2], delta in (0, 1), and n * chi_bound >= 10.
  static EqualityParams make(double chi_bound, double delta, double c_te = kDefaultCte);

  static constexpr double kDefaultCte = 200.0;
};

// Chi-squared style statistic on Poissonized success counts n1, n2 out of
// batches of size n', n'':
//   [(n1-n2)^2 - n1 - n2] / (n1 + n2 - 1) + [(n1-n2)^2 - n1 - n2] / (n' + n'' - n1 - n2 - 1)
// A term with zero numerator is 0 regardless of its denominator. A term with
// nonzero numerator and zero denominator throws std::domain_error
// ("degenerate statistic").
double t_statistic(std::int64_t n1, std::int64_t n2, std::int64_t n_prime, std::int64_t n_dprime);

// Decides same vs chi-squared distance >= chi_bound between two Bernoulli
// streams. Each repetition draws Poisson(n)-sized batches from both sources
// and votes on the statistic against threshold n*chi_bound/2; the majority
// wins, ties going to same. The statistic is evaluated on whichever outcome
// labeling (success or failure) has the smaller combined count; the test is
// label-symmetric and this keeps both terms at the scale the batch actually
// resolves. Query cost is the sum of all batch sizes.
Verdict test_equal(BinarySource& src_p, BinarySource& src_q, const EqualityParams& params,
                   Rng& rng);

}  // namespace condtest
