#include "condtest/equality.hpp"

#include <cmath>
#include <stdexcept>

namespace condtest {

EqualityParams EqualityParams::make(double chi_bound, double delta, double c_te) {
  if (!(chi_bound > 0.0) || chi_bound > 2.0)
    throw std::invalid_argument("chi_bound must be in (0, 2]");
  if (!(delta > 0.0) || delta >= 1.0) throw std::invalid_argument("delta must be in (0, 1)");
  EqualityParams p;
  p.chi_bound = chi_bound;
  p.delta = delta;
  p.n = static_cast<std::int64_t>(std::ceil(c_te / chi_bound));
  p.repetitions = static_cast<int>(std::ceil(18.0 * std::log(1.0 / delta)));
  if (static_cast<double>(p.n) * chi_bound < 10.0)
    throw std::invalid_argument("n * chi_bound must be >= 10");
  return p;
}

double t_statistic(std::int64_t n1, std::int64_t n2, std::int64_t n_prime,
                   std::int64_t n_dprime) {
  const double num = static_cast<double>(n1 - n2) * static_cast<double>(n1 - n2) -
                     static_cast<double>(n1) - static_cast<double>(n2);
  auto term = [&](std::int64_t denom) {
    if (num == 0.0) return 0.0;
    if (denom == 0) throw std::domain_error("degenerate statistic");
    return num / static_cast<double>(denom);
  };
  return term(n1 + n2 - 1) + term(n_prime + n_dprime - n1 - n2 - 1);
}

Verdict test_equal(BinarySource& src_p, BinarySource& src_q, const EqualityParams& params,
                   Rng& rng) {
  (void)rng;  // sources draw from the trial generator themselves
  src_p.set_batch_mean(static_cast<double>(params.n));
  src_q.set_batch_mean(static_cast<double>(params.n));
  const double threshold = static_cast<double>(params.n) * params.chi_bound / 2.0;

  long long samples = 0;
  int diff_votes = 0;
  for (int rep = 0; rep < params.repetitions; ++rep) {
    BatchCounts a = src_p.poisson_batch();
    BatchCounts b = src_q.poisson_batch();
    samples += a.total + b.total;
    std::int64_t s1 = a.successes, s2 = b.successes;
    std::int64_t f1 = a.total - a.successes, f2 = b.total - b.successes;
    // Evaluate on the minority labeling; with batch means >= 10/chi_bound the
    // majority side's count is >= 2 apart from negligible mass, so the
    // degenerate case cannot fire (a zero denominator forces both minority
    // counts into {0, 1}, making the numerator 0).
    double t = (s1 + s2 <= f1 + f2) ? t_statistic(s1, s2, a.total, b.total)
                                    : t_statistic(f1, f2, a.total, b.total);
    if (t > threshold) ++diff_votes;
  }
  Outcome o = (2 * diff_votes > params.repetitions) ? Outcome::Diff : Outcome::Same;
  return Verdict{o, samples};
}

}  // namespace condtest
