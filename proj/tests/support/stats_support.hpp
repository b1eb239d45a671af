#pragma once

// Independent statistical checkers for the test suites. These implement the
// textbook formulas directly so they can serve as oracles for the library's
// sampling paths.

#include <cmath>
#include <cstdint>
#include <vector>

namespace teststats {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Pearson chi-squared goodness-of-fit p-value via the Wilson-Hilferty
// normal approximation; adequate for the significance levels used here.
inline double chi2_gof_pvalue(const std::vector<std::int64_t>& observed,
                              const std::vector<double>& expected_probs, std::int64_t n) {
  double stat = 0.0;
  int df = -1;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    double e = expected_probs[i] * static_cast<double>(n);
    if (e <= 0.0) continue;
    double d = static_cast<double>(observed[i]) - e;
    stat += d * d / e;
    ++df;
  }
  if (df < 1) return 1.0;
  double v = static_cast<double>(df);
  double z = (std::cbrt(stat / v) - (1.0 - 2.0 / (9.0 * v))) / std::sqrt(2.0 / (9.0 * v));
  return 1.0 - normal_cdf(z);
}

// Three-sigma binomial half-width for a frequency estimated from n trials.
inline double binom_3sigma(double p, std::int64_t n) {
  return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace teststats
