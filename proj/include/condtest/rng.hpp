#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace condtest {

// Per-trial random source. Every random decision in a trial flows through
// one Rng instance so a (seed, trial index) pair pins the whole run.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Decorrelated stream seed for trial `stream` under `master` (splitmix64).
  static std::uint64_t derive(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }

  std::int64_t poisson(double mean);

  std::int64_t binomial(std::int64_t n, double p) {
    if (n <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    return std::binomial_distribution<std::int64_t>(n, p)(eng_);
  }

  // Skip count for Bernoulli(p) subset sampling (failures before a success).
  std::int64_t geometric(double p) {
    return std::geometric_distribution<std::int64_t>(p)(eng_);
  }

  // Index in [0, n).
  std::int64_t index(std::int64_t n) {
    return std::uniform_int_distribution<std::int64_t>(0, n - 1)(eng_);
  }

  std::uint64_t next() { return eng_(); }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// Poisson sampler with the mean's constants precomputed, for the hot batch
// loops (millions of draws per trial, so the generic per-call setup of the
// stdlib distribution is measurable). Inversion below mean 10, Hormann's
// PTRS transformed rejection above.
class PoissonSampler {
 public:
  PoissonSampler() { reset(0.0); }
  explicit PoissonSampler(double mean) { reset(mean); }

  double mean() const { return mean_; }

  std::int64_t operator()(Rng& rng) {
    if (mean_ <= 0.0) return 0;
    if (mean_ < 10.0) {  // inversion by uniform products
      double prod = rng.uniform();
      std::int64_t k = 0;
      while (prod > exp_neg_mean_) {
        prod *= rng.uniform();
        ++k;
      }
      return k;
    }
    for (;;) {  // PTRS
      double u = rng.uniform() - 0.5;
      double v = rng.uniform();
      double us = 0.5 - std::fabs(u);
      auto k = static_cast<std::int64_t>(std::floor((2.0 * a_ / us + b_) * u + mean_ + 0.43));
      if (us >= 0.07 && v <= vr_) return k;
      if (k < 0 || (us < 0.013 && v > us)) continue;
      if (std::log(v * inv_alpha_ / (a_ / (us * us) + b_)) <=
          k * log_mean_ - mean_ - std::lgamma(static_cast<double>(k) + 1.0))
        return k;
    }
  }

 private:
  void reset(double mean) {
    mean_ = mean;
    if (mean_ > 0.0 && mean_ < 10.0) exp_neg_mean_ = std::exp(-mean_);
    if (mean_ >= 10.0) {
      b_ = 0.931 + 2.53 * std::sqrt(mean_);
      a_ = -0.059 + 0.02483 * b_;
      inv_alpha_ = 1.1239 + 1.1328 / (b_ - 3.4);
      vr_ = 0.9277 - 3.6224 / (b_ - 2.0);
      log_mean_ = std::log(mean_);
    }
  }

  double mean_ = 0.0;
  double exp_neg_mean_ = 1.0;
  double b_ = 0.0, a_ = 0.0, inv_alpha_ = 0.0, vr_ = 0.0, log_mean_ = 0.0;
};

inline std::int64_t Rng::poisson(double mean) {
  if (mean <= 0.0) return 0;
  PoissonSampler s(mean);
  return s(*this);
}

}  // namespace condtest
