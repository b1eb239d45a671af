#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "condtest/distribution.hpp"
#include "condtest/rng.hpp"

namespace condtest {

// Permutation of the domain plus prefix sums of one distribution's mass in
// that order. Lets query sets be expressed as a few contiguous rank ranges,
// so set masses are O(1) instead of O(|S|). Shareable across trials.
class RankedView {
 public:
  RankedView(const Distribution& dist, std::vector<ElementId> perm);

  const Distribution* source() const { return source_; }
  std::int64_t size() const { return static_cast<std::int64_t>(perm_.size()); }
  ElementId id_at(std::int64_t pos) const { return perm_[static_cast<std::size_t>(pos)]; }
  std::int64_t pos_of(ElementId id) const { return pos_[static_cast<std::size_t>(id - 1)]; }
  // Mass of positions [lo, hi).
  double range_mass(std::int64_t lo, std::int64_t hi) const {
    return prefix_[static_cast<std::size_t>(hi)] - prefix_[static_cast<std::size_t>(lo)];
  }
  // Position in [lo, hi) holding the point `target` of cumulative mass,
  // measured from lo. Requires range_mass(lo, hi) > 0.
  std::int64_t locate(std::int64_t lo, std::int64_t hi, double target) const;

 private:
  const Distribution* source_;
  std::vector<ElementId> perm_;
  std::vector<std::int64_t> pos_;
  std::vector<double> prefix_;
};

// Query set: a union of rank ranges (under a view of the hidden distribution)
// plus explicit ids. Parts must be disjoint.
struct QuerySet {
  const RankedView* view = nullptr;
  std::vector<std::pair<std::int64_t, std::int64_t>> ranges;  // [lo, hi) positions
  std::vector<ElementId> ids;

  static QuerySet of_ids(std::vector<ElementId> ids);
  static QuerySet full_domain(const RankedView& view);

  std::int64_t element_count() const;
  bool empty() const { return element_count() == 0; }
};

// Poissonized batch outcome: `successes` out of `total` conditional samples.
struct BatchCounts {
  std::int64_t successes = 0;
  std::int64_t total = 0;
};

// A two-outcome conditional sample stream. One unit of query cost per
// underlying conditional sample.
class BinarySource {
 public:
  virtual ~BinarySource() = default;
  // Fix the Poisson batch mean (caches samplers for repeated batches).
  virtual void set_batch_mean(double mean) = 0;
  // Draw Poisson(mean) samples, return success/total counts, charge total.
  virtual BatchCounts poisson_batch() = 0;
  // Draw exactly n samples, return success count, charge n.
  virtual std::int64_t count(std::int64_t n) = 0;
  virtual double success_probability() const = 0;
};

// Query-counted conditional-sampling access to a hidden distribution.
// When a query set has zero hidden mass the sample is uniform over the set
// and `zero_mass_queried` latches (testers treat that as benign).
class CondOracle {
 public:
  CondOracle(const Distribution& hidden, Rng& rng);

  std::int64_t domain_size() const { return hidden_->size(); }
  long long queries() const { return queries_; }
  bool zero_mass_queried() const { return zero_mass_; }
  Rng& rng() { return *rng_; }

  // One conditional sample from the query set; counter += 1.
  ElementId conditional_sample(const QuerySet& set);
  // One unconditional sample (query set = full domain); counter += 1.
  ElementId sample_full();
  // n conditional samples from `set`, counting hits in `success` (a subset);
  // counter += n. Statistically identical to n conditional_sample calls.
  std::int64_t binary_count(const QuerySet& set, const QuerySet& success, std::int64_t n);

  RankedView make_view(std::vector<ElementId> perm) const {
    return RankedView(*hidden_, std::move(perm));
  }
  std::unique_ptr<BinarySource> binary_source(const QuerySet& set, const QuerySet& success);

  // Simulation internals (also used to freeze binary sources); testers must
  // only consume samples.
  double query_mass(const QuerySet& set) const;
  const Distribution& hidden() const { return *hidden_; }

  void charge(std::int64_t n) { queries_ += n; }
  void flag_zero_mass() { zero_mass_ = true; }

 private:
  const Distribution* hidden_;
  Rng* rng_;
  long long queries_ = 0;
  bool zero_mass_ = false;
  std::vector<double> full_prefix_;  // lazy full-domain CDF
};

// Fair-coin mixture of two conditional oracles; a sample from query set S is
// one conditional sample from the chosen side, so it follows r_S for
// r = (p + q) / 2 and costs exactly one query on that side.
class MixtureOracle {
 public:
  MixtureOracle(CondOracle& left, CondOracle& right, Rng& rng)
      : left_(&left), right_(&right), rng_(&rng) {}

  CondOracle& left() { return *left_; }
  CondOracle& right() { return *right_; }
  long long queries() const { return left_->queries() + right_->queries(); }

  ElementId mixture_sample(const QuerySet& set) {
    return rng_->bernoulli(0.5) ? left_->conditional_sample(set) : right_->conditional_sample(set);
  }
  ElementId sample_full() {
    return rng_->bernoulli(0.5) ? left_->sample_full() : right_->sample_full();
  }
  std::unique_ptr<BinarySource> binary_source(const QuerySet& set, const QuerySet& success);

 private:
  CondOracle* left_;
  CondOracle* right_;
  Rng* rng_;
};

// Bernoulli stream with a known success probability; counts its own samples.
// Used for raw two-outcome fixtures and free simulation of known sides.
class PlainBinarySource : public BinarySource {
 public:
  PlainBinarySource(double p, Rng& rng, long long* counter = nullptr)
      : p_(p), rng_(&rng), counter_(counter), succ_(0.0), fail_(0.0) {}

  void set_batch_mean(double mean) override {
    succ_ = PoissonSampler(mean * p_);
    fail_ = PoissonSampler(mean * (1.0 - p_));
  }
  BatchCounts poisson_batch() override {
    std::int64_t s = succ_(*rng_);
    std::int64_t f = fail_(*rng_);
    if (counter_) *counter_ += s + f;
    return {s, s + f};
  }
  std::int64_t count(std::int64_t n) override {
    if (counter_) *counter_ += n;
    return rng_->binomial(n, p_);
  }
  double success_probability() const override { return p_; }

 private:
  double p_;
  Rng* rng_;
  long long* counter_;
  PoissonSampler succ_, fail_;
};

// Binary source charging a conditional oracle. The success probability is
// frozen at construction from the hidden masses of (set, success).
class OracleBinarySource : public BinarySource {
 public:
  OracleBinarySource(CondOracle& oracle, double p) : oracle_(&oracle), inner_(p, oracle.rng()) {}

  void set_batch_mean(double mean) override { inner_.set_batch_mean(mean); }
  BatchCounts poisson_batch() override {
    BatchCounts b = inner_.poisson_batch();
    oracle_->charge(b.total);
    return b;
  }
  std::int64_t count(std::int64_t n) override {
    oracle_->charge(n);
    return inner_.count(n);
  }
  double success_probability() const override { return inner_.success_probability(); }

 private:
  CondOracle* oracle_;
  PlainBinarySource inner_;
};

// Binary source over the mixture r = (p+q)/2: each sample flips a fair coin
// and consumes one query on the chosen side.
class MixtureBinarySource : public BinarySource {
 public:
  MixtureBinarySource(CondOracle& left, double p_left, CondOracle& right, double p_right, Rng& rng)
      : left_(&left), right_(&right), pl_(p_left), pr_(p_right), rng_(&rng) {}

  void set_batch_mean(double mean) override {
    ls_ = PoissonSampler(0.5 * mean * pl_);
    lf_ = PoissonSampler(0.5 * mean * (1.0 - pl_));
    rs_ = PoissonSampler(0.5 * mean * pr_);
    rf_ = PoissonSampler(0.5 * mean * (1.0 - pr_));
  }
  BatchCounts poisson_batch() override {
    std::int64_t s1 = ls_(*rng_), f1 = lf_(*rng_);
    std::int64_t s2 = rs_(*rng_), f2 = rf_(*rng_);
    left_->charge(s1 + f1);
    right_->charge(s2 + f2);
    return {s1 + s2, s1 + f1 + s2 + f2};
  }
  std::int64_t count(std::int64_t n) override {
    std::int64_t nl = rng_->binomial(n, 0.5);
    left_->charge(nl);
    right_->charge(n - nl);
    return rng_->binomial(nl, pl_) + rng_->binomial(n - nl, pr_);
  }
  double success_probability() const override { return 0.5 * (pl_ + pr_); }

 private:
  CondOracle* left_;
  CondOracle* right_;
  double pl_, pr_;
  Rng* rng_;
  PoissonSampler ls_, lf_, rs_, rf_;
};

// Mutable explicit-id set with conditional sampling from the mixture r_S.
// Supports removals (pruning); rebuilds its tables on removal.
class MixtureSetSampler {
 public:
  MixtureSetSampler(CondOracle& left, CondOracle& right, Rng& rng, std::vector<ElementId> ids);

  bool empty() const { return ids_.empty(); }
  const std::vector<ElementId>& ids() const { return ids_; }
  double left_mass() const { return ltotal_; }
  double right_mass() const { return rtotal_; }

  // One sample from r_S; charges the chosen side.
  ElementId sample();
  void remove(ElementId id);

 private:
  void rebuild();
  CondOracle* left_;
  CondOracle* right_;
  Rng* rng_;
  std::vector<ElementId> ids_;
  std::vector<double> lcum_, rcum_;
  double ltotal_ = 0.0, rtotal_ = 0.0;
};

}  // namespace condtest
