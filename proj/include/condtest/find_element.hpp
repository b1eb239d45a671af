#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "condtest/distribution.hpp"
#include "condtest/oracle.hpp"
#include "condtest/rng.hpp"

namespace condtest {

// Candidate distinguishing element with its far-ness and heaviness levels.
struct CandidateTuple {
  ElementId element = 0;
  double beta = 0.0;   // beta_j = j * eps / 8
  double alpha = 0.0;  // alpha_j = 1 / (4 j log(16/eps))
};

// Elements sorted by probability descending, ties by id ascending.
// suffix_mass(rank) is the tail mass from that rank on, so an element is
// alpha-heavy iff suffix_mass(rank_of(id)) >= alpha.
class HeavinessOrder {
 public:
  explicit HeavinessOrder(const Distribution& dist);

  std::int64_t size() const { return static_cast<std::int64_t>(order_.size()); }
  ElementId id_at(std::int64_t rank) const { return order_[static_cast<std::size_t>(rank)]; }
  std::int64_t rank_of(ElementId id) const { return rank_[static_cast<std::size_t>(id - 1)]; }
  double suffix_mass(std::int64_t rank) const { return suffix_[static_cast<std::size_t>(rank)]; }
  const std::vector<ElementId>& order() const { return order_; }

  bool is_alpha_heavy(ElementId id, double alpha) const {
    return suffix_mass(rank_of(id)) >= alpha - 1e-12;
  }

 private:
  std::vector<ElementId> order_;
  std::vector<std::int64_t> rank_;
  std::vector<double> suffix_;
};

// Anything that can produce one unconditional sample per call.
class DomainSampler {
 public:
  virtual ~DomainSampler() = default;
  virtual ElementId draw() = 0;
};

// Samples a known distribution directly; optionally tallies simulated draws.
class KnownDomainSampler : public DomainSampler {
 public:
  KnownDomainSampler(const Distribution& dist, Rng& rng, long long* sim_counter = nullptr);
  ElementId draw() override;

 private:
  Rng* rng_;
  long long* sim_counter_;
  std::vector<double> prefix_;
};

class OracleDomainSampler : public DomainSampler {
 public:
  explicit OracleDomainSampler(CondOracle& oracle) : oracle_(&oracle) {}
  ElementId draw() override { return oracle_->sample_full(); }

 private:
  CondOracle* oracle_;
};

class MixtureDomainSampler : public DomainSampler {
 public:
  explicit MixtureDomainSampler(MixtureOracle& oracle) : oracle_(&oracle) {}
  ElementId draw() override { return oracle_->sample_full(); }

 private:
  MixtureOracle* oracle_;
};

// The tuple schedule (beta_j, alpha_j) for j = 1..ceil(16/eps). `log2_legs`
// switches the log in alpha_j from natural to base-2 for sensitivity studies.
std::vector<CandidateTuple> tuple_schedule(double eps, bool log2_legs = false);

// Draws m = ceil(16/eps) unconditional samples and attaches the schedule.
// Costs exactly m draws from `src`.
std::vector<CandidateTuple> find_element(DomainSampler& src, double eps, bool log2_legs = false);

// True iff the tuple's element is alpha-heavy under `order` and its weight
// a[element] >= beta. Weights must lie in [0, 2].
bool tuple_quality(const HeavinessOrder& order, const CandidateTuple& tuple,
                   std::span<const double> a);

}  // namespace condtest
