#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "condtest/distribution.hpp"
#include "condtest/equality.hpp"
#include "condtest/find_element.hpp"
#include "condtest/oracle.hpp"
#include "condtest/verdict.hpp"

namespace condtest {

// Partition of the tail set G_x = {y : rank(y) >= rank(x)} into groups of
// consecutive ranks, each closed once its mass reaches p(x). Closed groups
// have mass in [p(x), 2p(x)); a light residual is merged into the previous
// group when the merge stays <= 2p(x), otherwise kept flagged undersized.
struct GroupingH {
  struct Group {
    std::int64_t lo = 0, hi = 0;  // rank range [lo, hi) in the heaviness order
    double p_mass = 0.0;
    bool undersized = false;
  };
  ElementId x = 0;
  std::int64_t x_rank = 0;
  std::vector<Group> groups;
};

GroupingH build_grouping(const Distribution& p, const HeavinessOrder& order, ElementId x);

// Conditional access over a (possibly derived) domain 1..domain(): one
// unconditional draw, or a two-outcome source on a pair of elements.
class CondAccess {
 public:
  virtual ~CondAccess() = default;
  virtual std::int64_t domain() const = 0;
  virtual ElementId draw() = 0;
  virtual std::unique_ptr<BinarySource> pair(ElementId a, ElementId b) = 0;
};

// Fully known distribution; draws are simulated and tallied separately.
class KnownAccess : public CondAccess {
 public:
  KnownAccess(const Distribution& dist, Rng& rng, long long* sim_counter = nullptr);
  std::int64_t domain() const override { return dist_->size(); }
  ElementId draw() override { return sampler_.draw(); }
  std::unique_ptr<BinarySource> pair(ElementId a, ElementId b) override;

 private:
  const Distribution* dist_;
  Rng* rng_;
  long long* sim_counter_;
  KnownDomainSampler sampler_;
};

// Direct oracle access over its full domain.
class OracleAccess : public CondAccess {
 public:
  explicit OracleAccess(CondOracle& oracle) : oracle_(&oracle) {}
  std::int64_t domain() const override { return oracle_->domain_size(); }
  ElementId draw() override { return oracle_->sample_full(); }
  std::unique_ptr<BinarySource> pair(ElementId a, ElementId b) override;

 private:
  CondOracle* oracle_;
};

// Sub-test parameter trace for assertions on the budget schedule.
struct SubTestRecord {
  char kind = '?';  // 'c' pair, 'd' tail split, 'e' near-uniform inner pair
  int tuple_index = 0;
  int inner_index = 0;
  double chi_bound = 0.0;
  double delta = 0.0;
};
using SubTestObserver = std::function<void(const SubTestRecord&)>;

struct IdentityConfig {
  double c_te = 10.0;         // batch-mean constant for the equality sub-tests
  bool charge_known = false;  // when true, simulated known-side draws count as queries
  bool log2_legs = false;
  SubTestObserver observer;
};

// Decides same vs ||p-q||_1 >= eps for a near-uniform p given an element y
// with p(y) >= q(y). Diff with probability >= 1/5 - delta when far.
Verdict near_uniform_identity_test(double eps, double delta, CondAccess& p_access,
                                   CondAccess& q_access, ElementId y,
                                   const IdentityConfig& cfg, Rng& rng);

// Full identity test against the known distribution p: same with probability
// >= 1 - delta when p = q, diff with probability >= 1/30 when far.
// Candidate elements are drawn from the known p by direct simulation; oracle
// queries are spent only on the unknown side.
Verdict identity_test(const Distribution& p, CondOracle& q_oracle, double eps, double delta,
                      const IdentityConfig& cfg, Rng& rng);

}  // namespace condtest
