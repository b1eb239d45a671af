#include "condtest/find_element.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace condtest {

HeavinessOrder::HeavinessOrder(const Distribution& dist) {
  const auto k = static_cast<std::size_t>(dist.size());
  order_.resize(k);
  std::iota(order_.begin(), order_.end(), ElementId{1});
  std::stable_sort(order_.begin(), order_.end(), [&](ElementId a, ElementId b) {
    double ma = dist.mass(a), mb = dist.mass(b);
    if (ma != mb) return ma > mb;
    return a < b;
  });
  rank_.assign(k, 0);
  suffix_.assign(k + 1, 0.0);
  for (std::size_t r = 0; r < k; ++r) rank_[static_cast<std::size_t>(order_[r] - 1)] = static_cast<std::int64_t>(r);
  for (std::size_t r = k; r-- > 0;) suffix_[r] = suffix_[r + 1] + dist.mass(order_[r]);
}

KnownDomainSampler::KnownDomainSampler(const Distribution& dist, Rng& rng, long long* sim_counter)
    : rng_(&rng), sim_counter_(sim_counter) {
  const auto k = static_cast<std::size_t>(dist.size());
  prefix_.assign(k + 1, 0.0);
  for (std::size_t i = 0; i < k; ++i) prefix_[i + 1] = prefix_[i] + dist.probs()[i];
}

ElementId KnownDomainSampler::draw() {
  if (sim_counter_) ++*sim_counter_;
  double u = rng_->uniform() * prefix_.back();
  auto it = std::upper_bound(prefix_.begin() + 1, prefix_.end(), u);
  auto idx = static_cast<std::int64_t>(std::distance(prefix_.begin() + 1, it));
  return std::min<std::int64_t>(idx, static_cast<std::int64_t>(prefix_.size()) - 2) + 1;
}

std::vector<CandidateTuple> tuple_schedule(double eps, bool log2_legs) {
  if (!(eps > 0.0) || eps > 2.0) throw std::invalid_argument("eps must be in (0, 2]");
  const auto m = static_cast<std::int64_t>(std::ceil(16.0 / eps));
  const double lg = log2_legs ? std::log2(16.0 / eps) : std::log(16.0 / eps);
  std::vector<CandidateTuple> tuples(static_cast<std::size_t>(m));
  for (std::int64_t j = 1; j <= m; ++j) {
    auto& t = tuples[static_cast<std::size_t>(j - 1)];
    t.beta = static_cast<double>(j) * eps / 8.0;
    t.alpha = 1.0 / (4.0 * static_cast<double>(j) * lg);
  }
  return tuples;
}

std::vector<CandidateTuple> find_element(DomainSampler& src, double eps, bool log2_legs) {
  std::vector<CandidateTuple> tuples = tuple_schedule(eps, log2_legs);
  for (auto& t : tuples) t.element = src.draw();
  return tuples;
}

bool tuple_quality(const HeavinessOrder& order, const CandidateTuple& tuple,
                   std::span<const double> a) {
  for (double w : a)
    if (w < 0.0 || w > 2.0) throw std::invalid_argument("weights must lie in [0, 2]");
  if (!order.is_alpha_heavy(tuple.element, tuple.alpha)) return false;
  return a[static_cast<std::size_t>(tuple.element - 1)] >= tuple.beta - 1e-12;
}

}  // namespace condtest
