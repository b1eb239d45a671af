#include "condtest/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace condtest {

RankedView::RankedView(const Distribution& dist, std::vector<ElementId> perm)
    : source_(&dist), perm_(std::move(perm)) {
  const auto k = static_cast<std::size_t>(dist.size());
  if (perm_.size() != k) throw std::invalid_argument("view permutation size mismatch");
  pos_.assign(k, -1);
  prefix_.assign(k + 1, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    pos_[static_cast<std::size_t>(perm_[i] - 1)] = static_cast<std::int64_t>(i);
    prefix_[i + 1] = prefix_[i] + dist.mass(perm_[i]);
  }
  for (std::int64_t p : pos_)
    if (p < 0) throw std::invalid_argument("view permutation not a bijection");
}

std::int64_t RankedView::locate(std::int64_t lo, std::int64_t hi, double target) const {
  double want = prefix_[static_cast<std::size_t>(lo)] + target;
  auto first = prefix_.begin() + lo + 1;
  auto last = prefix_.begin() + hi + 1;
  auto it = std::upper_bound(first, last, want);
  std::int64_t pos = lo + std::distance(first, it);
  return std::min(pos, hi - 1);
}

QuerySet QuerySet::of_ids(std::vector<ElementId> ids) {
  QuerySet s;
  s.ids = std::move(ids);
  return s;
}

QuerySet QuerySet::full_domain(const RankedView& view) {
  QuerySet s;
  s.view = &view;
  s.ranges.emplace_back(0, view.size());
  return s;
}

std::int64_t QuerySet::element_count() const {
  std::int64_t n = static_cast<std::int64_t>(ids.size());
  for (const auto& [lo, hi] : ranges) n += hi - lo;
  return n;
}

CondOracle::CondOracle(const Distribution& hidden, Rng& rng) : hidden_(&hidden), rng_(&rng) {}

double CondOracle::query_mass(const QuerySet& set) const {
  double m = 0.0;
  if (!set.ranges.empty()) {
    if (set.view == nullptr || set.view->source() != hidden_)
      throw std::invalid_argument("query set ranges need a view of this oracle's distribution");
    for (const auto& [lo, hi] : set.ranges) m += set.view->range_mass(lo, hi);
  }
  for (ElementId id : set.ids) m += hidden_->mass(id);
  return m;
}

ElementId CondOracle::conditional_sample(const QuerySet& set) {
  const std::int64_t n = set.element_count();
  if (n <= 0) throw std::invalid_argument("empty query set");
  queries_ += 1;
  double total = query_mass(set);
  if (total <= 0.0) {
    zero_mass_ = true;
    std::int64_t idx = rng_->index(n);
    for (const auto& [lo, hi] : set.ranges) {
      if (idx < hi - lo) return set.view->id_at(lo + idx);
      idx -= hi - lo;
    }
    return set.ids[static_cast<std::size_t>(idx)];
  }
  double u = rng_->uniform() * total;
  for (const auto& [lo, hi] : set.ranges) {
    double m = set.view->range_mass(lo, hi);
    if (u < m) return set.view->id_at(set.view->locate(lo, hi, u));
    u -= m;
  }
  for (ElementId id : set.ids) {
    double m = hidden_->mass(id);
    if (u < m) return id;
    u -= m;
  }
  return set.ids.empty() ? set.view->id_at(set.ranges.back().second - 1) : set.ids.back();
}

ElementId CondOracle::sample_full() {
  if (full_prefix_.empty()) {
    const auto k = static_cast<std::size_t>(hidden_->size());
    full_prefix_.assign(k + 1, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      full_prefix_[i + 1] = full_prefix_[i] + hidden_->probs()[i];
  }
  queries_ += 1;
  double u = rng_->uniform() * full_prefix_.back();
  auto it = std::upper_bound(full_prefix_.begin() + 1, full_prefix_.end(), u);
  auto idx = static_cast<std::int64_t>(std::distance(full_prefix_.begin() + 1, it));
  return std::min(idx, hidden_->size() - 1) + 1;
}

std::int64_t CondOracle::binary_count(const QuerySet& set, const QuerySet& success, std::int64_t n) {
  auto src = binary_source(set, success);
  return src->count(n);
}

std::unique_ptr<BinarySource> CondOracle::binary_source(const QuerySet& set,
                                                        const QuerySet& success) {
  double total = query_mass(set);
  double p;
  if (total <= 0.0) {
    zero_mass_ = true;
    p = static_cast<double>(success.element_count()) / static_cast<double>(set.element_count());
  } else {
    p = query_mass(success) / total;
  }
  p = std::clamp(p, 0.0, 1.0);
  return std::make_unique<OracleBinarySource>(*this, p);
}

std::unique_ptr<BinarySource> MixtureOracle::binary_source(const QuerySet& set,
                                                           const QuerySet& success) {
  auto prob = [&](CondOracle& o) {
    double total = o.query_mass(set);
    if (total <= 0.0) {
      o.flag_zero_mass();
      return static_cast<double>(success.element_count()) /
             static_cast<double>(set.element_count());
    }
    return std::clamp(o.query_mass(success) / total, 0.0, 1.0);
  };
  return std::make_unique<MixtureBinarySource>(*left_, prob(*left_), *right_, prob(*right_), *rng_);
}

MixtureSetSampler::MixtureSetSampler(CondOracle& left, CondOracle& right, Rng& rng,
                                     std::vector<ElementId> ids)
    : left_(&left), right_(&right), rng_(&rng), ids_(std::move(ids)) {
  rebuild();
}

void MixtureSetSampler::rebuild() {
  lcum_.resize(ids_.size());
  rcum_.resize(ids_.size());
  double lc = 0.0, rc = 0.0;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    lc += left_->hidden().mass(ids_[i]);
    rc += right_->hidden().mass(ids_[i]);
    lcum_[i] = lc;
    rcum_[i] = rc;
  }
  ltotal_ = lc;
  rtotal_ = rc;
}

ElementId MixtureSetSampler::sample() {
  if (ids_.empty()) throw std::logic_error("sampling from empty set");
  bool use_left = rng_->bernoulli(0.5);
  CondOracle* side = use_left ? left_ : right_;
  const std::vector<double>& cum = use_left ? lcum_ : rcum_;
  double total = use_left ? ltotal_ : rtotal_;
  side->charge(1);
  if (total <= 0.0) {
    side->flag_zero_mass();
    return ids_[static_cast<std::size_t>(rng_->index(static_cast<std::int64_t>(ids_.size())))];
  }
  double u = rng_->uniform() * total;
  auto it = std::upper_bound(cum.begin(), cum.end(), u);
  std::size_t idx = std::min(static_cast<std::size_t>(std::distance(cum.begin(), it)),
                             ids_.size() - 1);
  return ids_[idx];
}

void MixtureSetSampler::remove(ElementId id) {
  auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) return;
  ids_.erase(it);
  rebuild();
}

}  // namespace condtest
