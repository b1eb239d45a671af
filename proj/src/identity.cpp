#include "condtest/identity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace condtest {

namespace {

constexpr double kMassTol = 1e-12;

std::unique_ptr<BinarySource> known_pair_source(double ma, double mb, Rng& rng,
                                                long long* sim_counter) {
  double total = ma + mb;
  double p = total > 0.0 ? ma / total : 0.5;  // zero-mass pair: uniform convention
  return std::make_unique<PlainBinarySource>(p, rng, sim_counter);
}

}  // namespace

KnownAccess::KnownAccess(const Distribution& dist, Rng& rng, long long* sim_counter)
    : dist_(&dist), rng_(&rng), sim_counter_(sim_counter), sampler_(dist, rng, sim_counter) {}

std::unique_ptr<BinarySource> KnownAccess::pair(ElementId a, ElementId b) {
  if (a == b) return std::make_unique<PlainBinarySource>(1.0, *rng_, sim_counter_);
  return known_pair_source(dist_->mass(a), dist_->mass(b), *rng_, sim_counter_);
}

std::unique_ptr<BinarySource> OracleAccess::pair(ElementId a, ElementId b) {
  if (a == b) return oracle_->binary_source(QuerySet::of_ids({a}), QuerySet::of_ids({a}));
  return oracle_->binary_source(QuerySet::of_ids({a, b}), QuerySet::of_ids({a}));
}

GroupingH build_grouping(const Distribution& p, const HeavinessOrder& order, ElementId x) {
  GroupingH g;
  g.x = x;
  g.x_rank = order.rank_of(x);
  const std::int64_t k = order.size();
  if (order.suffix_mass(g.x_rank) <= 0.0) throw std::invalid_argument("empty tail set");
  const double px = p.mass(x);

  std::int64_t lo = g.x_rank;
  double acc = 0.0;
  for (std::int64_t r = g.x_rank; r < k; ++r) {
    acc += p.mass(order.id_at(r));
    if (acc >= px - kMassTol) {
      g.groups.push_back({lo, r + 1, acc, false});
      lo = r + 1;
      acc = 0.0;
    }
  }
  if (lo < k) {  // residual lighter than p(x)
    if (!g.groups.empty() && g.groups.back().p_mass + acc <= 2.0 * px + kMassTol) {
      g.groups.back().hi = k;
      g.groups.back().p_mass += acc;
    } else {
      g.groups.push_back({lo, k, acc, true});
    }
  }
  return g;
}

namespace {

// Induced access over the eligible (non-undersized) groups of a grouping.
// Group indices are 1-based positions in `groups`.
class KnownGroupAccess : public CondAccess {
 public:
  KnownGroupAccess(std::vector<double> masses, Rng& rng, long long* sim_counter)
      : masses_(std::move(masses)), rng_(&rng), sim_counter_(sim_counter) {
    prefix_.assign(masses_.size() + 1, 0.0);
    for (std::size_t i = 0; i < masses_.size(); ++i) prefix_[i + 1] = prefix_[i] + masses_[i];
  }
  std::int64_t domain() const override { return static_cast<std::int64_t>(masses_.size()); }
  ElementId draw() override {
    if (sim_counter_) ++*sim_counter_;
    double u = rng_->uniform() * prefix_.back();
    auto it = std::upper_bound(prefix_.begin() + 1, prefix_.end(), u);
    auto idx = static_cast<std::int64_t>(std::distance(prefix_.begin() + 1, it));
    return std::min<std::int64_t>(idx, domain() - 1) + 1;
  }
  std::unique_ptr<BinarySource> pair(ElementId a, ElementId b) override {
    if (a == b) return std::make_unique<PlainBinarySource>(1.0, *rng_, sim_counter_);
    return known_pair_source(masses_[static_cast<std::size_t>(a - 1)],
                             masses_[static_cast<std::size_t>(b - 1)], *rng_, sim_counter_);
  }

 private:
  std::vector<double> masses_;
  std::vector<double> prefix_;
  Rng* rng_;
  long long* sim_counter_;
};

class OracleGroupAccess : public CondAccess {
 public:
  OracleGroupAccess(CondOracle& oracle, const RankedView& view,
                    const std::vector<GroupingH::Group>& groups)
      : oracle_(&oracle), view_(&view), groups_(&groups) {
    // Eligible groups cover consecutive ranks, so the union is one range.
    union_.view = view_;
    union_.ranges.emplace_back(groups.front().lo, groups.back().hi);
    los_.reserve(groups.size());
    for (const auto& g : groups) los_.push_back(g.lo);
  }
  std::int64_t domain() const override { return static_cast<std::int64_t>(groups_->size()); }
  ElementId draw() override {
    ElementId id = oracle_->conditional_sample(union_);
    std::int64_t pos = view_->pos_of(id);
    auto it = std::upper_bound(los_.begin(), los_.end(), pos);
    return static_cast<ElementId>(std::distance(los_.begin(), it));
  }
  std::unique_ptr<BinarySource> pair(ElementId a, ElementId b) override {
    QuerySet set, success;
    set.view = success.view = view_;
    const auto& ga = (*groups_)[static_cast<std::size_t>(a - 1)];
    set.ranges.emplace_back(ga.lo, ga.hi);
    success.ranges.emplace_back(ga.lo, ga.hi);
    if (b != a) {
      const auto& gb = (*groups_)[static_cast<std::size_t>(b - 1)];
      set.ranges.emplace_back(gb.lo, gb.hi);
    }
    return oracle_->binary_source(set, success);
  }

 private:
  CondOracle* oracle_;
  const RankedView* view_;
  const std::vector<GroupingH::Group>* groups_;
  QuerySet union_;
  std::vector<std::int64_t> los_;
};

class AccessDomainSampler : public DomainSampler {
 public:
  explicit AccessDomainSampler(CondAccess& a) : a_(&a) {}
  ElementId draw() override { return a_->draw(); }

 private:
  CondAccess* a_;
};

}  // namespace

Verdict near_uniform_identity_test(double eps, double delta, CondAccess& p_access,
                                   CondAccess& q_access, ElementId y,
                                   const IdentityConfig& cfg, Rng& rng) {
  if (y < 1 || y > p_access.domain()) throw std::invalid_argument("y outside domain");
  AccessDomainSampler q_sampler(q_access);
  std::vector<CandidateTuple> tuples = find_element(q_sampler, eps, cfg.log2_legs);

  Verdict out;
  out.samples += static_cast<long long>(tuples.size());
  int j = 0;
  for (const CandidateTuple& t : tuples) {
    ++j;
    double chi = t.beta * t.beta / 144.0;
    double dj = 6.0 * delta / (std::numbers::pi * std::numbers::pi * j * j);
    if (cfg.observer) cfg.observer(SubTestRecord{'e', j, j, chi, dj});
    EqualityParams params = EqualityParams::make(chi, dj, cfg.c_te);
    auto ps = p_access.pair(t.element, y);
    auto qs = q_access.pair(t.element, y);
    Verdict v = test_equal(*ps, *qs, params, rng);
    out.samples += v.samples;
    if (v.diff()) out.outcome = Outcome::Diff;
  }
  return out;
}

Verdict identity_test(const Distribution& p, CondOracle& q_oracle, double eps, double delta,
                      const IdentityConfig& cfg, Rng& rng) {
  if (!(eps > 0.0) || eps > 2.0) throw std::invalid_argument("eps must be in (0, 2]");
  if (!(delta > 0.0) || delta >= 1.0) throw std::invalid_argument("delta must be in (0, 1)");
  if (p.size() != q_oracle.domain_size()) throw std::invalid_argument("domain size mismatch");

  const HeavinessOrder order(p);
  const RankedView view = q_oracle.make_view(order.order());
  const std::int64_t k = order.size();
  long long sim = 0;
  long long q_before = q_oracle.queries();

  KnownDomainSampler p_sampler(p, rng, &sim);
  std::vector<CandidateTuple> tuples = find_element(p_sampler, eps, cfg.log2_legs);
  const double delta_sub = eps * delta / 48.0;

  Outcome outcome = Outcome::Same;
  int j = 0;
  for (const CandidateTuple& t : tuples) {
    ++j;
    if (order.suffix_mass(order.rank_of(t.element)) <= 0.0) continue;
    GroupingH grouping = build_grouping(p, order, t.element);
    const auto& groups = grouping.groups;

    // (c) pair test against a group drawn from the known induced distribution
    {
      double total = 0.0;
      for (const auto& g : groups) total += g.p_mass;
      double u = rng.uniform() * total;
      ++sim;
      std::size_t y_idx = groups.size() - 1;
      for (std::size_t i = 0; i < groups.size(); ++i) {
        if (u < groups[i].p_mass) {
          y_idx = i;
          break;
        }
        u -= groups[i].p_mass;
      }
      const auto& gy = groups[y_idx];
      bool x_inside = grouping.x_rank >= gy.lo && grouping.x_rank < gy.hi;
      double px = p.mass(t.element);
      double set_mass = gy.p_mass + (x_inside ? 0.0 : px);

      QuerySet set, success;
      set.view = &view;
      set.ranges.emplace_back(gy.lo, gy.hi);
      if (!x_inside) set.ids.push_back(t.element);
      success.ids.push_back(t.element);

      double chi = t.beta * t.beta / 1800.0;
      if (cfg.observer) cfg.observer(SubTestRecord{'c', j, 0, chi, delta_sub});
      EqualityParams params = EqualityParams::make(chi, delta_sub, cfg.c_te);
      PlainBinarySource ps(set_mass > 0.0 ? px / set_mass : 0.5, rng, &sim);
      auto qs = q_oracle.binary_source(set, success);
      if (test_equal(ps, *qs, params, rng).diff()) outcome = Outcome::Diff;
    }

    // (d) induced test over {G_x, complement}; vacuous when the complement
    // is empty (both induced distributions are the same point mass)
    if (grouping.x_rank > 0) {
      double chi = (t.alpha * t.beta / 5.0) * (t.alpha * t.beta / 5.0);
      if (cfg.observer) cfg.observer(SubTestRecord{'d', j, 0, chi, delta_sub});
      EqualityParams params = EqualityParams::make(chi, delta_sub, cfg.c_te);
      QuerySet full = QuerySet::full_domain(view);
      QuerySet tail;
      tail.view = &view;
      tail.ranges.emplace_back(grouping.x_rank, k);
      PlainBinarySource ps(order.suffix_mass(grouping.x_rank), rng, &sim);
      auto qs = q_oracle.binary_source(full, tail);
      if (test_equal(ps, *qs, params, rng).diff()) outcome = Outcome::Diff;
    }

    // (e) near-uniform test over the induced group distributions
    {
      std::vector<GroupingH::Group> eligible;
      for (const auto& g : groups)
        if (!g.undersized) eligible.push_back(g);
      if (eligible.size() >= 2) {
        std::vector<double> masses;
        masses.reserve(eligible.size());
        std::size_t y_idx = 0;
        for (std::size_t i = 0; i < eligible.size(); ++i) {
          masses.push_back(eligible[i].p_mass);
          if (eligible[i].p_mass > masses[y_idx]) y_idx = i;
        }
        KnownGroupAccess p_groups(std::move(masses), rng, &sim);
        OracleGroupAccess q_groups(q_oracle, view, eligible);
        Verdict v = near_uniform_identity_test(t.beta / 5.0, delta_sub, p_groups, q_groups,
                                               static_cast<ElementId>(y_idx + 1), cfg, rng);
        if (v.diff()) outcome = Outcome::Diff;
      }
    }
  }

  Verdict out;
  out.outcome = outcome;
  out.samples = (q_oracle.queries() - q_before) + (cfg.charge_known ? sim : 0);
  return out;
}

}  // namespace condtest
