#include "condtest/closeness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace condtest {

namespace {

double safe_log(double x) { return std::log(std::max(x, std::numbers::e)); }

std::int64_t count_of(double mult, double base) {
  double v = std::ceil(mult * base);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(v));
}

}  // namespace

ClosenessParams ClosenessParams::make(std::int64_t k, double eps, double delta,
                                      const ClosenessMultipliers& mult) {
  if (k < 4) throw std::invalid_argument("closeness needs k >= 4");
  if (!(eps > 0.0) || eps > 2.0) throw std::invalid_argument("eps must be in (0, 2]");
  if (!(delta > 0.0) || delta >= 1.0) throw std::invalid_argument("delta must be in (0, 1)");
  ClosenessParams p;
  p.k = k;
  p.eps = eps;
  p.delta = delta;
  p.mult = mult;
  p.loglogk = std::log(std::log(static_cast<double>(k)));
  p.rounds = static_cast<int>(std::ceil(std::log2(std::log2(static_cast<double>(k)))));
  p.gamma = std::max(8.0, mult.gamma * 1000.0 * safe_log(p.loglogk / (delta * eps)));
  p.n2 = count_of(mult.n2, std::log(std::max(1.0, std::log(std::max(1.0, p.loglogk)))) +
                               std::log(1.0 / (eps * delta)));
  p.n3 = count_of(mult.n3, p.gamma * p.gamma * safe_log(p.loglogk / delta));
  return p;
}

ClosenessParams::TupleParams ClosenessParams::tuple_params(const CandidateTuple& t) const {
  TupleParams tp;
  tp.beta = t.beta;
  tp.alpha = t.alpha;
  const double ab = t.alpha * t.beta;
  const double ab2 = t.alpha * t.beta * t.beta;

  tp.m = count_of(mult.m, 4096.0 * gamma / ab2);
  tp.n4 = count_of(mult.n4, gamma / ab);
  tp.beta_dd = std::min(2.0, mult.beta_dd * ab / (128.0 * gamma * safe_log(128.0 * gamma / (t.beta * t.beta))));
  tp.chi_pair = std::clamp(tp.beta_dd * tp.beta_dd / 25.0, 1e-300, 2.0);
  const double lg = safe_log(128.0 * gamma / ab2);
  tp.chi_induced = std::clamp(
      mult.chi_induced * ab * ab * ab / (8388608.0 * gamma * gamma * lg * lg * lg), 1e-300, 2.0);
  tp.delta_te = eps * delta /
                (32.0 * static_cast<double>(tp.m) * static_cast<double>(tp.n4 + 1) * loglogk);
  tp.delta_prune_bs = delta / (40.0 * loglogk);
  tp.delta_prune_act = delta / (40.0 * static_cast<double>(tp.m) * loglogk);

  auto n1_formula = [&](double dp) {
    double a = std::log(std::max(2.0, gamma / (2.0 * dp * ab)));
    double b = gamma / (2.0 * ab) * std::log(std::max(2.0, gamma / (2.0 * ab)));
    double c = 2.0 * std::log(1.0 / dp) * std::log(std::max(2.0, std::log(1.0 / dp)));
    return 4.0 * a * (b + c);
  };
  tp.n1_bs = count_of(mult.n1, n1_formula(tp.delta_prune_bs));
  tp.n1_act = count_of(mult.n1, n1_formula(tp.delta_prune_act));
  return tp;
}

CandidateSet make_candidate_set(std::int64_t k, ElementId i, double rate, Rng& rng) {
  CandidateSet s;
  if (rate <= 0.0) return s;
  if (rate >= 1.0) {
    s.members.reserve(static_cast<std::size_t>(k - 1));
    for (ElementId id = 1; id <= k; ++id)
      if (id != i) s.members.push_back(id);
    return s;
  }
  // Geometric skips over the k-1 eligible slots.
  std::int64_t slot = rng.geometric(rate);
  while (slot < k - 1) {
    ElementId id = slot + 1 < i ? slot + 1 : slot + 2;
    s.members.push_back(id);
    slot += 1 + rng.geometric(rate);
  }
  return s;
}

CandidateSet prune_set(CandidateSet set, ElementId i, const ClosenessParams& params,
                       std::int64_t n1, MixtureOracle& oracle, Rng& rng) {
  set.pruned = true;
  if (set.members.empty()) return set;
  MixtureSetSampler sampler(oracle.left(), oracle.right(), rng, set.members);
  const std::int64_t threshold = (3 * params.n2 + 3) / 4;  // ceil(3 n2 / 4)
  for (std::int64_t it = 0; it < n1 && !sampler.empty(); ++it) {
    ElementId j = sampler.sample();
    auto src = oracle.binary_source(QuerySet::of_ids({j, i}), QuerySet::of_ids({j}));
    if (src->count(params.n2) >= threshold) sampler.remove(j);
  }
  set.members = sampler.ids();
  return set;
}

Verdict assisted_closeness_test(double r_guess, const CandidateTuple& tuple,
                                const ClosenessParams& params, CondOracle& p_oracle,
                                CondOracle& q_oracle, MixtureOracle& mixture, Rng& rng) {
  const ClosenessParams::TupleParams tp = params.tuple_params(tuple);
  const ElementId i = tuple.element;
  Outcome outcome = Outcome::Same;
  Verdict out;

  const EqualityParams pair_params =
      EqualityParams::make(tp.chi_pair, tp.delta_te, params.mult.c_te);
  const EqualityParams induced_params =
      EqualityParams::make(tp.chi_induced, tp.delta_te, params.mult.c_te);

  for (std::int64_t l = 0; l < tp.m; ++l) {
    CandidateSet set = make_candidate_set(params.k, i, r_guess, rng);
    set = prune_set(std::move(set), i, params, tp.n1_act, mixture, rng);
    if (set.members.empty()) continue;

    // (a) pair tests against every distinct element seen in n4 draws
    std::vector<ElementId> with_i = set.members;
    with_i.push_back(i);
    MixtureSetSampler sampler(mixture.left(), mixture.right(), rng, std::move(with_i));
    std::set<ElementId> seen;
    for (std::int64_t t = 0; t < tp.n4; ++t) {
      ElementId j = sampler.sample();
      if (j != i) seen.insert(j);
    }
    for (ElementId j : seen) {
      auto ps = p_oracle.binary_source(QuerySet::of_ids({i, j}), QuerySet::of_ids({i}));
      auto qs = q_oracle.binary_source(QuerySet::of_ids({i, j}), QuerySet::of_ids({i}));
      Verdict v = test_equal(*ps, *qs, pair_params, rng);
      out.samples += v.samples;
      if (v.diff()) outcome = Outcome::Diff;
    }

    // (b) induced test over the two-cell partition {{i}, S}
    std::vector<ElementId> union_ids = set.members;
    union_ids.push_back(i);
    QuerySet whole = QuerySet::of_ids(std::move(union_ids));
    QuerySet head = QuerySet::of_ids({i});
    auto ps = p_oracle.binary_source(whole, head);
    auto qs = q_oracle.binary_source(whole, head);
    Verdict v = test_equal(*ps, *qs, induced_params, rng);
    out.samples += v.samples;
    if (v.diff()) outcome = Outcome::Diff;
  }
  out.outcome = outcome;
  return out;
}

Verdict binary_search(const CandidateTuple& tuple, const ClosenessParams& params,
                      CondOracle& p_oracle, CondOracle& q_oracle, MixtureOracle& mixture,
                      Rng& rng, const SearchObserver& observer) {
  const ClosenessParams::TupleParams tp = params.tuple_params(tuple);
  const ElementId i = tuple.element;
  const double logk = std::log(static_cast<double>(params.k));
  double low = -logk, high = 0.0, log_r_guess = -0.5 * logk;

  Outcome outcome = Outcome::Same;
  Verdict out;
  for (int round = 1; round <= params.rounds; ++round) {
    const double entry = log_r_guess;
    const double r_guess = std::exp(log_r_guess);

    CandidateSet set = make_candidate_set(params.k, i, r_guess, rng);
    set = prune_set(std::move(set), i, params, tp.n1_bs, mixture, rng);

    Verdict v = assisted_closeness_test(r_guess, tuple, params, p_oracle, q_oracle, mixture, rng);
    out.samples += v.samples;
    if (v.diff()) outcome = Outcome::Diff;

    std::vector<ElementId> with_i = set.members;
    with_i.push_back(i);
    auto comparator =
        mixture.binary_source(QuerySet::of_ids(std::move(with_i)), QuerySet::of_ids({i}));
    std::int64_t hits = comparator->count(params.n3);
    out.samples += params.n3;

    bool heavy = static_cast<double>(hits) < 5.0 * static_cast<double>(params.n3) / params.gamma;
    if (observer) observer(round, entry, heavy);
    if (heavy) {
      high = log_r_guess;
      log_r_guess = (log_r_guess + low) / 2.0;
    } else {
      low = log_r_guess;
      log_r_guess = (log_r_guess + high) / 2.0;
    }
  }
  out.outcome = outcome;
  return out;
}

Verdict closeness_test(CondOracle& p_oracle, CondOracle& q_oracle, double eps, double delta,
                       std::int64_t k, const ClosenessConfig& cfg, Rng& rng) {
  if (p_oracle.domain_size() != k || q_oracle.domain_size() != k)
    throw std::invalid_argument("oracles must share domain size k");
  const ClosenessParams params = ClosenessParams::make(k, eps, delta, cfg.mult);
  const long long before = p_oracle.queries() + q_oracle.queries();

  MixtureOracle mixture(p_oracle, q_oracle, rng);
  MixtureDomainSampler r_sampler(mixture);
  std::vector<CandidateTuple> tuples = find_element(r_sampler, eps, cfg.log2_legs);

  Outcome outcome = Outcome::Same;
  for (const CandidateTuple& t : tuples) {
    Verdict v = binary_search(t, params, p_oracle, q_oracle, mixture, rng, cfg.search_observer);
    if (v.diff()) outcome = Outcome::Diff;
  }
  Verdict out;
  out.outcome = outcome;
  out.samples = p_oracle.queries() + q_oracle.queries() - before;
  return out;
}

}  // namespace condtest
