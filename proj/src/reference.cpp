#include "condtest/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace condtest {
namespace reference {

double l1_distance(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) throw std::invalid_argument("domain size mismatch");
  double s = 0.0;
  for (std::int64_t i = 0; i < p.size(); ++i)
    s += std::fabs(p.probs()[static_cast<std::size_t>(i)] - q.probs()[static_cast<std::size_t>(i)]);
  return s;
}

double chi2_binary(double p, double q) {
  if (p < 0.0 || p > 1.0 || q < 0.0 || q > 1.0)
    throw std::invalid_argument("probabilities must lie in [0, 1]");
  double num = (p - q) * (p - q);
  double den = (p + q) * (2.0 - p - q);
  if (num == 0.0) return 0.0;
  return num / den;
}

ChilowResult chilow_bound(double p_i, double q_i, double p_j, double q_j) {
  ChilowResult r;
  const double si = p_i + q_i, sj = p_j + q_j;
  if (si <= 0.0 || sj <= 0.0) throw std::invalid_argument("pair masses must be positive");
  r.premise = std::fabs((p_i - q_i) / si - (p_j - q_j) / sj);
  const double pij = p_i / (p_i + p_j);
  const double qij = q_i / (q_i + q_j);
  r.lhs = chi2_binary(pij, qij);
  r.bound = r.premise * r.premise * si * sj / (4.0 * (si + sj) * (si + sj));
  return r;
}

PoissonMoments poisson_stat_moments(double lam1, double lam2, std::int64_t trials, Rng& rng) {
  if (lam1 < 0.0 || lam2 < 0.0) throw std::invalid_argument("means must be nonnegative");
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  PoissonSampler s1(lam1), s2(lam2);
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    std::int64_t mu = s1(rng), mup = s2(rng);
    double d = static_cast<double>(mu - mup);
    double num = d * d - static_cast<double>(mu + mup);
    double v = num == 0.0 ? 0.0 : num / static_cast<double>(mu + mup - 1);
    sum += v;
    sumsq += v * v;
  }
  PoissonMoments m;
  m.mc_mean = sum / static_cast<double>(trials);
  m.mc_var = sumsq / static_cast<double>(trials) - m.mc_mean * m.mc_mean;
  const double lt = lam1 + lam2;
  m.mean_formula = lt > 0.0 ? (lam1 - lam2) * (lam1 - lam2) / lt * (1.0 - std::exp(-lt)) : 0.0;
  m.mean_stderr = std::sqrt(std::max(m.mc_var, 0.0) / static_cast<double>(trials));
  m.var_bound_base = lt > 0.0 ? 4.0 * (lam1 - lam2) * (lam1 - lam2) / lt : 0.0;
  return m;
}

std::vector<ElementId> sum_order(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) throw std::invalid_argument("domain size mismatch");
  std::vector<ElementId> order(static_cast<std::size_t>(p.size()));
  std::iota(order.begin(), order.end(), ElementId{1});
  std::stable_sort(order.begin(), order.end(), [&](ElementId a, ElementId b) {
    double sa = p.mass(a) + q.mass(a), sb = p.mass(b) + q.mass(b);
    if (sa != sb) return sa > sb;
    return a < b;
  });
  return order;
}

namespace {

// dev(i) - dev(G_i) magnitude for the element at `rank` given suffix sums.
double deviation_gap(double pi, double qi, double ps, double qs) {
  double di = (pi + qi) > 0.0 ? (pi - qi) / (pi + qi) : 0.0;
  double dg = (ps + qs) > 0.0 ? (ps - qs) / (ps + qs) : 0.0;
  return std::fabs(di - dg);
}

}  // namespace

ExpApprox exp_approx_check(const Distribution& p, const Distribution& q) {
  std::vector<ElementId> order = sum_order(p, q);
  const std::size_t k = order.size();
  std::vector<double> psuf(k + 1, 0.0), qsuf(k + 1, 0.0);
  for (std::size_t r = k; r-- > 0;) {
    psuf[r] = psuf[r + 1] + p.mass(order[r]);
    qsuf[r] = qsuf[r + 1] + q.mass(order[r]);
  }
  ExpApprox out;
  out.l1 = l1_distance(p, q);
  for (std::size_t r = 0; r < k; ++r) {
    double pi = p.mass(order[r]), qi = q.mass(order[r]);
    out.sum += 0.5 * (pi + qi) * deviation_gap(pi, qi, psuf[r], qsuf[r]);
  }
  return out;
}

Clairvoyance clairvoyant(const Distribution& p, const Distribution& q, ElementId i) {
  std::vector<ElementId> order = sum_order(p, q);
  const std::size_t k = order.size();
  std::size_t rank = k;
  for (std::size_t r = 0; r < k; ++r)
    if (order[r] == i) {
      rank = r;
      break;
    }
  if (rank == k) throw std::invalid_argument("element not in domain");
  double ps = 0.0, qs = 0.0;
  for (std::size_t r = rank; r < k; ++r) {
    ps += p.mass(order[r]);
    qs += q.mass(order[r]);
  }
  Clairvoyance c;
  double ri = 0.5 * (p.mass(i) + q.mass(i));
  c.tail_mass = 0.5 * (ps + qs);
  c.ratio = c.tail_mass > 0.0 ? ri / c.tail_mass : 0.0;
  c.approximability = deviation_gap(p.mass(i), q.mass(i), ps, qs);
  return c;
}

}  // namespace reference
}  // namespace condtest
