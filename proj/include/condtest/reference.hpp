#pragma once

#include <cstdint>
#include <vector>

#include "condtest/distribution.hpp"
#include "condtest/rng.hpp"

namespace condtest {
namespace reference {

// Total variation style distance: sum_i |p(i) - q(i)|, in [0, 2].
double l1_distance(const Distribution& p, const Distribution& q);

// Chi-squared distance (p-q)^2 / ((p+q)(2-p-q)) between Bernoulli success
// probabilities; 0/0 resolves to 0.
double chi2_binary(double p, double q);

// Exact pair chi-squared versus the closed-form lower bound
//   eps^2 (p_i+q_i)(p_j+q_j) / (4 (p_i+q_i+p_j+q_j)^2)
// where eps is the premise value |(p_i-q_i)/(p_i+q_i) - (p_j-q_j)/(p_j+q_j)|.
// Whenever the premise is positive, lhs >= bound.
struct ChilowResult {
  double lhs = 0.0;      // chi2_binary of the conditional pair
  double bound = 0.0;    // the lemma's bound at eps = premise
  double premise = 0.0;  // the ratio-difference driving the bound
};
ChilowResult chilow_bound(double p_i, double q_i, double p_j, double q_j);

// Monte-Carlo moments of ((mu - mu')^2 - mu - mu') / (mu + mu' - 1) for
// independent Poissons, against the closed forms
//   mean  = (l1-l2)^2/(l1+l2) * (1 - e^{-(l1+l2)})
//   var  <= 4 (l1-l2)^2/(l1+l2) + c^2 for a universal constant c.
struct PoissonMoments {
  double mc_mean = 0.0;
  double mc_var = 0.0;
  double mean_formula = 0.0;
  double mean_stderr = 0.0;     // Monte-Carlo standard error of mc_mean
  double var_bound_base = 0.0;  // 4 (l1-l2)^2/(l1+l2), without the c^2 slack
};
PoissonMoments poisson_stat_moments(double lam1, double lam2, std::int64_t trials, Rng& rng);

// Element order by p(i)+q(i) descending, ties by id ascending. The tail set
// G_i is the suffix of this order starting at i.
std::vector<ElementId> sum_order(const Distribution& p, const Distribution& q);

// Exact value of sum_i r(i) |(p(i)-q(i))/(p(i)+q(i)) - (p(G_i)-q(G_i))/(p(G_i)+q(G_i))|
// with r = (p+q)/2 under sum_order; always >= l1_distance(p, q) / 4.
struct ExpApprox {
  double sum = 0.0;
  double l1 = 0.0;
};
ExpApprox exp_approx_check(const Distribution& p, const Distribution& q);

// Exact per-element quantities for clairvoyant fixtures.
struct Clairvoyance {
  double ratio = 0.0;            // r(i) / r(G_i)
  double tail_mass = 0.0;        // r(G_i): the heaviness level of i under r
  double approximability = 0.0;  // |(p(i)-q(i))/(p(i)+q(i)) - (p(G_i)-q(G_i))/(p(G_i)+q(G_i))|
};
Clairvoyance clairvoyant(const Distribution& p, const Distribution& q, ElementId i);

}  // namespace reference
}  // namespace condtest
