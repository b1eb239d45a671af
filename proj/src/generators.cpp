#include "condtest/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace condtest {

namespace {

std::vector<double> uniform_probs(std::int64_t k) {
  return std::vector<double>(static_cast<std::size_t>(k), 1.0 / static_cast<double>(k));
}

std::vector<double> zipf_probs(std::int64_t k, double s) {
  std::vector<double> v(static_cast<std::size_t>(k));
  double sum = 0.0;
  for (std::int64_t i = 1; i <= k; ++i) {
    double w = 1.0 / std::pow(static_cast<double>(i), s);
    v[static_cast<std::size_t>(i - 1)] = w;
    sum += w;
  }
  for (double& w : v) w /= sum;
  return v;
}

std::vector<double> dirichlet_probs(std::int64_t k, double alpha, Rng& rng) {
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> v(static_cast<std::size_t>(k));
  double sum = 0.0;
  for (double& w : v) {
    w = gamma(rng.engine());
    sum += w;
  }
  if (sum <= 0.0) return uniform_probs(k);
  for (double& w : v) w /= sum;
  return v;
}

}  // namespace

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
  GeneratorSpec spec;
  auto open = text.find('(');
  if (open == std::string::npos) {
    spec.name = text;
    return spec;
  }
  if (text.back() != ')') throw std::invalid_argument("bad generator spec: " + text);
  spec.name = text.substr(0, open);
  std::string args = text.substr(open + 1, text.size() - open - 2);
  if (spec.name == "swap-pair") {
    auto comma = args.rfind(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("swap-pair needs (base, eps): " + text);
    spec.base = args.substr(0, comma);
    spec.params.push_back(std::stod(args.substr(comma + 1)));
    return spec;
  }
  std::size_t start = 0;
  while (start < args.size()) {
    auto comma = args.find(',', start);
    auto end = comma == std::string::npos ? args.size() : comma;
    spec.params.push_back(std::stod(args.substr(start, end - start)));
    start = end + 1;
  }
  return spec;
}

std::string GeneratorSpec::to_string() const {
  if (!base && params.empty()) return name;
  std::string out = name + "(";
  if (base) out += *base + ",";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ",";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", params[i]);
    out += buf;
  }
  return out + ")";
}

GeneratedPair GeneratorSpec::make(std::int64_t k, std::uint64_t seed) const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (name == "uniform") {
    Distribution u(uniform_probs(k));
    return {u, u, PairRelation::Equal};
  }
  if (name == "zipf") {
    double s = params.empty() ? 1.0 : params[0];
    Distribution z(zipf_probs(k, s));
    return {z, z, PairRelation::Equal};
  }
  if (name == "dirichlet") {
    double a = params.empty() ? 1.0 : params[0];
    Rng rng(Rng::derive(seed, 0xd1a1));
    Distribution d(dirichlet_probs(k, a, rng));
    return {d, d, PairRelation::Equal};
  }
  if (name == "two-bump") {
    if (params.empty()) throw std::invalid_argument("two-bump needs eps");
    double eps = params[0];
    if (k % 2 != 0) throw std::invalid_argument("two-bump needs even k");
    std::vector<double> q(static_cast<std::size_t>(k));
    for (std::int64_t i = 0; i < k; ++i)
      q[static_cast<std::size_t>(i)] =
          (i < k / 2 ? 1.0 + eps : 1.0 - eps) / static_cast<double>(k);
    return {Distribution(uniform_probs(k)), Distribution(std::move(q)), PairRelation::Far, eps};
  }
  if (name == "spike") {
    if (params.empty()) throw std::invalid_argument("spike needs eps");
    double eps = params[0];
    if (k < 3) throw std::invalid_argument("spike needs k >= 3");
    double rest = (1.0 - eps / 2.0) / static_cast<double>(k - 2);
    std::vector<double> p(static_cast<std::size_t>(k), rest);
    std::vector<double> q(static_cast<std::size_t>(k), rest);
    p[0] = eps / 2.0;
    p[1] = 0.0;
    q[0] = 0.0;
    q[1] = eps / 2.0;
    return {Distribution(std::move(p)), Distribution(std::move(q)), PairRelation::Far, eps};
  }
  if (name == "swap-pair") {
    if (!base || params.empty()) throw std::invalid_argument("swap-pair needs (base, eps)");
    double eps = params[0];
    GeneratedPair inner = GeneratorSpec::parse(*base).make(k, seed);
    std::vector<double> p = inner.p.probs();
    auto hi = std::distance(p.begin(), std::max_element(p.begin(), p.end()));
    auto lo = std::distance(p.begin(), std::min_element(p.begin(), p.end()));
    if (hi == lo || p[static_cast<std::size_t>(hi)] < eps / 2.0)
      throw std::invalid_argument("swap-pair base cannot move eps/2 mass");
    std::vector<double> q = p;
    q[static_cast<std::size_t>(hi)] -= eps / 2.0;
    q[static_cast<std::size_t>(lo)] += eps / 2.0;
    return {Distribution(std::move(p)), Distribution(std::move(q)), PairRelation::Far, eps};
  }
  throw std::invalid_argument("unknown generator: " + name);
}

}  // namespace condtest
