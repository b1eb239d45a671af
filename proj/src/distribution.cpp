#include "condtest/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace condtest {

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("distribution needs k >= 1");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw std::invalid_argument("negative probability");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > kSumTolerance)
    throw std::invalid_argument("probabilities sum to " + std::to_string(sum));
}

double Distribution::set_mass(std::span<const ElementId> ids) const {
  double s = 0.0;
  for (ElementId id : ids) s += mass(id);
  return s;
}

std::string Distribution::to_json() const {
  nlohmann::json j = probs_;
  return j.dump();
}

Distribution Distribution::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  return Distribution(j.get<std::vector<double>>());
}

void Partition::validate(std::int64_t k) const {
  std::unordered_set<ElementId> seen;
  for (const auto& g : groups) {
    for (ElementId id : g) {
      if (id < 1 || id > k) throw std::invalid_argument("element id out of range");
      if (!seen.insert(id).second) throw std::invalid_argument("groups not disjoint");
    }
  }
}

std::vector<ElementId> Partition::base() const {
  std::vector<ElementId> all;
  for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
  std::sort(all.begin(), all.end());
  return all;
}

Distribution induced_distribution(const Distribution& dist, const Partition& partition) {
  partition.validate(dist.size());
  std::vector<double> masses;
  masses.reserve(partition.groups.size());
  double total = 0.0;
  for (const auto& g : partition.groups) {
    double m = dist.set_mass(g);
    masses.push_back(m);
    total += m;
  }
  if (total <= 0.0) throw std::invalid_argument("empty support");
  for (double& m : masses) m /= total;
  return Distribution(std::move(masses));
}

}  // namespace condtest
