#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace condtest {

using ElementId = std::int64_t;  // dense ids 1..k

// Exact finite discrete distribution over {1..k}.
// Entries are nonnegative and sum to 1 within 1e-9.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs);

  std::int64_t size() const { return static_cast<std::int64_t>(probs_.size()); }
  double mass(ElementId id) const { return probs_[static_cast<std::size_t>(id - 1)]; }
  double set_mass(std::span<const ElementId> ids) const;
  const std::vector<double>& probs() const { return probs_; }

  std::string to_json() const;
  static Distribution from_json(const std::string& text);

  static constexpr double kSumTolerance = 1e-9;

 private:
  std::vector<double> probs_;
};

// Disjoint groups of element ids covering a base set S.
struct Partition {
  std::vector<std::vector<ElementId>> groups;

  // Throws std::invalid_argument if groups overlap or an id repeats.
  void validate(std::int64_t k) const;
  std::vector<ElementId> base() const;
};

// Distribution over group indices, each group weighted by its mass.
// Throws std::invalid_argument("empty support") when the base set has no mass.
Distribution induced_distribution(const Distribution& dist, const Partition& partition);

}  // namespace condtest
