#include "kcc/tabular.hpp"

#include <cmath>
#include <string>

#include "kcc/errors.hpp"

namespace kcc {

StateCodec::StateCodec(std::vector<int> cardinalities) : cards_(std::move(cardinalities)) {
  if (cards_.empty()) throw ValidationError("state codec needs at least one variable");
  for (int k : cards_) {
    if (k < 2) throw ValidationError("every variable needs at least 2 states");
  }
  places_.assign(cards_.size(), 1);
  std::size_t n = 1;
  for (std::size_t j = cards_.size(); j-- > 0;) {
    places_[j] = n;
    const std::size_t k = static_cast<std::size_t>(cards_[j]);
    if (n > kEnumerationCap / k) {
      throw SizeError("state space exceeds the enumeration cap of 2^24 entries");
    }
    n *= k;
  }
  num_states_ = n;
}

std::size_t StateCodec::encode(std::span<const int> x) const {
  if (x.size() != cards_.size()) throw ValidationError("state length does not match codec");
  std::size_t idx = 0;
  for (std::size_t j = 0; j < cards_.size(); ++j) {
    if (x[j] < 0 || x[j] >= cards_[j]) {
      throw ValidationError("state digit out of range at variable " + std::to_string(j + 1));
    }
    idx = idx * static_cast<std::size_t>(cards_[j]) + static_cast<std::size_t>(x[j]);
  }
  return idx;
}

void StateCodec::decode(std::size_t state, std::span<int> x) const {
  for (std::size_t j = cards_.size(); j-- > 0;) {
    const std::size_t k = static_cast<std::size_t>(cards_[j]);
    x[j] = static_cast<int>(state % k);
    state /= k;
  }
}

std::vector<int> StateCodec::decode(std::size_t state) const {
  std::vector<int> x(cards_.size());
  decode(state, x);
  return x;
}

TabularDistribution::TabularDistribution(std::vector<int> cardinalities, std::vector<double> probs)
    : codec_(std::move(cardinalities)), probs_(std::move(probs)) {
  validate();
}

TabularDistribution::TabularDistribution(StateCodec codec, std::vector<double> probs)
    : codec_(std::move(codec)), probs_(std::move(probs)) {
  validate();
}

void TabularDistribution::validate() const {
  if (probs_.size() != codec_.num_states()) {
    throw ValidationError("probability table has " + std::to_string(probs_.size()) +
                          " entries, expected " + std::to_string(codec_.num_states()));
  }
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw ValidationError("probabilities must be nonnegative and finite");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ValidationError("probabilities sum to " + std::to_string(total) + ", expected 1");
  }
}

std::size_t TabularDistribution::support_size() const {
  std::size_t n = 0;
  for (double p : probs_) n += (p > 0.0) ? 1 : 0;
  return n;
}

std::vector<double> conditional_law(const TabularDistribution& dist, int j, std::size_t state) {
  const StateCodec& codec = dist.codec();
  if (j < 0 || j >= codec.num_vars()) throw ValidationError("variable index out of range");
  const int k = codec.cardinality(j);
  std::vector<double> law(static_cast<std::size_t>(k));
  const std::size_t base = codec.with_digit(state, j, 0);
  double total = 0.0;
  for (int v = 0; v < k; ++v) {
    law[static_cast<std::size_t>(v)] = dist.prob(base + static_cast<std::size_t>(v) * codec.place(j));
    total += law[static_cast<std::size_t>(v)];
  }
  if (total <= 0.0) {
    throw SupportError("conditioning event has zero mass");
  }
  for (double& p : law) p /= total;
  return law;
}

std::vector<double> conditional_law(const TabularDistribution& dist, int j,
                                    std::span<const int> x) {
  return conditional_law(dist, j, dist.codec().encode(x));
}

TabularDistribution mix(const TabularDistribution& controls, const TabularDistribution& cases,
                        double rho) {
  if (!(controls.codec() == cases.codec())) {
    throw ValidationError("mix: cardinalities of the two tables do not match");
  }
  if (!(rho >= 0.0 && rho <= 1.0)) throw ValidationError("mix: rho must lie in [0, 1]");
  std::vector<double> probs(controls.num_states());
  for (std::size_t s = 0; s < probs.size(); ++s) {
    probs[s] = rho * cases.prob(s) + (1.0 - rho) * controls.prob(s);
  }
  return TabularDistribution(controls.codec(), std::move(probs));
}

double tv_distance(const TabularDistribution& a, const TabularDistribution& b) {
  if (!(a.codec() == b.codec())) throw ValidationError("tv_distance: cardinalities do not match");
  double d = 0.0;
  for (std::size_t s = 0; s < a.num_states(); ++s) {
    d += std::abs(a.prob(s) - b.prob(s));
  }
  return 0.5 * d;
}

}  // namespace kcc
