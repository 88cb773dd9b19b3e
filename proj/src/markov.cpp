#include "kcc/markov.hpp"

#include <cmath>
#include <string>

#include "kcc/errors.hpp"

namespace kcc {

namespace {

void check_stochastic(std::span<const double> row, const std::string& what) {
  double total = 0.0;
  for (double v : row) {
    if (!(v >= 0.0)) throw ValidationError(what + ": entries must be nonnegative");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ValidationError(what + ": rows must sum to 1 (got " + std::to_string(total) + ")");
  }
}

}  // namespace

void MarkovChainSpec::validate() const {
  if (p < 1) throw ValidationError("markov chain needs p >= 1");
  if (K < 2) throw ValidationError("markov chain needs K >= 2");
  if (static_cast<int>(init.size()) != K) throw ValidationError("init must have length K");
  check_stochastic(init, "init");
  if (static_cast<int>(transitions.size()) != p - 1) {
    throw ValidationError("expected p-1 transition matrices, got " +
                          std::to_string(transitions.size()));
  }
  for (const auto& t : transitions) {
    if (static_cast<int>(t.size()) != K * K) {
      throw ValidationError("transition matrices must be K x K");
    }
    for (int r = 0; r < K; ++r) {
      check_stochastic(std::span<const double>(t.data() + r * K, static_cast<std::size_t>(K)),
                       "transition row");
    }
  }
}

TabularDistribution tabular_from_markov(const MarkovChainSpec& spec) {
  spec.validate();
  StateCodec codec(std::vector<int>(static_cast<std::size_t>(spec.p), spec.K));
  std::vector<double> probs(codec.num_states());
  std::vector<int> x(static_cast<std::size_t>(spec.p));
  for (std::size_t s = 0; s < probs.size(); ++s) {
    codec.decode(s, x);
    double mass = spec.init[static_cast<std::size_t>(x[0])];
    for (int j = 1; j < spec.p && mass > 0.0; ++j) {
      mass *= spec.transitions[static_cast<std::size_t>(j - 1)]
                              [static_cast<std::size_t>(x[j - 1] * spec.K + x[j])];
    }
    probs[s] = mass;
  }
  return TabularDistribution(std::move(codec), std::move(probs));
}

}  // namespace kcc
