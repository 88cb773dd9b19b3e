#ifndef KCC_SCIP_HPP
#define KCC_SCIP_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "kcc/rng.hpp"
#include "kcc/tabular.hpp"

namespace kcc {

// Row-stochastic table P(xt | x) on a common codec; rows at states outside
// the reference support are all-zero and flagged invalid.
struct ConditionalKernel {
  StateCodec codec;
  std::vector<double> probs;           // probs[x * N + xt]
  std::vector<std::uint8_t> row_valid;

  std::size_t num_states() const { return codec.num_states(); }
  std::span<const double> row(std::size_t x) const {
    return {probs.data() + x * num_states(), num_states()};
  }
  double at(std::size_t x, std::size_t xt) const { return probs[x * num_states() + xt]; }
};

enum class KernelMode { Exact, SamplingOnly };

// Sequential conditional independent pairs sampler: at step t (following
// `order`) the knockoff coordinate Xt_{j_t} is drawn from the law of X_{j_t}
// given (X_{-j_t}, Xt_{j_1..j_{t-1}}) under the joint built so far. The
// induced (X, Xt) joint is pairwise swap-invariant w.r.t. the reference for
// every coordinate, which the verifier module checks exhaustively.
//
// Exact mode materializes the full kernel (needed by the verifier and
// capped at 2^24 pair-table entries); sampling-only mode streams each draw
// with an N-sized workspace and never forms the pair table.
class TabularKnockoffSampler {
 public:
  const TabularDistribution& reference() const { return reference_; }
  std::span<const int> order() const { return order_; }
  bool has_exact_kernel() const { return !kernel_.probs.empty(); }

  // SizeError in sampling-only mode.
  const ConditionalKernel& exact_kernel() const;

  // Kernel density P(xt | x); computed from the materialized kernel when
  // present, otherwise by streaming the sequential conditionals.
  double kernel_density(std::size_t x, std::size_t xt) const;

  // One knockoff draw for a state in the reference support.
  std::size_t sample(std::size_t x, Rng& rng) const;

  friend TabularKnockoffSampler scip_build(TabularDistribution reference,
                                           std::vector<int> order, KernelMode mode);

 private:
  TabularKnockoffSampler(TabularDistribution reference, std::vector<int> order);

  std::size_t stream_draw(std::size_t x, Rng* rng, std::size_t forced_xt, double* density) const;

  TabularDistribution reference_;
  std::vector<int> order_;
  ConditionalKernel kernel_;  // empty in sampling-only mode
};

// Builds the sampler for `reference`; `order` defaults to 1..p (the
// construction is valid for any order). Exact mode throws SizeError when the
// pair table would exceed the cap, pointing at sampling-only mode.
TabularKnockoffSampler scip_build(TabularDistribution reference, std::vector<int> order = {},
                                  KernelMode mode = KernelMode::Exact);

// One draw with an explicit seed.
std::size_t scip_sample(const TabularKnockoffSampler& sampler, std::size_t x, std::uint64_t seed);

// Marginal law of the knockoff under reference x exact kernel; equals the
// reference law when exchangeability holds.
TabularDistribution knockoff_marginal(const TabularKnockoffSampler& sampler);

}  // namespace kcc

#endif
