#ifndef KCC_VERIFIER_HPP
#define KCC_VERIFIER_HPP

#include <cstdint>
#include <vector>

#include "kcc/gaussian_lda.hpp"
#include "kcc/population.hpp"
#include "kcc/scip.hpp"
#include "kcc/tabular.hpp"

namespace kcc {

// Null-coordinate swap distances under the target population must fall below
// this for the transfer check to pass; it absorbs float accumulation over
// pair tables up to the enumeration cap.
inline constexpr double kNullSwapTolerance = 1e-8;

// Exact joint law of (x, xt) on a common codec: probs[x * N + xt].
struct PairLaw {
  StateCodec codec;
  std::vector<double> probs;

  std::size_t num_states() const { return codec.num_states(); }
  double at(std::size_t x, std::size_t xt) const { return probs[x * num_states() + xt]; }
  double total_mass() const;
};

// entry(x, xt) = population(x) * kernel(xt | x). SupportError if the
// population puts mass where the kernel has no valid row (the absolute
// continuity proviso).
PairLaw exact_pair_law(const TabularDistribution& population, const ConditionalKernel& kernel);

// TV distance between the pair law and itself with coordinates (x_j, xt_j)
// transposed; zero iff pairwise exchangeability holds at j.
double swap_invariance_distance(const PairLaw& joint, int j);

struct ConditionalMatchReport {
  double max_deviation = 0.0;
  long assignments_checked = 0;
  long skipped = 0;  // zero mass in at least one of the two tables
};

// Max over assignments a of the sup-norm distance between the conditional
// laws of X_j | X_{-j} = a under P and Q.
ConditionalMatchReport null_conditional_match(const TabularDistribution& P,
                                              const TabularDistribution& Q, int j);

struct SwapReport {
  struct PerVariable {
    int j = 0;
    double tv_reference = 0.0;
    double tv_target = 0.0;
    bool is_null = false;
  };
  PopulationSelector reference;
  PopulationSelector target;
  std::vector<PerVariable> variables;
  double max_null_tv_target = 0.0;
  double min_nonnull_tv_target = 0.0;  // zero when there are no non-nulls
  bool theorem_holds_for_nulls = false;
};

// Builds the SCIP sampler on the reference population of `model`, forms the
// exact pair laws under the reference and the target populations, and
// reports per-coordinate swap distances. Passes when every null coordinate
// has target-population distance <= kNullSwapTolerance.
SwapReport verify_theorem(const ProspectiveModel& model, const PopulationSelector& reference,
                          const PopulationSelector& target);

struct MomentSwapReport {
  struct PerVariable {
    int j = 0;
    double max_abs_z = 0.0;  // worst deviation over the moment family, in SEs
    bool is_null = false;
    bool pass = false;
  };
  std::vector<PerVariable> variables;
  double se_limit = 4.0;
  bool all_nulls_pass = false;
  double max_null_z = 0.0;
};

// Monte Carlo surrogate for the continuous case: draws a retrospective
// sample, generates Gaussian knockoffs built for the chosen label
// conditional, and compares first and second moments of the stacked vector
// before and after swapping columns (j, p+j). A coordinate passes when every
// moment deviation is within `se_limit` standard errors.
MomentSwapReport gaussian_moment_swap_check(const GaussianLdaModel& model,
                                            PopulationKind reference_kind, double case_fraction,
                                            int n, std::uint64_t seed, double se_limit = 4.0);

}  // namespace kcc

#endif
