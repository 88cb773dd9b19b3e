#include "kcc/verifier.hpp"

#include <algorithm>
#include <cmath>

#include "kcc/errors.hpp"
#include "kcc/gaussian_knockoffs.hpp"

namespace kcc {

double PairLaw::total_mass() const {
  double total = 0.0;
  for (double v : probs) total += v;
  return total;
}

PairLaw exact_pair_law(const TabularDistribution& population, const ConditionalKernel& kernel) {
  if (!(population.codec() == kernel.codec)) {
    throw ValidationError("population and kernel cardinalities do not match");
  }
  const std::size_t n = population.num_states();
  if (n > kEnumerationCap / n) {
    throw SizeError("pair table would exceed the enumeration cap");
  }
  PairLaw law;
  law.codec = population.codec();
  law.probs.assign(n * n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    const double px = population.prob(x);
    if (px <= 0.0) continue;
    if (!kernel.row_valid[x]) {
      throw SupportError("population puts mass outside the kernel's reference support");
    }
    const double* row = kernel.probs.data() + x * n;
    double* out = law.probs.data() + x * n;
    for (std::size_t xt = 0; xt < n; ++xt) out[xt] = px * row[xt];
  }
  return law;
}

double swap_invariance_distance(const PairLaw& joint, int j) {
  const StateCodec& codec = joint.codec;
  if (j < 0 || j >= codec.num_vars()) throw ValidationError("variable index out of range");
  const std::size_t n = codec.num_states();
  const std::size_t place = codec.place(j);
  const std::size_t k = static_cast<std::size_t>(codec.cardinality(j));

  double dist = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t dx = (x / place) % k;
    const std::size_t x0 = x - dx * place;
    for (std::size_t xt = 0; xt < n; ++xt) {
      const std::size_t dt = (xt / place) % k;
      const std::size_t xs = x0 + dt * place;
      const std::size_t xts = xt - dt * place + dx * place;
      dist += std::abs(joint.probs[x * n + xt] - joint.probs[xs * n + xts]);
    }
  }
  return 0.5 * dist;
}

ConditionalMatchReport null_conditional_match(const TabularDistribution& P,
                                              const TabularDistribution& Q, int j) {
  if (!(P.codec() == Q.codec())) {
    throw ValidationError("tables have different cardinalities");
  }
  const StateCodec& codec = P.codec();
  if (j < 0 || j >= codec.num_vars()) throw ValidationError("variable index out of range");
  const std::size_t n = codec.num_states();
  const std::size_t place = codec.place(j);
  const std::size_t k = static_cast<std::size_t>(codec.cardinality(j));
  const std::size_t block = place * k;

  ConditionalMatchReport report;
  for (std::size_t hi = 0; hi < n / block; ++hi) {
    for (std::size_t lo = 0; lo < place; ++lo) {
      const std::size_t base = hi * block + lo;
      double mass_p = 0.0, mass_q = 0.0;
      for (std::size_t d = 0; d < k; ++d) {
        mass_p += P.prob(base + d * place);
        mass_q += Q.prob(base + d * place);
      }
      if (mass_p <= 0.0 || mass_q <= 0.0) {
        ++report.skipped;
        continue;
      }
      ++report.assignments_checked;
      for (std::size_t d = 0; d < k; ++d) {
        const double cp = P.prob(base + d * place) / mass_p;
        const double cq = Q.prob(base + d * place) / mass_q;
        report.max_deviation = std::max(report.max_deviation, std::abs(cp - cq));
      }
    }
  }
  return report;
}

SwapReport verify_theorem(const ProspectiveModel& model, const PopulationSelector& reference,
                          const PopulationSelector& target) {
  const TabularDistribution ref_table = population_table(model, reference);
  const TabularDistribution target_table = population_table(model, target);

  const TabularKnockoffSampler sampler = scip_build(ref_table);
  const ConditionalKernel& kernel = sampler.exact_kernel();
  const PairLaw law_ref = exact_pair_law(ref_table, kernel);
  const PairLaw law_target = exact_pair_law(target_table, kernel);

  SwapReport report;
  report.reference = reference;
  report.target = target;
  double min_nonnull = -1.0;
  for (int j = 0; j < model.p(); ++j) {
    SwapReport::PerVariable row;
    row.j = j;
    row.tv_reference = swap_invariance_distance(law_ref, j);
    row.tv_target = swap_invariance_distance(law_target, j);
    row.is_null = model.nulls().contains(j);
    if (row.is_null) {
      report.max_null_tv_target = std::max(report.max_null_tv_target, row.tv_target);
    } else if (min_nonnull < 0.0 || row.tv_target < min_nonnull) {
      min_nonnull = row.tv_target;
    }
    report.variables.push_back(row);
  }
  report.min_nonnull_tv_target = std::max(min_nonnull, 0.0);
  report.theorem_holds_for_nulls = report.max_null_tv_target <= kNullSwapTolerance;
  return report;
}

MomentSwapReport gaussian_moment_swap_check(const GaussianLdaModel& model,
                                            PopulationKind reference_kind, double case_fraction,
                                            int n, std::uint64_t seed, double se_limit) {
  if (reference_kind != PopulationKind::Controls && reference_kind != PopulationKind::Cases) {
    throw ValidationError("Gaussian knockoffs support controls or cases references only");
  }
  if (n < 10000) throw ValidationError("moment swap check needs n >= 10^4");

  const Eigen::VectorXd& mu_ref =
      (reference_kind == PopulationKind::Controls) ? model.mu0() : model.mu1();
  const GaussianKnockoffSampler sampler(mu_ref, model.sigma(), equicorrelated_s(model.sigma()));

  const LabeledDataset data =
      gaussian_retrospective_sample(model, case_fraction, n, derive_seed(seed, 1));
  const int p = model.p();

  Eigen::MatrixXd x(n, p), xt(n, p);
  {
    Rng rng(derive_seed(seed, 2));
    Eigen::VectorXd row(p);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < p; ++j) row[j] = data.x.at(i, j);
      x.row(i) = row.transpose();
      xt.row(i) = sampler.sample(row, rng).transpose();
    }
  }

  // Per coordinate j, every first- and second-order moment the null swap
  // constrains gives one mean-zero sample average:
  //   x_j - xt_j,  x_j^2 - xt_j^2,  (x_j - xt_j) x_k,  (x_j - xt_j) xt_k.
  const auto z_score = [n](const Eigen::ArrayXd& diff) {
    const double mean = diff.mean();
    const double var = (diff - mean).square().sum() / (n - 1);
    const double se = std::sqrt(var / n);
    if (se == 0.0) return std::abs(mean) > 0.0 ? 1e300 : 0.0;
    return std::abs(mean) / se;
  };

  MomentSwapReport report;
  report.se_limit = se_limit;
  report.all_nulls_pass = true;
  for (int j = 0; j < p; ++j) {
    const Eigen::ArrayXd dj = (x.col(j) - xt.col(j)).array();
    double worst = z_score(dj);
    worst = std::max(worst, z_score(x.col(j).array().square() - xt.col(j).array().square()));
    for (int k = 0; k < p; ++k) {
      if (k == j) continue;
      worst = std::max(worst, z_score(dj * x.col(k).array()));
      worst = std::max(worst, z_score(dj * xt.col(k).array()));
    }
    MomentSwapReport::PerVariable row;
    row.j = j;
    row.max_abs_z = worst;
    row.is_null = model.nulls().contains(j);
    row.pass = worst <= se_limit;
    if (row.is_null) {
      report.max_null_z = std::max(report.max_null_z, worst);
      report.all_nulls_pass = report.all_nulls_pass && row.pass;
    }
    report.variables.push_back(row);
  }
  return report;
}

}  // namespace kcc
