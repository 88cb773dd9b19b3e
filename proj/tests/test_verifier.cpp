#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "kcc/demo.hpp"
#include "kcc/errors.hpp"
#include "kcc/harness.hpp"
#include "kcc/rng.hpp"
#include "kcc/scip.hpp"
#include "kcc/verifier.hpp"

using namespace kcc;

namespace {

TabularDistribution random_table(std::uint64_t seed, std::vector<int> cards) {
  StateCodec codec(cards);
  Rng rng(seed);
  std::vector<double> probs(codec.num_states());
  double total = 0.0;
  for (double& p : probs) {
    p = 0.05 + rng.uniform();
    total += p;
  }
  for (double& p : probs) p /= total;
  return TabularDistribution(std::move(codec), std::move(probs));
}

// Relabels the variables of a pair law by `perm` (new position t holds old
// variable perm[t]); used for the permutation-equivariance property.
PairLaw relabel(const PairLaw& law, const std::vector<int>& perm) {
  std::vector<int> cards(perm.size());
  for (std::size_t t = 0; t < perm.size(); ++t) {
    cards[t] = law.codec.cardinality(perm[t]);
  }
  PairLaw out;
  out.codec = StateCodec(cards);
  out.probs.assign(law.probs.size(), 0.0);
  const std::size_t n = law.num_states();
  std::vector<int> x(perm.size()), xt(perm.size()), px(perm.size()), pxt(perm.size());
  for (std::size_t a = 0; a < n; ++a) {
    law.codec.decode(a, x);
    for (std::size_t b = 0; b < n; ++b) {
      law.codec.decode(b, xt);
      for (std::size_t t = 0; t < perm.size(); ++t) {
        px[t] = x[static_cast<std::size_t>(perm[t])];
        pxt[t] = xt[static_cast<std::size_t>(perm[t])];
      }
      out.probs[out.codec.encode(px) * n + out.codec.encode(pxt)] = law.probs[a * n + b];
    }
  }
  return out;
}

}  // namespace

TEST_CASE("exact_pair_law: point-mass population concentrates on one row") {
  TabularDistribution point({2, 2}, {0.0, 0.0, 1.0, 0.0});
  const TabularDistribution ref = random_table(3, {2, 2});
  const TabularKnockoffSampler sampler = scip_build(ref);
  const PairLaw law = exact_pair_law(point, sampler.exact_kernel());
  CHECK(law.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t x = 0; x < 4; ++x) {
    for (std::size_t xt = 0; xt < 4; ++xt) {
      if (x != 2) CHECK(law.at(x, xt) == 0.0);
    }
  }
}

TEST_CASE("exact_pair_law: independent product population with a fresh-draw kernel") {
  // product reference makes the kernel x-free, so the pair law is the
  // product of two independent draws
  std::vector<double> probs;
  for (double a : {0.3, 0.7}) {
    for (double b : {0.6, 0.4}) probs.push_back(a * b);
  }
  const TabularDistribution ref({2, 2}, probs);
  const TabularKnockoffSampler sampler = scip_build(ref);
  const PairLaw law = exact_pair_law(ref, sampler.exact_kernel());
  for (std::size_t x = 0; x < 4; ++x) {
    for (std::size_t xt = 0; xt < 4; ++xt) {
      CHECK(law.at(x, xt) == doctest::Approx(ref.prob(x) * ref.prob(xt)).epsilon(1e-12));
    }
  }
}

TEST_CASE("exact_pair_law: marginalizing the knockoff recovers the population") {
  const TabularDistribution ref = random_table(5, {2, 3});
  const TabularDistribution pop = random_table(6, {2, 3});
  const TabularKnockoffSampler sampler = scip_build(ref);
  const PairLaw law = exact_pair_law(pop, sampler.exact_kernel());
  CHECK(law.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t x = 0; x < pop.num_states(); ++x) {
    double margin = 0.0;
    for (std::size_t xt = 0; xt < pop.num_states(); ++xt) margin += law.at(x, xt);
    CHECK(margin == doctest::Approx(pop.prob(x)).epsilon(1e-12));
  }
}

TEST_CASE("exact_pair_law: shape mismatch and absolute-continuity guard") {
  const TabularDistribution ref = random_table(7, {2, 2});
  const TabularKnockoffSampler sampler = scip_build(ref);
  CHECK_THROWS_AS(exact_pair_law(random_table(8, {2, 3}), sampler.exact_kernel()),
                  ValidationError);

  // kernel built on a table with a dead state, population alive there
  TabularDistribution half_dead({2}, {1.0, 0.0});
  const TabularKnockoffSampler dead_sampler = scip_build(half_dead);
  TabularDistribution alive({2}, {0.5, 0.5});
  CHECK_THROWS_AS(exact_pair_law(alive, dead_sampler.exact_kernel()), SupportError);
}

TEST_CASE("swap_invariance_distance: detects an asymmetric pair law") {
  // mass 1 on (x=0, xt=1): swapping coordinate 0 moves it to (1, 0)
  PairLaw law;
  law.codec = StateCodec({2});
  law.probs = {0.0, 1.0, 0.0, 0.0};
  CHECK(swap_invariance_distance(law, 0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(swap_invariance_distance(law, 1), ValidationError);
}

TEST_CASE("swap_invariance_distance: equivariant under variable relabeling") {
  const TabularDistribution pop = random_table(9, {2, 2, 3});
  const TabularDistribution ref = random_table(10, {2, 2, 3});
  const PairLaw law = exact_pair_law(pop, scip_build(ref).exact_kernel());

  const std::vector<int> perm{2, 0, 1};
  const PairLaw relabeled = relabel(law, perm);
  for (std::size_t t = 0; t < perm.size(); ++t) {
    CHECK(swap_invariance_distance(relabeled, static_cast<int>(t)) ==
          doctest::Approx(swap_invariance_distance(law, perm[t])).epsilon(1e-12));
  }
}

TEST_CASE("null_conditional_match: identical tables give zero") {
  const TabularDistribution t = random_table(11, {2, 3});
  for (int j = 0; j < 2; ++j) {
    const auto report = null_conditional_match(t, t, j);
    CHECK(report.max_deviation == 0.0);
    CHECK(report.skipped == 0);
  }
}

TEST_CASE("null_conditional_match: prospective vs cases at a null coordinate") {
  const ProspectiveModel model = demo_discrete_model();
  const TabularDistribution cases = condition_on_label(model, 1);
  for (int j : model.nulls().indices()) {
    CHECK(null_conditional_match(model.covariates(), cases, j).max_deviation <= 1e-10);
  }
  // and a non-null coordinate in the demo model separates by more than 1e-4
  const TabularDistribution controls = condition_on_label(model, 0);
  double worst_nonnull = 0.0;
  for (int j = 0; j < model.p(); ++j) {
    if (model.nulls().contains(j)) continue;
    worst_nonnull =
        std::max(worst_nonnull, null_conditional_match(controls, cases, j).max_deviation);
  }
  CHECK(worst_nonnull > 1e-4);
}

TEST_CASE("null_conditional_match: zero-mass assignments are skipped and counted") {
  TabularDistribution dead({2, 2}, {0.5, 0.5, 0.0, 0.0});
  TabularDistribution alive({2, 2}, {0.25, 0.25, 0.25, 0.25});
  const auto report = null_conditional_match(dead, alive, 1);
  CHECK(report.skipped == 1);
  CHECK(report.assignments_checked == 1);
}

TEST_CASE("verify_theorem: reference equals target gives zero everywhere") {
  const ProspectiveModel model = demo_discrete_model();
  const PopulationSelector controls{PopulationKind::Controls, 0.0};
  const SwapReport report = verify_theorem(model, controls, controls);
  for (const auto& v : report.variables) {
    CHECK(v.tv_reference <= 1e-10);
    CHECK(v.tv_target <= 1e-10);
  }
  CHECK(report.theorem_holds_for_nulls);
}

TEST_CASE("verify_theorem: demo model transfers to the retrospective population") {
  const ProspectiveModel model = demo_discrete_model();
  const PopulationSelector target{PopulationKind::Mix, 0.5};
  for (const PopulationSelector& reference :
       {PopulationSelector{PopulationKind::Controls, 0.0},
        PopulationSelector{PopulationKind::Cases, 0.0}}) {
    const SwapReport report = verify_theorem(model, reference, target);
    CHECK(report.max_null_tv_target <= 1e-10);
    CHECK(report.theorem_holds_for_nulls);
    // the two non-null coordinates are genuinely not exchangeable
    CHECK(report.min_nonnull_tv_target > 1e-4);
  }
}

TEST_CASE("verify_theorem: corrupted kernel is caught and localized") {
  const ProspectiveModel model = demo_discrete_model();
  const TabularDistribution controls = condition_on_label(model, 0);
  const TabularKnockoffSampler sampler = scip_build(controls);
  ConditionalKernel kernel = sampler.exact_kernel();

  // bias coordinate j=1 of the knockoff in every row, then renormalize rows
  const int j = 1;
  const StateCodec& codec = kernel.codec;
  const std::size_t n = codec.num_states();
  for (std::size_t x = 0; x < n; ++x) {
    if (!kernel.row_valid[x]) continue;
    double row_sum = 0.0;
    for (std::size_t xt = 0; xt < n; ++xt) {
      if (codec.digit(xt, j) == 1) kernel.probs[x * n + xt] *= 1.01;
      row_sum += kernel.probs[x * n + xt];
    }
    for (std::size_t xt = 0; xt < n; ++xt) kernel.probs[x * n + xt] /= row_sum;
  }

  // under the sampler's own reference every coordinate was exchangeable, so
  // the perturbation shows up at the corrupted coordinate and dominates
  const PairLaw law = exact_pair_law(controls, kernel);
  std::vector<double> tv(static_cast<std::size_t>(model.p()));
  for (int v = 0; v < model.p(); ++v) {
    tv[static_cast<std::size_t>(v)] = swap_invariance_distance(law, v);
  }
  CHECK(tv[j] > 1e-4);  // the corrupted null coordinate fails the check
  CHECK(tv[j] == *std::max_element(tv.begin(), tv.end()));
}

TEST_CASE("gaussian moment swap check: all-null model passes") {
  const int p = 4;
  const Eigen::VectorXd mu = Eigen::VectorXd::Constant(p, 0.7);
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(p, p);
  sigma.array() += 0.2;
  GaussianLdaModel model(mu, mu, sigma, 0.3);
  const MomentSwapReport report =
      gaussian_moment_swap_check(model, PopulationKind::Controls, 0.5, 20000, 77);
  CHECK(report.all_nulls_pass);
  for (const auto& v : report.variables) CHECK(v.is_null);
}

TEST_CASE("gaussian moment swap check: nulls pass, strong non-null fails") {
  const int p = 5;
  Eigen::VectorXd mu0 = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd mu1 = Eigen::VectorXd::Zero(p);
  mu1[0] = 2.0;  // identity sigma: beta = e_1 scaled
  GaussianLdaModel model(mu0, mu1, Eigen::MatrixXd::Identity(p, p), 0.2);
  const MomentSwapReport report =
      gaussian_moment_swap_check(model, PopulationKind::Controls, 0.5, 20000, 5);
  CHECK(report.all_nulls_pass);
  REQUIRE(report.variables.size() == static_cast<std::size_t>(p));
  CHECK_FALSE(report.variables[0].pass);
  for (int j = 1; j < p; ++j) CHECK(report.variables[static_cast<std::size_t>(j)].pass);
}

TEST_CASE("gaussian moment swap check: input guards") {
  const GaussianLdaModel model = demo_lda_model();
  CHECK_THROWS_AS(gaussian_moment_swap_check(model, PopulationKind::Mix, 0.5, 20000, 1),
                  ValidationError);
  CHECK_THROWS_AS(gaussian_moment_swap_check(model, PopulationKind::Controls, 0.5, 100, 1),
                  ValidationError);
}
