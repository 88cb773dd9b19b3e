#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "kcc/demo.hpp"
#include "kcc/errors.hpp"
#include "kcc/harness.hpp"

using namespace kcc;

namespace {

ScenarioConfig demo_config() {
  ScenarioConfig config;
  config.model = demo_discrete_json();
  config.case_fraction = 0.5;
  config.n = 150;
  config.reference = {PopulationKind::Controls, 0.0};
  config.stat = StatKind::Marginal;
  config.q = 0.2;
  config.plus = true;
  config.reps = 30;
  config.master_seed = 2024;
  return config;
}

nlohmann::json all_null_model_json() {
  nlohmann::json model = demo_discrete_json();
  model["link"]["beta"] = {0.0, 0.0, 0.0, 0.0, 0.0};
  return model;
}

}  // namespace

TEST_CASE("scenario config JSON round-trip and validation") {
  const ScenarioConfig config = demo_config();
  const ScenarioConfig back = ScenarioConfig::from_json(config.to_json());
  CHECK(back.to_json() == config.to_json());

  nlohmann::json bad = config.to_json();
  bad["q"] = 1.5;
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad), ValidationError);
  bad = config.to_json();
  bad["reps"] = 0;
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad), ValidationError);
  bad = config.to_json();
  bad["case_fraction"] = 0.0;
  CHECK_THROWS_AS(ScenarioConfig::from_json(bad), ValidationError);
}

TEST_CASE("run_fdr_experiment: byte-identical outputs for one master seed") {
  ScenarioConfig config = demo_config();
  config.reps = 8;
  const ExperimentResult a = run_fdr_experiment(config);
  const ExperimentResult b = run_fdr_experiment(config);

  std::ostringstream csv_a, csv_b;
  a.write_results_csv(csv_a);
  b.write_results_csv(csv_b);
  CHECK(csv_a.str() == csv_b.str());
  CHECK(a.to_summary_json().dump() == b.to_summary_json().dump());

  config.master_seed += 1;
  const ExperimentResult c = run_fdr_experiment(config);
  CHECK(a.to_summary_json().dump() != c.to_summary_json().dump());
}

TEST_CASE("run_fdr_experiment: FDP accounting reproduces from the emitted sets") {
  const ExperimentResult result = run_fdr_experiment(demo_config());
  const ProspectiveModel model = demo_discrete_model();
  double fdp_sum = 0.0;
  for (const RepOutcome& rep : result.reps) {
    int n_false = 0;
    for (int j : rep.selected) {
      if (model.nulls().contains(j)) ++n_false;
    }
    CHECK(n_false == rep.n_false);
    const double fdp = static_cast<double>(n_false) /
                       std::max<std::size_t>(1, rep.selected.size());
    CHECK(fdp == rep.fdp);
    fdp_sum += fdp;
  }
  CHECK(result.fdr_estimate == doctest::Approx(fdp_sum / result.reps.size()).epsilon(1e-12));
}

TEST_CASE("run_fdr_experiment: constant-link model makes all references coincide") {
  nlohmann::json model = demo_discrete_json();
  model["link"]["beta"] = {0.0, 0.0, 0.0, 0.0, 0.0};
  model["link"]["intercept"] = 0.4;

  ScenarioConfig config = demo_config();
  config.model = model;
  config.reps = 5;

  ScenarioConfig prospective = config;
  prospective.reference = {PopulationKind::Prospective, 0.0};
  const ExperimentResult a = run_fdr_experiment(config);
  const ExperimentResult b = run_fdr_experiment(prospective);
  for (std::size_t k = 0; k < a.reps.size(); ++k) {
    CHECK(a.reps[k].selected == b.reps[k].selected);
    CHECK(a.reps[k].dataset_hash == b.reps[k].dataset_hash);
  }
}

TEST_CASE("run_fdr_experiment: all-null model controls FDR and reports zero power") {
  ScenarioConfig config = demo_config();
  config.model = all_null_model_json();
  config.reps = 400;
  for (const PopulationSelector& reference :
       {PopulationSelector{PopulationKind::Controls, 0.0},
        PopulationSelector{PopulationKind::Mix, 0.7}}) {
    config.reference = reference;
    const ExperimentResult result = run_fdr_experiment(config);
    CHECK(result.power_mean == 0.0);
    CHECK(result.fdr_estimate <= 0.2 + 2.0 * result.fdr_se);
  }
}

TEST_CASE("run_fdr_experiment: gaussian stack with lasso statistic runs") {
  ScenarioConfig config;
  config.model = demo_lda_json();
  config.case_fraction = 0.5;
  config.n = 250;
  config.reference = {PopulationKind::Controls, 0.0};
  config.stat = StatKind::LassoLogistic;
  config.q = 0.2;
  config.plus = true;
  config.reps = 3;
  config.master_seed = 5;
  const ExperimentResult result = run_fdr_experiment(config);
  CHECK(result.reps.size() == 3);

  config.reference = {PopulationKind::Mix, 0.3};
  CHECK_THROWS_AS(run_fdr_experiment(config), ValidationError);
}

TEST_CASE("power_compare: common random numbers and comparability checks") {
  ScenarioConfig base = demo_config();
  base.reps = 6;
  std::vector<ScenarioConfig> configs;
  for (const PopulationSelector& sel :
       {PopulationSelector{PopulationKind::Prospective, 0.0},
        PopulationSelector{PopulationKind::Controls, 0.0},
        PopulationSelector{PopulationKind::Cases, 0.0},
        PopulationSelector{PopulationKind::Mix, 0.3}}) {
    ScenarioConfig c = base;
    c.reference = sel;
    configs.push_back(c);
  }
  const std::vector<ExperimentResult> arms = power_compare(configs);
  REQUIRE(arms.size() == 4);
  for (const auto& arm : arms) {
    for (std::size_t k = 0; k < arm.reps.size(); ++k) {
      CHECK(arm.reps[k].dataset_hash == arms.front().reps[k].dataset_hash);
    }
  }
  const nlohmann::json report = power_compare_report(arms);
  CHECK(report["arms"].size() == 4);

  configs[1].n += 1;
  CHECK_THROWS_AS(power_compare(configs), ValidationError);
}

TEST_CASE("verify_battery: zero seeds produce an empty passing report") {
  const BatteryReport report = verify_battery(0, 5, 3, 1);
  CHECK(report.all_pass);
  CHECK(report.cases.empty());
  CHECK(report.models == 0);
}

TEST_CASE("verify_battery: small battery passes the transfer check") {
  const BatteryReport report = verify_battery(5, 4, 3, 42);
  CHECK(report.all_pass);
  CHECK(report.cases.size() == 20);  // 4 reference kinds per model
  CHECK(report.max_null_tv <= 1e-8);
  CHECK(report.max_null_cond_dev <= 1e-10);
}

TEST_CASE("battery models always carry nulls and non-nulls") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ProspectiveModel model = random_battery_model(seed, 5, 3);
    CHECK(model.nulls().size() >= 1);
    CHECK(model.nulls().num_nonnull() >= 1);
    CHECK(model.p() >= 2);
    CHECK(model.p() <= 5);
    CHECK(model.prevalence() > 0.0);
    CHECK(model.prevalence() < 1.0);
  }
}

TEST_CASE("scenario config reports malformed JSON as a validation error") {
  CHECK_THROWS_AS(ScenarioConfig::from_json(nlohmann::json{{"n", 100}}), ValidationError);
  CHECK_THROWS_AS(ScenarioConfig::from_json(nlohmann::json{{"model", demo_discrete_json()}}),
                  ValidationError);
}
