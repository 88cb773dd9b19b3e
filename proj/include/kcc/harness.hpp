#ifndef KCC_HARNESS_HPP
#define KCC_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "kcc/filter.hpp"
#include "kcc/model_io.hpp"
#include "kcc/population.hpp"
#include "kcc/verifier.hpp"

namespace kcc {

// Declarative description of one Monte Carlo FDR/power experiment.
struct ScenarioConfig {
  nlohmann::json model;  // inline model spec (markov or lda)
  double case_fraction = 0.5;
  int n = 0;
  PopulationSelector reference;
  StatKind stat = StatKind::Marginal;
  double lasso_lambda = -1.0;  // < 0: grid choice with a validation split
  double q = 0.2;
  bool plus = true;
  int reps = 1;
  std::uint64_t master_seed = 1;

  void validate() const;
  static ScenarioConfig from_json(const nlohmann::json& spec);
  nlohmann::json to_json() const;
};

struct RepOutcome {
  int rep = 0;
  std::vector<int> selected;
  int n_false = 0;
  double fdp = 0.0;
  double power = 0.0;
  std::string dataset_hash;
};

struct ExperimentResult {
  ScenarioConfig config;
  std::string config_hash;
  std::vector<RepOutcome> reps;
  double fdr_estimate = 0.0;
  double fdr_se = 0.0;
  double power_mean = 0.0;
  double power_se = 0.0;

  // CSV columns: rep,reference,n,q,plus,stat,n_selected,n_false,fdp,power
  void write_results_csv(std::ostream& out) const;
  nlohmann::json to_summary_json() const;
};

// Runs the scenario: per rep, draw a retrospective dataset, generate
// knockoffs from the sampler built once for the reference population,
// compute W, threshold, and score FDP/power against the model's null set.
// Bitwise reproducible given master_seed; reps execute in parallel on
// derived seeds.
ExperimentResult run_fdr_experiment(const ScenarioConfig& config);

// Same model/n/q/seed, one arm per reference kind, common random numbers
// across arms. ValidationError if the configs differ anywhere else.
std::vector<ExperimentResult> power_compare(std::span<const ScenarioConfig> configs);
nlohmann::json power_compare_report(std::span<const ExperimentResult> arms);
void write_power_compare_csv(std::ostream& out, std::span<const ExperimentResult> arms);

struct BatteryCase {
  std::uint64_t seed = 0;
  int p = 0;
  int K = 0;
  double case_fraction = 0.0;
  std::string reference;
  double max_null_tv = 0.0;
  double min_nonnull_tv = 0.0;
  bool pass = false;
};

struct BatteryReport {
  std::vector<BatteryCase> cases;
  int models = 0;
  double max_null_tv = 0.0;        // worst null swap distance under any target
  double max_null_cond_dev = 0.0;  // worst null conditional mismatch across population pairs
  bool all_pass = false;

  nlohmann::json to_json() const;
};

// Exchangeability transfer over randomized full-support models: for every
// model, every reference kind and every null coordinate, the
// target-population swap distance must stay below kNullSwapTolerance; null
// conditionals are also compared across all population pairs of each model.
BatteryReport verify_battery(int num_models, int max_p, int max_K, std::uint64_t master_seed);

// Randomized battery model: Markov covariates, logistic link with at least
// one null and one non-null coefficient, full support.
ProspectiveModel random_battery_model(std::uint64_t seed, int max_p, int max_K);

nlohmann::json swap_report_to_json(const SwapReport& report);
nlohmann::json moment_report_to_json(const MomentSwapReport& report);

}  // namespace kcc

#endif
