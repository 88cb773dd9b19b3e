// knockoff-cc: model-X knockoffs for case-control studies.
//
// Subcommands: verify, simulate, filter, power-compare, kernel.
// Exit codes: 0 on success, 1 on usage/validation errors, 2 when a
// verification check fails.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kcc/demo.hpp"
#include "kcc/errors.hpp"
#include "kcc/harness.hpp"
#include "kcc/model_io.hpp"
#include "kcc/util.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw kcc::ValidationError("cannot write " + path.string());
  out << text;
}

int cmd_verify(const std::string& model_path, const std::string& reference,
               const std::string& target, int battery, int battery_max_p, int battery_max_K,
               double case_fraction, int n, std::uint64_t seed, const std::string& out_path) {
  json report;
  bool pass = true;

  if (battery > 0) {
    const kcc::BatteryReport result =
        kcc::verify_battery(battery, battery_max_p, battery_max_K, seed);
    report = result.to_json();
    pass = result.all_pass;
    std::cout << "battery: " << battery << " models, max null swap TV "
              << result.max_null_tv << ", max null conditional deviation "
              << result.max_null_cond_dev << (pass ? " [pass]" : " [FAIL]") << "\n";
  } else {
    const kcc::LoadedModel loaded = kcc::load_model_file(model_path);
    if (loaded.is_discrete()) {
      const kcc::SwapReport result = kcc::verify_theorem(
          loaded.discrete(), kcc::parse_population(reference), kcc::parse_population(target));
      report = kcc::swap_report_to_json(result);
      pass = result.theorem_holds_for_nulls;
      for (const auto& v : result.variables) {
        std::cout << "x" << (v.j + 1) << (v.is_null ? " (null)    " : " (non-null)")
                  << "  swap TV under target " << v.tv_target << "\n";
      }
      std::cout << "theorem_holds_for_nulls: " << (pass ? "true" : "false") << "\n";
    } else {
      const auto kind = kcc::parse_population(reference).kind;
      const kcc::MomentSwapReport result = kcc::gaussian_moment_swap_check(
          loaded.lda(), kind, case_fraction, n, seed);
      report = kcc::moment_report_to_json(result);
      pass = result.all_nulls_pass;
      for (const auto& v : result.variables) {
        std::cout << "x" << (v.j + 1) << (v.is_null ? " (null)    " : " (non-null)")
                  << "  max |z| " << v.max_abs_z << (v.pass ? "" : "  [swap detected]") << "\n";
      }
      std::cout << "all null moment checks pass: " << (pass ? "true" : "false") << "\n";
    }
  }

  if (!out_path.empty()) kcc::write_json_file(out_path, report);
  return pass ? kExitOk : kExitVerifyFailed;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  const kcc::ScenarioConfig config =
      kcc::ScenarioConfig::from_json(kcc::read_json_file(config_path));
  const kcc::ExperimentResult result = kcc::run_fdr_experiment(config);

  std::filesystem::create_directories(out_dir);
  {
    std::ostringstream csv;
    result.write_results_csv(csv);
    write_text_file(std::filesystem::path(out_dir) / "results.csv", csv.str());
  }
  write_text_file(std::filesystem::path(out_dir) / "summary.json",
                  result.to_summary_json().dump(2) + "\n");
  const json report{{"reference", config.reference.name()},
                    {"config_hash", result.config_hash},
                    {"fdr_estimate", result.fdr_estimate},
                    {"fdr_se", result.fdr_se},
                    {"power_mean", result.power_mean},
                    {"power_se", result.power_se},
                    {"reps", config.reps}};
  write_text_file(std::filesystem::path(out_dir) / "report.json", report.dump(2) + "\n");

  std::cout << "reference " << config.reference.name() << ": estimated FDR "
            << result.fdr_estimate << " (se " << result.fdr_se << "), power "
            << result.power_mean << " (se " << result.power_se << ") over " << config.reps
            << " reps\n";
  return kExitOk;
}

int cmd_power_compare(const std::string& config_path, const std::string& out_dir) {
  const json spec = kcc::read_json_file(config_path);
  if (!spec.contains("references") || !spec["references"].is_array() ||
      spec["references"].empty()) {
    throw kcc::ValidationError("power-compare config needs a nonempty 'references' array");
  }
  std::vector<kcc::ScenarioConfig> configs;
  for (const auto& ref : spec["references"]) {
    json one = spec;
    one.erase("references");
    one["reference"] = ref.get<std::string>();
    configs.push_back(kcc::ScenarioConfig::from_json(one));
  }
  const std::vector<kcc::ExperimentResult> arms = kcc::power_compare(configs);

  std::filesystem::create_directories(out_dir);
  {
    std::ostringstream csv;
    kcc::write_power_compare_csv(csv, arms);
    write_text_file(std::filesystem::path(out_dir) / "results.csv", csv.str());
  }
  const json report = kcc::power_compare_report(arms);
  write_text_file(std::filesystem::path(out_dir) / "report.json", report.dump(2) + "\n");
  {
    json summaries = json::array();
    for (const auto& arm : arms) summaries.push_back(arm.to_summary_json());
    write_text_file(std::filesystem::path(out_dir) / "summary.json",
                    json{{"arms", summaries}}.dump(2) + "\n");
  }

  for (const auto& arm : arms) {
    std::cout << arm.config.reference.name() << ": FDR " << arm.fdr_estimate << " (se "
              << arm.fdr_se << "), power " << arm.power_mean << " (se " << arm.power_se
              << ")\n";
  }
  return kExitOk;
}

int cmd_filter(const std::string& data_path, const std::string& knockoff_path, double q,
               const std::string& stat, bool plus, double lambda, std::uint64_t seed) {
  std::ifstream data_in(data_path);
  if (!data_in) throw kcc::ValidationError("cannot open " + data_path);
  const kcc::LabeledDataset data = kcc::read_dataset_csv(data_in);

  std::ifstream kn_in(knockoff_path);
  if (!kn_in) throw kcc::ValidationError("cannot open " + knockoff_path);
  const kcc::ColMatrix knockoffs = kcc::read_matrix_csv(kn_in);
  if (knockoffs.n() != data.n() || knockoffs.p() != data.p()) {
    throw kcc::ValidationError("knockoff matrix shape does not match the dataset");
  }

  const kcc::StatKind kind = kcc::parse_stat_kind(stat);
  const kcc::WStatistics stats =
      (kind == kcc::StatKind::Marginal)
          ? kcc::marginal_diff_stat(data.x, knockoffs, data.y)
          : kcc::lasso_logistic_stat(data.x, knockoffs, data.y, lambda, seed);
  const kcc::Selection sel = kcc::knockoff_threshold(stats, q, plus);

  json selected = json::array();
  for (int j : sel.selected) selected.push_back(j + 1);
  json out{{"tau", std::isfinite(sel.tau) ? json(sel.tau) : json("inf")},
           {"selected", selected},
           {"q", q},
           {"plus", plus},
           {"stat", kcc::stat_kind_name(kind)},
           {"w", stats.w}};
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_kernel(const std::string& model_path, const std::string& reference,
               const std::string& out_path) {
  const kcc::LoadedModel loaded = kcc::load_model_file(model_path);
  const kcc::ProspectiveModel& model = loaded.discrete();
  const kcc::TabularDistribution table =
      kcc::population_table(model, kcc::parse_population(reference));
  const kcc::TabularKnockoffSampler sampler = kcc::scip_build(table);
  kcc::write_json_file(out_path, kcc::kernel_to_json(sampler.exact_kernel(), table));
  std::cout << "kernel with " << table.num_states() << " rows written to " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"model-X knockoffs for case-control studies"};
  app.require_subcommand(1);

  std::string model_path, reference = "controls", target = "retro:0.5", out_path;
  std::string config_path, out_dir = "out";
  std::string data_path, knockoff_path, stat = "marginal";
  double q = 0.2, lambda = -1.0, case_fraction = 0.5;
  bool plus = false;
  int n = 50000, battery = 0, battery_max_p = 5, battery_max_K = 3;
  std::uint64_t seed = 1;

  auto* verify = app.add_subcommand(
      "verify", "check knockoff exchangeability transfer for a model or a random battery");
  verify->add_option("--model", model_path, "model JSON");
  verify->add_option("--reference", reference, "population the knockoffs are built for");
  verify->add_option("--target", target, "population the sample is drawn from (e.g. retro:0.5)");
  verify->add_option("--battery", battery, "run N randomized models instead of --model");
  verify->add_option("--battery-max-p", battery_max_p, "battery variable count cap");
  verify->add_option("--battery-max-K", battery_max_K, "battery state count cap");
  verify->add_option("--case-fraction", case_fraction, "case fraction (gaussian moment check)");
  verify->add_option("--n", n, "sample size (gaussian moment check)");
  verify->add_option("--seed", seed, "seed");
  verify->add_option("--out", out_path, "write report JSON here");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo FDR/power experiment");
  simulate->add_option("--config", config_path, "scenario JSON")->required();
  simulate->add_option("--out", out_dir, "output directory");

  auto* compare = app.add_subcommand("power-compare",
                                     "one experiment per reference kind, shared datasets");
  compare->add_option("--config", config_path, "scenario JSON with a 'references' array")
      ->required();
  compare->add_option("--out", out_dir, "output directory");

  auto* filter = app.add_subcommand("filter", "knockoff filter on a dataset + knockoff CSV");
  filter->add_option("--data", data_path, "dataset CSV (x1..xp,y)")->required();
  filter->add_option("--knockoffs", knockoff_path, "knockoff CSV (x1..xp)")->required();
  filter->add_option("--q", q, "target FDR level");
  filter->add_option("--stat", stat, "marginal|lasso");
  filter->add_flag("--plus", plus, "knockoff+ offset");
  filter->add_option("--lambda", lambda, "lasso penalty (default: validation grid)");
  filter->add_option("--seed", seed, "seed for the lasso coordinate order");

  auto* kernel = app.add_subcommand("kernel", "export the exact knockoff kernel for inspection");
  kernel->add_option("--model", model_path, "model JSON")->required();
  kernel->add_option("--reference", reference, "population the kernel is built for");
  kernel->add_option("--out", out_path, "kernel JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      if (battery == 0 && model_path.empty()) {
        std::cerr << "verify needs --model or --battery\n";
        return kExitUsage;
      }
      return cmd_verify(model_path, reference, target, battery, battery_max_p, battery_max_K,
                        case_fraction, n, seed, out_path);
    }
    if (simulate->parsed()) return cmd_simulate(config_path, out_dir);
    if (compare->parsed()) return cmd_power_compare(config_path, out_dir);
    if (filter->parsed()) {
      return cmd_filter(data_path, knockoff_path, q, stat, plus, lambda, seed);
    }
    if (kernel->parsed()) return cmd_kernel(model_path, reference, out_path);
  } catch (const kcc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
