#include "kcc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "kcc/errors.hpp"
#include "kcc/gaussian_knockoffs.hpp"
#include "kcc/rng.hpp"
#include "kcc/util.hpp"

namespace kcc {

namespace {

using nlohmann::json;

// Seed streams, so datasets are shared across reference arms while knockoff
// noise stays independent of them.
constexpr std::uint64_t kStreamData = 0xD474ULL;
constexpr std::uint64_t kStreamKnockoff = 0x7175ULL;
constexpr std::uint64_t kStreamStat = 0x57A7ULL;

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(std::span<const double> values) {
  MeanSe out;
  const std::size_t n = values.size();
  if (n == 0) return out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / (static_cast<double>(n) - 1.0) / static_cast<double>(n));
  }
  return out;
}

RepOutcome score_selection(int rep, const Selection& sel, const NullSet& nulls,
                           const std::string& data_hash) {
  RepOutcome out;
  out.rep = rep;
  out.selected = sel.selected;
  out.dataset_hash = data_hash;
  for (int j : sel.selected) {
    if (nulls.contains(j)) ++out.n_false;
  }
  out.fdp = static_cast<double>(out.n_false) /
            std::max<std::size_t>(1, sel.selected.size());
  if (nulls.num_nonnull() > 0) {
    out.power = static_cast<double>(static_cast<int>(sel.selected.size()) - out.n_false) /
                nulls.num_nonnull();
  }
  return out;
}

WStatistics compute_stat(const ScenarioConfig& config, const ColMatrix& x, const ColMatrix& xt,
                         std::span<const int> y, std::uint64_t seed) {
  if (config.stat == StatKind::Marginal) return marginal_diff_stat(x, xt, y);
  return lasso_logistic_stat(x, xt, y, config.lasso_lambda, seed);
}

RepOutcome run_discrete_rep(const ScenarioConfig& config, const ProspectiveModel& model,
                            const TabularKnockoffSampler& sampler, int rep) {
  const LabeledDataset data = retrospective_sample(
      model, config.case_fraction, config.n, derive_seed(config.master_seed, kStreamData, rep));

  const StateCodec& codec = model.covariates().codec();
  Rng krng(derive_seed(config.master_seed, kStreamKnockoff, rep));
  ColMatrix xt(data.n(), data.p());
  std::vector<int> digits(static_cast<std::size_t>(data.p()));
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < data.p(); ++j) {
      digits[static_cast<std::size_t>(j)] = static_cast<int>(data.x.at(i, j));
    }
    const std::size_t knock = sampler.sample(codec.encode(digits), krng);
    codec.decode(knock, digits);
    for (int j = 0; j < data.p(); ++j) {
      xt.at(i, j) = static_cast<double>(digits[static_cast<std::size_t>(j)]);
    }
  }

  const WStatistics stats = compute_stat(config, data.x, xt, data.y,
                                         derive_seed(config.master_seed, kStreamStat, rep));
  return score_selection(rep, knockoff_threshold(stats, config.q, config.plus), model.nulls(),
                         dataset_hash(data));
}

RepOutcome run_gaussian_rep(const ScenarioConfig& config, const GaussianLdaModel& model,
                            const GaussianKnockoffSampler& sampler, int rep) {
  const LabeledDataset data =
      gaussian_retrospective_sample(model, config.case_fraction, config.n,
                                    derive_seed(config.master_seed, kStreamData, rep));

  Rng krng(derive_seed(config.master_seed, kStreamKnockoff, rep));
  ColMatrix xt(data.n(), data.p());
  Eigen::VectorXd row(data.p());
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < data.p(); ++j) row[j] = data.x.at(i, j);
    const Eigen::VectorXd knock = sampler.sample(row, krng);
    for (int j = 0; j < data.p(); ++j) xt.at(i, j) = knock[j];
  }

  const WStatistics stats = compute_stat(config, data.x, xt, data.y,
                                         derive_seed(config.master_seed, kStreamStat, rep));
  return score_selection(rep, knockoff_threshold(stats, config.q, config.plus), model.nulls(),
                         dataset_hash(data));
}

}  // namespace

void ScenarioConfig::validate() const {
  if (reps < 1) throw ValidationError("reps must be >= 1");
  if (!(q > 0.0 && q < 1.0)) throw ValidationError("q must lie in (0, 1)");
  if (!(case_fraction > 0.0 && case_fraction < 1.0)) {
    throw ValidationError("case_fraction must lie in (0, 1)");
  }
  if (n < 2) throw ValidationError("n must be >= 2");
}

ScenarioConfig ScenarioConfig::from_json(const json& spec) {
  ScenarioConfig config;
  try {
    config.model = spec.at("model");
    config.case_fraction = spec.value("case_fraction", 0.5);
    config.n = spec.at("n").get<int>();
    config.reference = parse_population(spec.value("reference", "controls"));
    config.stat = parse_stat_kind(spec.value("stat", "marginal"));
    config.lasso_lambda = spec.value("lambda", -1.0);
    config.q = spec.value("q", 0.2);
    config.plus = spec.value("plus", true);
    config.reps = spec.value("reps", 1);
    config.master_seed = spec.value("seed", std::uint64_t{1});
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad scenario config: ") + e.what());
  }
  config.validate();
  return config;
}

json ScenarioConfig::to_json() const {
  json spec{{"model", model},
            {"case_fraction", case_fraction},
            {"n", n},
            {"reference", reference.name()},
            {"stat", stat_kind_name(stat)},
            {"q", q},
            {"plus", plus},
            {"reps", reps},
            {"seed", master_seed}};
  if (lasso_lambda >= 0.0) spec["lambda"] = lasso_lambda;
  return spec;
}

void ExperimentResult::write_results_csv(std::ostream& out) const {
  out << "rep,reference,n,q,plus,stat,n_selected,n_false,fdp,power\n";
  for (const RepOutcome& r : reps) {
    out << r.rep << ',' << config.reference.name() << ',' << config.n << ','
        << format_double(config.q) << ',' << (config.plus ? 1 : 0) << ','
        << stat_kind_name(config.stat) << ',' << r.selected.size() << ',' << r.n_false << ','
        << format_double(r.fdp) << ',' << format_double(r.power) << '\n';
  }
}

json ExperimentResult::to_summary_json() const {
  json per_rep = json::array();
  for (const RepOutcome& r : reps) {
    json sel = json::array();
    for (int j : r.selected) sel.push_back(j + 1);  // 1-based in external outputs
    per_rep.push_back(json{{"rep", r.rep},
                           {"selected", sel},
                           {"n_false", r.n_false},
                           {"fdp", r.fdp},
                           {"power", r.power},
                           {"dataset_hash", r.dataset_hash}});
  }
  return json{{"config", config.to_json()},
              {"config_hash", config_hash},
              {"aggregate", json{{"fdr_estimate", fdr_estimate},
                                 {"fdr_se", fdr_se},
                                 {"power_mean", power_mean},
                                 {"power_se", power_se},
                                 {"reps", reps.size()}}},
              {"per_rep", per_rep}};
}

ExperimentResult run_fdr_experiment(const ScenarioConfig& config) {
  config.validate();
  const LoadedModel loaded = load_model_json(config.model);

  ExperimentResult result;
  result.config = config;
  result.config_hash = json_hash(config.to_json());
  result.reps.resize(static_cast<std::size_t>(config.reps));

  if (loaded.is_discrete()) {
    const ProspectiveModel& model = loaded.discrete();
    // One sampler build per (model, reference); reps reuse it.
    const TabularKnockoffSampler sampler =
        scip_build(population_table(model, config.reference));
    parallel_for(config.reps, [&](int rep) {
      result.reps[static_cast<std::size_t>(rep)] = run_discrete_rep(config, model, sampler, rep);
    });
  } else {
    const GaussianLdaModel& model = loaded.lda();
    Eigen::VectorXd mu_ref;
    switch (config.reference.kind) {
      case PopulationKind::Controls:
        mu_ref = model.mu0();
        break;
      case PopulationKind::Cases:
        mu_ref = model.mu1();
        break;
      default:
        throw ValidationError(
            "Gaussian knockoffs are built for controls or cases references only; "
            "mixture references run on the discrete stack");
    }
    const GaussianKnockoffSampler sampler(mu_ref, model.sigma(),
                                          equicorrelated_s(model.sigma()));
    parallel_for(config.reps, [&](int rep) {
      result.reps[static_cast<std::size_t>(rep)] = run_gaussian_rep(config, model, sampler, rep);
    });
  }

  std::vector<double> fdps, powers;
  fdps.reserve(result.reps.size());
  powers.reserve(result.reps.size());
  for (const RepOutcome& r : result.reps) {
    fdps.push_back(r.fdp);
    powers.push_back(r.power);
  }
  const MeanSe fdr = mean_se(fdps);
  const MeanSe power = mean_se(powers);
  result.fdr_estimate = fdr.mean;
  result.fdr_se = fdr.se;
  result.power_mean = power.mean;
  result.power_se = power.se;
  return result;
}

std::vector<ExperimentResult> power_compare(std::span<const ScenarioConfig> configs) {
  if (configs.empty()) throw ValidationError("power_compare needs at least one config");
  for (const ScenarioConfig& c : configs) {
    json a = c.to_json();
    json b = configs.front().to_json();
    a.erase("reference");
    b.erase("reference");
    if (a != b) {
      throw ValidationError("power_compare configs must differ only in reference_kind");
    }
  }
  std::vector<ExperimentResult> arms;
  arms.reserve(configs.size());
  for (const ScenarioConfig& c : configs) arms.push_back(run_fdr_experiment(c));

  // Common random numbers: rep k sees the same dataset in every arm.
  for (const ExperimentResult& arm : arms) {
    for (std::size_t k = 0; k < arm.reps.size(); ++k) {
      if (arm.reps[k].dataset_hash != arms.front().reps[k].dataset_hash) {
        throw Error("common-random-numbers violation: datasets differ across arms");
      }
    }
  }
  return arms;
}

json power_compare_report(std::span<const ExperimentResult> arms) {
  json rows = json::array();
  for (const ExperimentResult& arm : arms) {
    json row{{"reference", arm.config.reference.name()},
             {"fdr_estimate", arm.fdr_estimate},
             {"fdr_se", arm.fdr_se},
             {"power_mean", arm.power_mean},
             {"power_se", arm.power_se}};
    // Paired difference against the first arm, using the shared datasets.
    if (&arm != arms.data()) {
      std::vector<double> diff(arm.reps.size());
      for (std::size_t k = 0; k < arm.reps.size(); ++k) {
        diff[k] = arm.reps[k].power - arms.front().reps[k].power;
      }
      const MeanSe d = mean_se(diff);
      row["power_diff_vs_first"] = d.mean;
      row["power_diff_se"] = d.se;
    }
    rows.push_back(row);
  }
  return json{{"arms", rows},
              {"common_random_numbers", true},
              {"baseline_reference", arms.empty() ? "" : arms.front().config.reference.name()}};
}

void write_power_compare_csv(std::ostream& out, std::span<const ExperimentResult> arms) {
  out << "rep,reference,n,q,plus,stat,n_selected,n_false,fdp,power\n";
  for (const ExperimentResult& arm : arms) {
    for (const RepOutcome& r : arm.reps) {
      out << r.rep << ',' << arm.config.reference.name() << ',' << arm.config.n << ','
          << format_double(arm.config.q) << ',' << (arm.config.plus ? 1 : 0) << ','
          << stat_kind_name(arm.config.stat) << ',' << r.selected.size() << ',' << r.n_false
          << ',' << format_double(r.fdp) << ',' << format_double(r.power) << '\n';
    }
  }
}

ProspectiveModel random_battery_model(std::uint64_t seed, int max_p, int max_K) {
  if (max_p < 2 || max_K < 2) throw ValidationError("battery needs max_p, max_K >= 2");
  Rng rng(derive_seed(seed, 0xB477ULL));

  const int p = 2 + static_cast<int>(rng.below(static_cast<std::size_t>(max_p - 1)));
  const int K = 2 + static_cast<int>(rng.below(static_cast<std::size_t>(max_K - 1)));

  const auto random_row = [&](int len) {
    std::vector<double> row(static_cast<std::size_t>(len));
    double total = 0.0;
    for (double& v : row) {
      v = 0.25 + rng.uniform();
      total += v;
    }
    for (double& v : row) v /= total;
    return row;
  };

  MarkovChainSpec chain;
  chain.p = p;
  chain.K = K;
  chain.init = random_row(K);
  for (int j = 1; j < p; ++j) {
    std::vector<double> t;
    for (int r = 0; r < K; ++r) {
      const auto row = random_row(K);
      t.insert(t.end(), row.begin(), row.end());
    }
    chain.transitions.push_back(std::move(t));
  }

  LogisticLink link;
  link.intercept = rng.uniform() - 0.5;
  link.beta.assign(static_cast<std::size_t>(p), 0.0);
  // At least one null and one non-null coefficient.
  const int non_nulls = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(p - 1)));
  std::vector<int> idx(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) idx[static_cast<std::size_t>(j)] = j;
  rng.shuffle(idx);
  for (int t = 0; t < non_nulls; ++t) {
    const double magnitude = 0.5 + rng.uniform();
    link.beta[static_cast<std::size_t>(idx[static_cast<std::size_t>(t)])] =
        (rng.uniform() < 0.5) ? magnitude : -magnitude;
  }
  return ProspectiveModel(tabular_from_markov(chain), std::move(link));
}

BatteryReport verify_battery(int num_models, int max_p, int max_K, std::uint64_t master_seed) {
  if (num_models < 0) throw ValidationError("battery size must be nonnegative");
  BatteryReport report;
  report.models = num_models;
  report.all_pass = true;
  if (num_models == 0) return report;

  std::vector<std::vector<BatteryCase>> cases(static_cast<std::size_t>(num_models));
  std::vector<double> cond_dev(static_cast<std::size_t>(num_models), 0.0);

  parallel_for(num_models, [&](int m) {
    const std::uint64_t seed = derive_seed(master_seed, 0xBA77E47ULL, m);
    const ProspectiveModel model = random_battery_model(seed, max_p, max_K);
    Rng rng(derive_seed(seed, 0xC453ULL));
    const double case_fraction = 0.25 + 0.5 * rng.uniform();
    const double mix_rho = 0.1 + 0.8 * rng.uniform();
    const PopulationSelector target{PopulationKind::Mix, case_fraction};

    const PopulationSelector kinds[] = {{PopulationKind::Prospective, 0.0},
                                        {PopulationKind::Controls, 0.0},
                                        {PopulationKind::Cases, 0.0},
                                        {PopulationKind::Mix, mix_rho}};
    for (const PopulationSelector& reference : kinds) {
      const SwapReport swap = verify_theorem(model, reference, target);
      BatteryCase c;
      c.seed = seed;
      c.p = model.p();
      c.K = model.covariates().codec().cardinality(0);
      c.case_fraction = case_fraction;
      c.reference = reference.name();
      c.max_null_tv = swap.max_null_tv_target;
      c.min_nonnull_tv = swap.min_nonnull_tv_target;
      c.pass = swap.theorem_holds_for_nulls;
      cases[static_cast<std::size_t>(m)].push_back(c);
    }

    // Null conditionals across every pair of populations of this model.
    std::vector<TabularDistribution> tables;
    for (const PopulationSelector& sel : kinds) tables.push_back(population_table(model, sel));
    double worst = 0.0;
    for (std::size_t a = 0; a < tables.size(); ++a) {
      for (std::size_t b = a + 1; b < tables.size(); ++b) {
        for (int j : model.nulls().indices()) {
          worst = std::max(worst,
                           null_conditional_match(tables[a], tables[b], j).max_deviation);
        }
      }
    }
    cond_dev[static_cast<std::size_t>(m)] = worst;
  });

  for (int m = 0; m < num_models; ++m) {
    for (const BatteryCase& c : cases[static_cast<std::size_t>(m)]) {
      report.max_null_tv = std::max(report.max_null_tv, c.max_null_tv);
      report.all_pass = report.all_pass && c.pass;
      report.cases.push_back(c);
    }
    report.max_null_cond_dev = std::max(report.max_null_cond_dev,
                                        cond_dev[static_cast<std::size_t>(m)]);
  }
  report.all_pass = report.all_pass && report.max_null_cond_dev <= 1e-10;
  return report;
}

json BatteryReport::to_json() const {
  json rows = json::array();
  for (const BatteryCase& c : cases) {
    rows.push_back(json{{"seed", c.seed},
                        {"p", c.p},
                        {"K", c.K},
                        {"case_fraction", c.case_fraction},
                        {"reference", c.reference},
                        {"max_null_tv", c.max_null_tv},
                        {"min_nonnull_tv", c.min_nonnull_tv},
                        {"pass", c.pass}});
  }
  return json{{"models", models},
              {"cases", rows},
              {"max_null_tv", max_null_tv},
              {"max_null_conditional_deviation", max_null_cond_dev},
              {"all_pass", all_pass}};
}

json swap_report_to_json(const SwapReport& report) {
  json rows = json::array();
  for (const auto& v : report.variables) {
    rows.push_back(json{{"j", v.j + 1},
                        {"tv_reference", v.tv_reference},
                        {"tv_target", v.tv_target},
                        {"null", v.is_null}});
  }
  return json{{"reference", report.reference.name()},
              {"target", report.target.name()},
              {"variables", rows},
              {"max_null_tv_target", report.max_null_tv_target},
              {"min_nonnull_tv_target", report.min_nonnull_tv_target},
              {"theorem_holds_for_nulls", report.theorem_holds_for_nulls}};
}

json moment_report_to_json(const MomentSwapReport& report) {
  json rows = json::array();
  for (const auto& v : report.variables) {
    rows.push_back(json{{"j", v.j + 1},
                        {"max_abs_z", v.max_abs_z},
                        {"null", v.is_null},
                        {"pass", v.pass}});
  }
  return json{{"variables", rows},
              {"se_limit", report.se_limit},
              {"max_null_z", report.max_null_z},
              {"theorem_holds_for_nulls", report.all_nulls_pass}};
}

}  // namespace kcc
