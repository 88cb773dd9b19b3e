#include "kcc/population.hpp"

#include <cmath>
#include <cstdio>

#include "kcc/errors.hpp"
#include "kcc/rng.hpp"

namespace kcc {

ProspectiveModel::ProspectiveModel(TabularDistribution covariates, LogisticLink link)
    : covariates_(std::move(covariates)), link_(std::move(link)) {
  if (static_cast<int>(link_.beta.size()) != covariates_.num_vars()) {
    throw ValidationError("link has " + std::to_string(link_.beta.size()) +
                          " coefficients for " + std::to_string(covariates_.num_vars()) +
                          " variables");
  }
  nulls_ = link_.null_set();
  const StateCodec& codec = covariates_.codec();
  case_prob_.resize(codec.num_states());
  std::vector<int> x(static_cast<std::size_t>(codec.num_vars()));
  for (std::size_t s = 0; s < case_prob_.size(); ++s) {
    codec.decode(s, x);
    case_prob_[s] = link_.prob_case(x, codec.cardinalities());
    prevalence_ += covariates_.prob(s) * case_prob_[s];
  }
}

TabularDistribution prospective_joint(const ProspectiveModel& model) {
  std::vector<int> cards = model.covariates().codec().cardinalities();
  cards.push_back(2);
  std::vector<double> probs(model.covariates().num_states() * 2);
  for (std::size_t s = 0; s < model.covariates().num_states(); ++s) {
    const double px = model.covariates().prob(s);
    const double p1 = model.prob_case(s);
    probs[2 * s] = px * (1.0 - p1);
    probs[2 * s + 1] = px * p1;
  }
  return TabularDistribution(std::move(cards), std::move(probs));
}

TabularDistribution condition_on_label(const ProspectiveModel& model, int y) {
  if (y != 0 && y != 1) throw ValidationError("label must be 0 or 1");
  const double mass = (y == 1) ? model.prevalence() : 1.0 - model.prevalence();
  if (mass <= 0.0) {
    throw DegenerateLabelError("P(Y=" + std::to_string(y) + ") = 0: cannot condition");
  }
  std::vector<double> probs(model.covariates().num_states());
  for (std::size_t s = 0; s < probs.size(); ++s) {
    const double w = (y == 1) ? model.prob_case(s) : 1.0 - model.prob_case(s);
    probs[s] = model.covariates().prob(s) * w / mass;
  }
  // Exact renormalization absorbs the last-bit drift of the Bayes quotient.
  double total = 0.0;
  for (double p : probs) total += p;
  for (double& p : probs) p /= total;
  return TabularDistribution(model.covariates().codec(), std::move(probs));
}

std::string PopulationSelector::name() const {
  switch (kind) {
    case PopulationKind::Prospective:
      return "prospective";
    case PopulationKind::Controls:
      return "controls";
    case PopulationKind::Cases:
      return "cases";
    case PopulationKind::Mix: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "mix:%g", rho);
      return buf;
    }
  }
  return "?";
}

PopulationSelector parse_population(const std::string& text) {
  if (text == "prospective") return {PopulationKind::Prospective, 0.0};
  if (text == "controls") return {PopulationKind::Controls, 0.0};
  if (text == "cases") return {PopulationKind::Cases, 0.0};
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string head = text.substr(0, colon);
    if (head == "mix" || head == "retro") {
      double rho = 0.0;
      try {
        rho = std::stod(text.substr(colon + 1));
      } catch (const std::exception&) {
        throw ValidationError("bad population '" + text + "'");
      }
      if (!(rho >= 0.0 && rho <= 1.0)) {
        throw ValidationError("population mix weight must lie in [0, 1]");
      }
      return {PopulationKind::Mix, rho};
    }
  }
  throw ValidationError("unknown population '" + text +
                        "' (expected prospective|controls|cases|mix:R|retro:R)");
}

TabularDistribution population_table(const ProspectiveModel& model,
                                     const PopulationSelector& sel) {
  switch (sel.kind) {
    case PopulationKind::Prospective:
      return model.covariates();
    case PopulationKind::Controls:
      return condition_on_label(model, 0);
    case PopulationKind::Cases:
      return condition_on_label(model, 1);
    case PopulationKind::Mix:
      return mix(condition_on_label(model, 0), condition_on_label(model, 1), sel.rho);
  }
  throw ValidationError("bad population kind");
}

LabeledDataset retrospective_sample(const ProspectiveModel& model, double case_fraction, int n,
                                    std::uint64_t seed) {
  if (!(case_fraction > 0.0 && case_fraction < 1.0)) {
    throw ValidationError("case_fraction must lie in (0, 1)");
  }
  if (n < 1) throw ValidationError("sample size must be positive");

  const TabularDistribution controls = condition_on_label(model, 0);
  const TabularDistribution cases = condition_on_label(model, 1);
  const int n_cases = static_cast<int>(std::lround(case_fraction * n));

  Rng rng(seed);
  CategoricalSampler draw_controls(controls.probs());
  CategoricalSampler draw_cases(cases.probs());

  std::vector<std::size_t> states(static_cast<std::size_t>(n));
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const bool is_case = i < n_cases;
    states[static_cast<std::size_t>(i)] =
        is_case ? draw_cases.draw(rng) : draw_controls.draw(rng);
    labels[static_cast<std::size_t>(i)] = is_case ? 1 : 0;
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  rng.shuffle(perm);

  const StateCodec& codec = model.covariates().codec();
  LabeledDataset data;
  data.x = ColMatrix(n, codec.num_vars());
  data.y.resize(static_cast<std::size_t>(n));
  std::vector<int> digits(static_cast<std::size_t>(codec.num_vars()));
  for (int i = 0; i < n; ++i) {
    const int src = perm[static_cast<std::size_t>(i)];
    codec.decode(states[static_cast<std::size_t>(src)], digits);
    for (int j = 0; j < codec.num_vars(); ++j) {
      data.x.at(i, j) = static_cast<double>(digits[static_cast<std::size_t>(j)]);
    }
    data.y[static_cast<std::size_t>(i)] = labels[static_cast<std::size_t>(src)];
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "retrospective:%g", case_fraction);
  data.provenance = buf;
  return data;
}

}  // namespace kcc
