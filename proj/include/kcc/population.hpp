#ifndef KCC_POPULATION_HPP
#define KCC_POPULATION_HPP

#include <cstdint>
#include <string>

#include "kcc/dataset.hpp"
#include "kcc/link.hpp"
#include "kcc/tabular.hpp"

namespace kcc {

// A discrete covariate population together with the logistic label link.
// Everything downstream (label conditionals, retrospective sampling, the
// knockoff reference populations) derives from this pair.
class ProspectiveModel {
 public:
  ProspectiveModel(TabularDistribution covariates, LogisticLink link);

  const TabularDistribution& covariates() const { return covariates_; }
  const LogisticLink& link() const { return link_; }
  const NullSet& nulls() const { return nulls_; }
  int p() const { return covariates_.num_vars(); }

  // P(Y=1 | x) for a packed state index.
  double prob_case(std::size_t state) const { return case_prob_[state]; }

  double prevalence() const { return prevalence_; }

 private:
  TabularDistribution covariates_;
  LogisticLink link_;
  NullSet nulls_;
  std::vector<double> case_prob_;  // per state
  double prevalence_ = 0.0;
};

// Joint over (x, y) as a table with one extra binary variable appended for
// y, so entry(x, y) = P(x) P(y|x) sits at index 2*state(x) + y.
TabularDistribution prospective_joint(const ProspectiveModel& model);

// P(X | Y=y): controls-only for y=0, cases-only for y=1.
TabularDistribution condition_on_label(const ProspectiveModel& model, int y);

enum class PopulationKind { Prospective, Controls, Cases, Mix };

struct PopulationSelector {
  PopulationKind kind = PopulationKind::Prospective;
  double rho = 0.5;  // case weight, Mix only

  std::string name() const;
  bool operator==(const PopulationSelector&) const = default;
};

// Accepts "prospective", "controls", "cases", "mix:R" and the retrospective
// alias "retro:R" (a retrospective sample with case fraction R has covariate
// marginal mix(R)).
PopulationSelector parse_population(const std::string& text);

TabularDistribution population_table(const ProspectiveModel& model,
                                     const PopulationSelector& sel);

// Case-control draw with a fixed ratio: exactly round(case_fraction * n)
// rows have y=1, sampled i.i.d. from the cases-only population, the rest
// from controls-only; row order is shuffled deterministically by seed.
LabeledDataset retrospective_sample(const ProspectiveModel& model, double case_fraction, int n,
                                    std::uint64_t seed);

}  // namespace kcc

#endif
