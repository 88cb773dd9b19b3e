#ifndef KCC_MARKOV_HPP
#define KCC_MARKOV_HPP

#include <vector>

#include "kcc/tabular.hpp"

namespace kcc {

// Structured generator of covariate tables: a homogeneous-cardinality Markov
// chain over p variables with K states each.
struct MarkovChainSpec {
  int p = 0;
  int K = 0;
  std::vector<double> init;                      // length K, sums to 1
  std::vector<std::vector<double>> transitions;  // p-1 row-major K*K matrices

  void validate() const;
};

// probs[x] = init[x_1] * prod_j transitions[j-1][x_{j-1}, x_j]
TabularDistribution tabular_from_markov(const MarkovChainSpec& spec);

}  // namespace kcc

#endif
