#ifndef KCC_FILTER_HPP
#define KCC_FILTER_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kcc/dataset.hpp"

namespace kcc {

enum class StatKind { Marginal, LassoLogistic };

std::string stat_kind_name(StatKind kind);
StatKind parse_stat_kind(const std::string& text);

// Per-variable knockoff statistic; recomputing after swapping columns
// (j, p+j) of the stacked input negates w_j and leaves the others unchanged
// (exactly for the marginal statistic, within 1e-8 for the lasso one).
struct WStatistics {
  std::vector<double> w;
  StatKind kind = StatKind::Marginal;
  int p() const { return static_cast<int>(w.size()); }
};

struct Selection {
  double tau = 0.0;           // +infinity when nothing qualifies
  std::vector<int> selected;  // sorted indices with w_j >= tau
  double q = 0.0;
  bool plus = true;
};

// w_j = |<x_j, y - ybar>| - |<xt_j, y - ybar>|.
WStatistics marginal_diff_stat(const ColMatrix& x, const ColMatrix& xt, std::span<const int> y);

struct LassoFit {
  double intercept = 0.0;
  std::vector<double> beta;
  int sweeps = 0;
  double lambda = 0.0;
};

// Cyclic coordinate descent for (1/n) logistic loss + lambda ||b||_1 with an
// unpenalized intercept. Coordinates are visited in a seeded random order;
// converged when the largest coefficient change in a sweep is < tol.
LassoFit fit_lasso_logistic(const ColMatrix& design, std::span<const int> y, double lambda,
                            std::uint64_t order_seed, double tol = 1e-9, int max_sweeps = 10000);

// Fixed-grid lambda choice with a seeded validation split of the stacked
// design; deterministic and symmetric in original/knockoff columns.
double choose_lasso_lambda(const ColMatrix& x, const ColMatrix& xt, std::span<const int> y,
                           std::uint64_t seed);

// w_j = |b_j| - |b_{p+j}| from the lasso on the stacked standardized design;
// lambda < 0 selects it with choose_lasso_lambda.
WStatistics lasso_logistic_stat(const ColMatrix& x, const ColMatrix& xt, std::span<const int> y,
                                double lambda, std::uint64_t seed);

// Selective-SeqStep threshold over the candidate set {|w_j| : w_j != 0}:
//   tau = min{ t : (plus + #{w_j <= -t}) / max(1, #{w_j >= t}) <= q }.
Selection knockoff_threshold(const WStatistics& stats, double q, bool plus);

}  // namespace kcc

#endif
