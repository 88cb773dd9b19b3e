#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "kcc/errors.hpp"
#include "kcc/filter.hpp"
#include "kcc/link.hpp"
#include "kcc/rng.hpp"

namespace kcc {

namespace {

double soft_threshold(double u, double lambda) {
  if (u > lambda) return u - lambda;
  if (u < -lambda) return u + lambda;
  return 0.0;
}

// Stacked [x | xt] with each column standardized by its own empirical mean
// and scale, so originals and knockoffs get identical treatment.
ColMatrix stack_standardized(const ColMatrix& x, const ColMatrix& xt) {
  if (x.n() != xt.n() || x.p() != xt.p()) {
    throw ValidationError("lasso statistic: shapes do not agree");
  }
  const int n = x.n();
  const int p = x.p();
  ColMatrix design(n, 2 * p);
  for (int j = 0; j < 2 * p; ++j) {
    const auto src = (j < p) ? x.col(j) : xt.col(j - p);
    double mean = 0.0;
    for (double v : src) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : src) var += (v - mean) * (v - mean);
    var /= n;
    const double scale = var > 0.0 ? std::sqrt(var) : 1.0;
    auto dst = design.col(j);
    for (int i = 0; i < n; ++i) {
      dst[static_cast<std::size_t>(i)] = (src[static_cast<std::size_t>(i)] - mean) / scale;
    }
  }
  return design;
}

double validation_nll(const ColMatrix& design, std::span<const int> y,
                      std::span<const int> rows, const LassoFit& fit) {
  double nll = 0.0;
  for (int i : rows) {
    double z = fit.intercept;
    for (int j = 0; j < design.p(); ++j) {
      z += fit.beta[static_cast<std::size_t>(j)] * design.at(i, j);
    }
    // log(1 + e^z) - y z, computed stably
    const double softplus = (z > 0.0) ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    nll += softplus - y[static_cast<std::size_t>(i)] * z;
  }
  return nll / static_cast<double>(rows.size());
}

LassoFit fit_on_rows(const ColMatrix& design, std::span<const int> y, std::span<const int> rows,
                     double lambda, std::uint64_t order_seed, double tol, int max_sweeps,
                     const LassoFit* warm);

}  // namespace

LassoFit fit_lasso_logistic(const ColMatrix& design, std::span<const int> y, double lambda,
                            std::uint64_t order_seed, double tol, int max_sweeps) {
  std::vector<int> all(static_cast<std::size_t>(design.n()));
  for (int i = 0; i < design.n(); ++i) all[static_cast<std::size_t>(i)] = i;
  return fit_on_rows(design, y, all, lambda, order_seed, tol, max_sweeps, nullptr);
}

namespace {

LassoFit fit_on_rows(const ColMatrix& design, std::span<const int> y, std::span<const int> rows,
                     double lambda, std::uint64_t order_seed, double tol, int max_sweeps,
                     const LassoFit* warm) {
  if (lambda < 0.0) throw ValidationError("lambda must be nonnegative");
  if (static_cast<int>(y.size()) != design.n()) {
    throw ValidationError("label length does not match design");
  }
  const int n = static_cast<int>(rows.size());
  const int d = design.p();
  if (n < 2) throw ValidationError("need at least two rows to fit");

  LassoFit fit;
  fit.lambda = lambda;
  fit.beta.assign(static_cast<std::size_t>(d), 0.0);
  double ybar = 0.0;
  for (int i : rows) ybar += y[static_cast<std::size_t>(i)];
  ybar /= n;
  if (ybar == 0.0 || ybar == 1.0) throw ValidationError("labels are constant");
  fit.intercept = std::log(ybar / (1.0 - ybar));
  if (warm != nullptr) {
    fit.beta = warm->beta;
    fit.intercept = warm->intercept;
  }

  // Bohning majorization: per-coordinate curvature bound 0.25 (1/n)||col||^2.
  std::vector<double> curv(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    double ss = 0.0;
    for (int i : rows) ss += design.at(i, j) * design.at(i, j);
    curv[static_cast<std::size_t>(j)] = std::max(0.25 * ss / n, 1e-12);
  }

  std::vector<double> z(static_cast<std::size_t>(n), fit.intercept);
  for (int j = 0; j < d; ++j) {
    const double b = fit.beta[static_cast<std::size_t>(j)];
    if (b == 0.0) continue;
    for (int r = 0; r < n; ++r) z[static_cast<std::size_t>(r)] += b * design.at(rows[static_cast<std::size_t>(r)], j);
  }

  std::vector<int> order(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) order[static_cast<std::size_t>(j)] = j;
  Rng rng(order_seed);
  rng.shuffle(order);

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    double max_change = 0.0;

    double g0 = 0.0;
    for (int r = 0; r < n; ++r) {
      g0 += sigmoid(z[static_cast<std::size_t>(r)]) - y[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)])];
    }
    g0 /= n;
    const double d0 = -g0 / 0.25;
    if (d0 != 0.0) {
      fit.intercept += d0;
      for (double& v : z) v += d0;
      max_change = std::abs(d0);
    }

    for (int j : order) {
      double g = 0.0;
      for (int r = 0; r < n; ++r) {
        g += design.at(rows[static_cast<std::size_t>(r)], j) *
             (sigmoid(z[static_cast<std::size_t>(r)]) - y[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)])]);
      }
      g /= n;
      const double lj = curv[static_cast<std::size_t>(j)];
      const double old = fit.beta[static_cast<std::size_t>(j)];
      const double next = soft_threshold(old * lj - g, lambda) / lj;
      const double delta = next - old;
      if (delta != 0.0) {
        fit.beta[static_cast<std::size_t>(j)] = next;
        for (int r = 0; r < n; ++r) {
          z[static_cast<std::size_t>(r)] += delta * design.at(rows[static_cast<std::size_t>(r)], j);
        }
        max_change = std::max(max_change, std::abs(delta));
      }
    }

    fit.sweeps = sweep;
    if (max_change < tol) return fit;
  }
  throw ConvergenceError("lasso coordinate descent did not converge after " +
                             std::to_string(max_sweeps) + " sweeps",
                         max_sweeps);
}

}  // namespace

double choose_lasso_lambda(const ColMatrix& x, const ColMatrix& xt, std::span<const int> y,
                           std::uint64_t seed) {
  const ColMatrix design = stack_standardized(x, xt);
  const int n = design.n();

  double ybar = 0.0;
  for (int v : y) ybar += v;
  ybar /= n;
  double lambda_max = 0.0;
  for (int j = 0; j < design.p(); ++j) {
    double dot = 0.0;
    for (int i = 0; i < n; ++i) dot += design.at(i, j) * (y[static_cast<std::size_t>(i)] - ybar);
    lambda_max = std::max(lambda_max, std::abs(dot) / n);
  }
  if (lambda_max == 0.0) return 0.0;

  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  Rng rng(derive_seed(seed, 0xA11CE01ULL));
  rng.shuffle(perm);
  const int n_val = std::max(1, n / 4);
  std::vector<int> val(perm.begin(), perm.begin() + n_val);
  std::vector<int> train(perm.begin() + n_val, perm.end());

  static constexpr double kGrid[] = {0.5, 0.3, 0.2, 0.1, 0.05, 0.03, 0.02, 0.01};
  double best_lambda = kGrid[0] * lambda_max;
  double best_nll = 0.0;
  bool first = true;
  LassoFit warm;
  for (double frac : kGrid) {
    const double lambda = frac * lambda_max;
    const LassoFit fit = fit_on_rows(design, y, train, lambda, derive_seed(seed, 0xA11CE02ULL), 1e-7,
                                     10000, first ? nullptr : &warm);
    warm = fit;
    const double nll = validation_nll(design, y, val, fit);
    if (first || nll < best_nll) {
      best_nll = nll;
      best_lambda = lambda;
      first = false;
    }
  }
  return best_lambda;
}

WStatistics lasso_logistic_stat(const ColMatrix& x, const ColMatrix& xt, std::span<const int> y,
                                double lambda, std::uint64_t seed) {
  const ColMatrix design = stack_standardized(x, xt);
  if (lambda < 0.0) lambda = choose_lasso_lambda(x, xt, y, seed);
  LassoFit fit = fit_lasso_logistic(design, y, lambda, derive_seed(seed, 0xA11CE03ULL));

  const int p = x.p();
  WStatistics stats;
  stats.kind = StatKind::LassoLogistic;
  stats.w.resize(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) {
    // Bitwise-identical column pairs leave the coefficient split arbitrary
    // along b_j + b_{p+j}; they carry no evidence either way, so pin w to 0.
    const auto a = design.col(j);
    const auto b = design.col(p + j);
    if (std::memcmp(a.data(), b.data(), a.size_bytes()) == 0) {
      stats.w[static_cast<std::size_t>(j)] = 0.0;
      continue;
    }
    stats.w[static_cast<std::size_t>(j)] =
        std::abs(fit.beta[static_cast<std::size_t>(j)]) -
        std::abs(fit.beta[static_cast<std::size_t>(p + j)]);
  }
  return stats;
}

}  // namespace kcc
