#include "kcc/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kcc/errors.hpp"

namespace kcc {

std::string stat_kind_name(StatKind kind) {
  return kind == StatKind::Marginal ? "marginal" : "lasso";
}

StatKind parse_stat_kind(const std::string& text) {
  if (text == "marginal") return StatKind::Marginal;
  if (text == "lasso" || text == "lasso-logistic") return StatKind::LassoLogistic;
  throw ValidationError("unknown statistic '" + text + "' (expected marginal|lasso)");
}

WStatistics marginal_diff_stat(const ColMatrix& x, const ColMatrix& xt,
                               std::span<const int> y) {
  if (x.n() != xt.n() || x.p() != xt.p() || static_cast<int>(y.size()) != x.n()) {
    throw ValidationError("marginal statistic: shapes do not agree");
  }
  const int n = x.n();
  std::vector<double> centered(static_cast<std::size_t>(n));
  double ybar = 0.0;
  for (int i = 0; i < n; ++i) ybar += y[static_cast<std::size_t>(i)];
  ybar /= n;
  for (int i = 0; i < n; ++i) centered[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] - ybar;

  const auto score = [&](std::span<const double> col) {
    double dot = 0.0;
    for (int i = 0; i < n; ++i) dot += col[static_cast<std::size_t>(i)] * centered[static_cast<std::size_t>(i)];
    return std::abs(dot);
  };

  WStatistics stats;
  stats.kind = StatKind::Marginal;
  stats.w.resize(static_cast<std::size_t>(x.p()));
  for (int j = 0; j < x.p(); ++j) {
    stats.w[static_cast<std::size_t>(j)] = score(x.col(j)) - score(xt.col(j));
  }
  return stats;
}

Selection knockoff_threshold(const WStatistics& stats, double q, bool plus) {
  if (!(q > 0.0 && q < 1.0)) throw ValidationError("q must lie in (0, 1)");

  std::vector<double> candidates;
  for (double w : stats.w) {
    if (w != 0.0) candidates.push_back(std::abs(w));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  Selection sel;
  sel.q = q;
  sel.plus = plus;
  sel.tau = std::numeric_limits<double>::infinity();
  const double offset = plus ? 1.0 : 0.0;
  for (double t : candidates) {
    int neg = 0, pos = 0;
    for (double w : stats.w) {
      if (w <= -t) ++neg;
      if (w >= t) ++pos;
    }
    if ((offset + neg) / std::max(1, pos) <= q) {
      sel.tau = t;
      break;
    }
  }
  if (std::isfinite(sel.tau)) {
    for (int j = 0; j < stats.p(); ++j) {
      if (stats.w[static_cast<std::size_t>(j)] >= sel.tau) sel.selected.push_back(j);
    }
  }
  return sel;
}

}  // namespace kcc
