#ifndef KCC_LINK_HPP
#define KCC_LINK_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "kcc/errors.hpp"

namespace kcc {

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Indices j with beta_j = 0; for a logistic link these are exactly the
// variables with Y independent of X_j given X_{-j}.
class NullSet {
 public:
  NullSet() = default;
  NullSet(std::vector<int> nulls, int p) : nulls_(std::move(nulls)), mask_(p, false) {
    std::sort(nulls_.begin(), nulls_.end());
    for (int j : nulls_) mask_[static_cast<std::size_t>(j)] = true;
  }

  static NullSet from_beta(std::span<const double> beta, double tol = 0.0) {
    std::vector<int> nulls;
    for (std::size_t j = 0; j < beta.size(); ++j) {
      if (std::abs(beta[j]) <= tol) nulls.push_back(static_cast<int>(j));
    }
    return NullSet(std::move(nulls), static_cast<int>(beta.size()));
  }

  bool contains(int j) const { return mask_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& indices() const { return nulls_; }
  int size() const { return static_cast<int>(nulls_.size()); }
  int num_vars() const { return static_cast<int>(mask_.size()); }
  int num_nonnull() const { return num_vars() - size(); }

 private:
  std::vector<int> nulls_;
  std::vector<bool> mask_;
};

// P(Y=1|x) = sigmoid(intercept + beta . code(x)), where state k of a
// variable with K states codes to k - (K-1)/2. Centering the codes keeps the
// intercept in control of prevalence under symmetric covariate structure.
struct LogisticLink {
  double intercept = 0.0;
  std::vector<double> beta;

  static double state_code(int value, int cardinality) {
    return static_cast<double>(value) - 0.5 * static_cast<double>(cardinality - 1);
  }

  double linear_predictor(std::span<const int> x, std::span<const int> cardinalities) const {
    if (x.size() != beta.size() || cardinalities.size() != beta.size()) {
      throw ValidationError("link dimension does not match state");
    }
    double eta = intercept;
    for (std::size_t j = 0; j < beta.size(); ++j) {
      eta += beta[j] * state_code(x[j], cardinalities[j]);
    }
    return eta;
  }

  double prob_case(std::span<const int> x, std::span<const int> cardinalities) const {
    return sigmoid(linear_predictor(x, cardinalities));
  }

  NullSet null_set() const { return NullSet::from_beta(beta); }
};

}  // namespace kcc

#endif
