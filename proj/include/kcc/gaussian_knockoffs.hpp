#ifndef KCC_GAUSSIAN_KNOCKOFFS_HPP
#define KCC_GAUSSIAN_KNOCKOFFS_HPP

#include <Eigen/Dense>
#include <cstdint>

#include "kcc/rng.hpp"

namespace kcc {

// Equicorrelated slack vector: on the correlation scale s = min(2 lambda_min, 1)
// uniformly, rescaled by the diagonal of sigma and shrunk by 1e-8 so the
// augmented covariance stays strictly PSD.
Eigen::VectorXd equicorrelated_s(const Eigen::MatrixXd& sigma);

// Conditional-Gaussian knockoffs for a N(mu, sigma) reference:
//   xt | x ~ N(mu + (I - D S^{-1})(x - mu), 2D - D S^{-1} D),  D = diag(s).
// The stacked vector (x, xt) then has the augmented covariance
// G = [[S, S-D], [S-D, S]].
class GaussianKnockoffSampler {
 public:
  GaussianKnockoffSampler(Eigen::VectorXd mu, Eigen::MatrixXd sigma, Eigen::VectorXd s);

  int p() const { return static_cast<int>(mu_.size()); }
  const Eigen::VectorXd& mu() const { return mu_; }
  const Eigen::MatrixXd& sigma() const { return sigma_; }
  const Eigen::VectorXd& s() const { return s_; }
  const Eigen::MatrixXd& cond_cov() const { return cond_cov_; }

  Eigen::VectorXd cond_mean(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd augmented_covariance() const;

  Eigen::VectorXd sample(const Eigen::VectorXd& x, Rng& rng) const;

 private:
  Eigen::VectorXd mu_;
  Eigen::MatrixXd sigma_;
  Eigen::VectorXd s_;
  Eigen::MatrixXd mean_map_;  // I - D S^{-1}
  Eigen::MatrixXd cond_cov_;
  Eigen::MatrixXd noise_factor_;  // cond_cov = F F^T after eigenvalue clipping
};

Eigen::VectorXd gaussian_sample(const GaussianKnockoffSampler& sampler, const Eigen::VectorXd& x,
                                std::uint64_t seed);

}  // namespace kcc

#endif
