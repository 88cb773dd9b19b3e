#include "kcc/gaussian_knockoffs.hpp"

#include <cmath>

#include "kcc/errors.hpp"

namespace kcc {

namespace {

constexpr double kPsdSlack = 1e-10;   // tolerated eigenvalue undershoot
constexpr double kShrink = 1.0 - 1e-8;

}  // namespace

Eigen::VectorXd equicorrelated_s(const Eigen::MatrixXd& sigma) {
  const auto p = sigma.rows();
  if (p < 1 || sigma.cols() != p) throw ValidationError("sigma must be square");
  const Eigen::VectorXd d = sigma.diagonal();
  if ((d.array() <= 0.0).any()) throw ValidationError("sigma must have positive diagonal");

  const Eigen::VectorXd inv_sd = d.array().sqrt().inverse();
  const Eigen::MatrixXd corr = inv_sd.asDiagonal() * sigma * inv_sd.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(corr, Eigen::EigenvaluesOnly);
  const double lambda_min = es.eigenvalues().minCoeff();
  if (lambda_min <= 0.0) throw ValidationError("sigma is singular on the correlation scale");

  const double s_corr = std::min(2.0 * lambda_min, 1.0);
  return (kShrink * s_corr) * d;
}

GaussianKnockoffSampler::GaussianKnockoffSampler(Eigen::VectorXd mu, Eigen::MatrixXd sigma,
                                                 Eigen::VectorXd s)
    : mu_(std::move(mu)), sigma_(std::move(sigma)), s_(std::move(s)) {
  const auto p = mu_.size();
  if (sigma_.rows() != p || sigma_.cols() != p || s_.size() != p || p < 1) {
    throw ValidationError("knockoff sampler dimensions do not agree");
  }
  if ((s_.array() < 0.0).any()) throw ValidationError("slack vector must be nonnegative");

  Eigen::LLT<Eigen::MatrixXd> llt(sigma_);
  if (llt.info() != Eigen::Success) throw ValidationError("sigma must be positive-definite");

  // S^{-1} D, column by column.
  const Eigen::MatrixXd sinv_d = llt.solve(Eigen::MatrixXd(s_.asDiagonal()));
  mean_map_ = Eigen::MatrixXd::Identity(p, p) - sinv_d.transpose();
  cond_cov_ = 2.0 * Eigen::MatrixXd(s_.asDiagonal()) -
              s_.asDiagonal() * sinv_d;
  cond_cov_ = 0.5 * (cond_cov_ + cond_cov_.transpose().eval());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cond_cov_);
  Eigen::VectorXd ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (auto i = 0; i < ev.size(); ++i) {
    if (ev[i] < -kPsdSlack * scale) {
      throw ValidationError("conditional knockoff covariance is not PSD");
    }
    ev[i] = std::max(ev[i], 0.0);
  }
  noise_factor_ = es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
}

Eigen::VectorXd GaussianKnockoffSampler::cond_mean(const Eigen::VectorXd& x) const {
  return mu_ + mean_map_ * (x - mu_);
}

Eigen::MatrixXd GaussianKnockoffSampler::augmented_covariance() const {
  const auto p = mu_.size();
  Eigen::MatrixXd g(2 * p, 2 * p);
  const Eigen::MatrixXd off = sigma_ - Eigen::MatrixXd(s_.asDiagonal());
  g.topLeftCorner(p, p) = sigma_;
  g.topRightCorner(p, p) = off;
  g.bottomLeftCorner(p, p) = off;
  g.bottomRightCorner(p, p) = sigma_;
  return g;
}

Eigen::VectorXd GaussianKnockoffSampler::sample(const Eigen::VectorXd& x, Rng& rng) const {
  Eigen::VectorXd z(mu_.size());
  for (auto i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return cond_mean(x) + noise_factor_ * z;
}

Eigen::VectorXd gaussian_sample(const GaussianKnockoffSampler& sampler, const Eigen::VectorXd& x,
                                std::uint64_t seed) {
  Rng rng(seed);
  return sampler.sample(x, rng);
}

}  // namespace kcc
