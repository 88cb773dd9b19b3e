#ifndef KCC_GAUSSIAN_LDA_HPP
#define KCC_GAUSSIAN_LDA_HPP

#include <Eigen/Dense>
#include <cstdint>

#include "kcc/dataset.hpp"
#include "kcc/link.hpp"

namespace kcc {

// Two-class Gaussian model with shared covariance: X | Y=y ~ N(mu_y, sigma).
// The implied link is logistic with beta = sigma^{-1} (mu1 - mu0), so the
// label conditionals are exactly Gaussian and knockoff reference populations
// have closed form.
class GaussianLdaModel {
 public:
  GaussianLdaModel(Eigen::VectorXd mu0, Eigen::VectorXd mu1, Eigen::MatrixXd sigma,
                   double prevalence);

  int p() const { return static_cast<int>(mu0_.size()); }
  const Eigen::VectorXd& mu0() const { return mu0_; }
  const Eigen::VectorXd& mu1() const { return mu1_; }
  const Eigen::MatrixXd& sigma() const { return sigma_; }
  double prevalence() const { return prevalence_; }

  const Eigen::VectorXd& beta() const { return beta_; }
  const NullSet& nulls() const { return nulls_; }

 private:
  Eigen::VectorXd mu0_, mu1_;
  Eigen::MatrixXd sigma_;
  double prevalence_;
  Eigen::VectorXd beta_;
  NullSet nulls_;
};

struct LdaPopulations {
  Eigen::VectorXd mu_controls;
  Eigen::VectorXd mu_cases;
  Eigen::MatrixXd sigma;
  Eigen::VectorXd beta;
};

// The two exact Gaussian label-conditionals and the implied logistic
// coefficient vector.
LdaPopulations lda_populations(const GaussianLdaModel& model);

// Exact-count case-control draw from the two Gaussians, shuffled by seed.
LabeledDataset gaussian_retrospective_sample(const GaussianLdaModel& model, double case_fraction,
                                             int n, std::uint64_t seed);

}  // namespace kcc

#endif
