#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "kcc/demo.hpp"
#include "kcc/errors.hpp"
#include "kcc/gaussian_knockoffs.hpp"
#include "kcc/rng.hpp"

using namespace kcc;

TEST_CASE("equicorrelated s: identity covariance") {
  const int p = 6;
  const Eigen::VectorXd s = equicorrelated_s(Eigen::MatrixXd::Identity(p, p));
  for (int j = 0; j < p; ++j) CHECK(s[j] == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("equicorrelated s: 2x2 equicorrelation rho=.5") {
  // eigenvalues of [[1,.5],[.5,1]] are 1.5 and .5, so s = min(2*.5, 1) = 1
  Eigen::MatrixXd sigma(2, 2);
  sigma << 1.0, 0.5, 0.5, 1.0;
  const Eigen::VectorXd s = equicorrelated_s(sigma);
  CHECK(s[0] == doctest::Approx(1.0 * (1.0 - 1e-8)).epsilon(1e-12));
  CHECK(s[1] == doctest::Approx(1.0 * (1.0 - 1e-8)).epsilon(1e-12));
}

TEST_CASE("equicorrelated s: augmented covariance stays PSD") {
  const GaussianLdaModel model = demo_lda_model();
  const Eigen::VectorXd s = equicorrelated_s(model.sigma());
  const GaussianKnockoffSampler sampler(model.mu0(), model.sigma(), s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sampler.augmented_covariance(),
                                                    Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("gaussian knockoffs: identity sigma with full slack is a fresh draw") {
  const int p = 4;
  const Eigen::VectorXd mu = Eigen::VectorXd::Constant(p, 2.0);
  const GaussianKnockoffSampler sampler(mu, Eigen::MatrixXd::Identity(p, p),
                                        Eigen::VectorXd::Ones(p));
  Eigen::VectorXd x(p);
  x << 5.0, -3.0, 0.0, 1.0;
  CHECK((sampler.cond_mean(x) - mu).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((sampler.cond_cov() - Eigen::MatrixXd::Identity(p, p)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gaussian knockoffs: zero slack duplicates x") {
  const int p = 3;
  Eigen::MatrixXd sigma(p, p);
  sigma << 2.0, 0.4, 0.1, 0.4, 1.0, 0.3, 0.1, 0.3, 1.5;
  const GaussianKnockoffSampler sampler(Eigen::VectorXd::Zero(p), sigma,
                                        Eigen::VectorXd::Zero(p));
  Eigen::VectorXd x(p);
  x << 1.0, -2.0, 0.5;
  const Eigen::VectorXd xt = gaussian_sample(sampler, x, 3);
  CHECK((xt - x).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gaussian knockoffs: sampling is deterministic in the seed") {
  const GaussianLdaModel model = demo_lda_model();
  const GaussianKnockoffSampler sampler(model.mu0(), model.sigma(),
                                        equicorrelated_s(model.sigma()));
  Eigen::VectorXd x = Eigen::VectorXd::Constant(model.p(), 0.3);
  const Eigen::VectorXd a = gaussian_sample(sampler, x, 17);
  const Eigen::VectorXd b = gaussian_sample(sampler, x, 17);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gaussian knockoffs: stacked covariance converges to G") {
  const GaussianLdaModel model = demo_lda_model();
  const int p = model.p();
  const GaussianKnockoffSampler sampler(model.mu0(), model.sigma(),
                                        equicorrelated_s(model.sigma()));
  const Eigen::MatrixXd g = sampler.augmented_covariance();

  const int n = 50000;
  Eigen::LLT<Eigen::MatrixXd> llt(model.sigma());
  const Eigen::MatrixXd chol = llt.matrixL();
  Rng rng(2024);
  Eigen::MatrixXd stacked(n, 2 * p);
  Eigen::VectorXd z(p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) z[j] = rng.normal();
    const Eigen::VectorXd x = model.mu0() + chol * z;
    stacked.row(i).head(p) = x.transpose();
    stacked.row(i).tail(p) = sampler.sample(x, rng).transpose();
  }
  const Eigen::RowVectorXd mean = stacked.colwise().mean();
  const Eigen::MatrixXd centered = stacked.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered / (n - 1);
  CHECK((cov - g).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("gaussian knockoffs: input validation") {
  CHECK_THROWS_AS(equicorrelated_s(Eigen::MatrixXd::Zero(2, 2)), ValidationError);
  Eigen::MatrixXd singular(2, 2);
  singular << 1.0, 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(equicorrelated_s(singular), ValidationError);
  CHECK_THROWS_AS(GaussianKnockoffSampler(Eigen::VectorXd::Zero(2),
                                          Eigen::MatrixXd::Identity(2, 2),
                                          -Eigen::VectorXd::Ones(2)),
                  ValidationError);
  // s too large: 2D - D S^{-1} D goes indefinite
  CHECK_THROWS_AS(GaussianKnockoffSampler(Eigen::VectorXd::Zero(2),
                                          Eigen::MatrixXd::Identity(2, 2),
                                          3.0 * Eigen::VectorXd::Ones(2)),
                  ValidationError);
}
