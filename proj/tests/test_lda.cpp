#include <doctest.h>

#include <Eigen/Dense>

#include "kcc/demo.hpp"
#include "kcc/errors.hpp"
#include "kcc/gaussian_lda.hpp"
#include "kcc/rng.hpp"

using namespace kcc;

namespace {

Eigen::MatrixXd random_spd(std::uint64_t seed, int p) {
  Rng rng(seed);
  Eigen::MatrixXd a(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) a(i, j) = rng.normal();
  }
  return a * a.transpose() + static_cast<double>(p) * Eigen::MatrixXd::Identity(p, p);
}

}  // namespace

TEST_CASE("lda: equal means make every variable null") {
  const int p = 4;
  const Eigen::VectorXd mu = Eigen::VectorXd::Constant(p, 1.5);
  GaussianLdaModel model(mu, mu, random_spd(3, p), 0.2);
  CHECK(model.beta().cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(model.nulls().size() == p);
}

TEST_CASE("lda: identity sigma with a unit mean shift") {
  const int p = 5;
  Eigen::VectorXd mu0 = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd mu1 = Eigen::VectorXd::Zero(p);
  mu1[0] = 1.0;
  GaussianLdaModel model(mu0, mu1, Eigen::MatrixXd::Identity(p, p), 0.5);
  CHECK(model.beta()[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (int j = 1; j < p; ++j) CHECK(model.beta()[j] == doctest::Approx(0.0));
  CHECK(model.nulls().size() == p - 1);
  CHECK_FALSE(model.nulls().contains(0));
}

TEST_CASE("lda: sparse coefficients recovered through forward multiplication") {
  // Oracle: pick sparse b, set mu1 - mu0 = sigma * b by direct multiplication,
  // then beta must come back as b.
  const int p = 8;
  const Eigen::MatrixXd sigma = random_spd(17, p);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
  b[1] = 0.7;
  b[4] = -1.2;
  b[6] = 0.3;
  const Eigen::VectorXd mu0 = Eigen::VectorXd::Constant(p, -0.4);
  const Eigen::VectorXd mu1 = mu0 + sigma * b;
  GaussianLdaModel model(mu0, mu1, sigma, 0.15);
  CHECK((model.beta() - b).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(model.nulls().size() == p - 3);
  CHECK_FALSE(model.nulls().contains(1));
  CHECK_FALSE(model.nulls().contains(4));
  CHECK_FALSE(model.nulls().contains(6));

  const LdaPopulations pops = lda_populations(model);
  CHECK(pops.mu_controls == mu0);
  CHECK(pops.mu_cases == mu1);
  CHECK((pops.beta - b).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("lda: invalid inputs") {
  const int p = 3;
  Eigen::MatrixXd singular = Eigen::MatrixXd::Zero(p, p);
  CHECK_THROWS_AS(GaussianLdaModel(Eigen::VectorXd::Zero(p), Eigen::VectorXd::Zero(p), singular,
                                   0.5),
                  ValidationError);
  Eigen::MatrixXd skew = Eigen::MatrixXd::Identity(p, p);
  skew(0, 1) = 0.5;
  CHECK_THROWS_AS(GaussianLdaModel(Eigen::VectorXd::Zero(p), Eigen::VectorXd::Zero(p), skew, 0.5),
                  ValidationError);
  CHECK_THROWS_AS(GaussianLdaModel(Eigen::VectorXd::Zero(p), Eigen::VectorXd::Zero(p),
                                   Eigen::MatrixXd::Identity(p, p), 1.0),
                  ValidationError);
}

TEST_CASE("lda: demo model has the advertised null structure") {
  const GaussianLdaModel model = demo_lda_model();
  CHECK(model.p() == 10);
  CHECK(model.nulls().size() == 7);
  CHECK_FALSE(model.nulls().contains(0));
  CHECK_FALSE(model.nulls().contains(2));
  CHECK_FALSE(model.nulls().contains(5));
  CHECK(model.beta()[0] == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(model.beta()[2] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(model.beta()[5] == doctest::Approx(-0.4).epsilon(1e-9));
}

TEST_CASE("gaussian retrospective sample: counts, reproducibility, moments") {
  const GaussianLdaModel model = demo_lda_model();
  const LabeledDataset data = gaussian_retrospective_sample(model, 0.25, 2000, 99);
  int cases = 0;
  for (int y : data.y) cases += y;
  CHECK(cases == 500);

  const LabeledDataset again = gaussian_retrospective_sample(model, 0.25, 2000, 99);
  for (int i = 0; i < 50; ++i) CHECK(data.x.at(i, 0) == again.x.at(i, 0));

  // control rows should center near mu0 = 0
  double mean0 = 0.0;
  int n0 = 0;
  for (int i = 0; i < data.n(); ++i) {
    if (data.y[static_cast<std::size_t>(i)] == 0) {
      mean0 += data.x.at(i, 0);
      ++n0;
    }
  }
  CHECK(std::abs(mean0 / n0) < 0.15);
}
