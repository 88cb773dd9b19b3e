#include "kcc/gaussian_lda.hpp"

#include <cmath>
#include <cstdio>

#include "kcc/errors.hpp"
#include "kcc/rng.hpp"

namespace kcc {

namespace {

// Coefficients solved from a well-conditioned SPD system land within a few
// ulps of zero at the truly null coordinates; this threshold separates them
// from genuine signals.
constexpr double kNullBetaTolerance = 1e-9;

}  // namespace

GaussianLdaModel::GaussianLdaModel(Eigen::VectorXd mu0, Eigen::VectorXd mu1,
                                   Eigen::MatrixXd sigma, double prevalence)
    : mu0_(std::move(mu0)), mu1_(std::move(mu1)), sigma_(std::move(sigma)),
      prevalence_(prevalence) {
  const auto p = mu0_.size();
  if (mu1_.size() != p || sigma_.rows() != p || sigma_.cols() != p || p < 1) {
    throw ValidationError("LDA model dimensions do not agree");
  }
  if (!(prevalence_ > 0.0 && prevalence_ < 1.0)) {
    throw ValidationError("prevalence must lie in (0, 1)");
  }
  const double scale = std::max(1.0, sigma_.cwiseAbs().maxCoeff());
  if (((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff()) > 1e-12 * scale) {
    throw ValidationError("sigma must be symmetric");
  }
  sigma_ = 0.5 * (sigma_ + sigma_.transpose().eval());

  Eigen::LLT<Eigen::MatrixXd> llt(sigma_);
  if (llt.info() != Eigen::Success) {
    throw ValidationError("sigma must be positive-definite");
  }
  beta_ = llt.solve(mu1_ - mu0_);

  const double ref = std::max(1.0, beta_.cwiseAbs().maxCoeff());
  std::vector<double> b(beta_.data(), beta_.data() + beta_.size());
  nulls_ = NullSet::from_beta(b, kNullBetaTolerance * ref);
}

LdaPopulations lda_populations(const GaussianLdaModel& model) {
  return {model.mu0(), model.mu1(), model.sigma(), model.beta()};
}

LabeledDataset gaussian_retrospective_sample(const GaussianLdaModel& model, double case_fraction,
                                             int n, std::uint64_t seed) {
  if (!(case_fraction > 0.0 && case_fraction < 1.0)) {
    throw ValidationError("case_fraction must lie in (0, 1)");
  }
  if (n < 1) throw ValidationError("sample size must be positive");

  const int p = model.p();
  Eigen::LLT<Eigen::MatrixXd> llt(model.sigma());
  const Eigen::MatrixXd chol = llt.matrixL();
  const int n_cases = static_cast<int>(std::lround(case_fraction * n));

  Rng rng(seed);
  Eigen::MatrixXd rows(n, p);
  std::vector<int> labels(static_cast<std::size_t>(n));
  Eigen::VectorXd z(p);
  for (int i = 0; i < n; ++i) {
    const bool is_case = i < n_cases;
    for (int j = 0; j < p; ++j) z[j] = rng.normal();
    rows.row(i) = ((is_case ? model.mu1() : model.mu0()) + chol * z).transpose();
    labels[static_cast<std::size_t>(i)] = is_case ? 1 : 0;
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  rng.shuffle(perm);

  LabeledDataset data;
  data.x = ColMatrix(n, p);
  data.y.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int src = perm[static_cast<std::size_t>(i)];
    for (int j = 0; j < p; ++j) data.x.at(i, j) = rows(src, j);
    data.y[static_cast<std::size_t>(i)] = labels[static_cast<std::size_t>(src)];
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "retrospective-gaussian:%g", case_fraction);
  data.provenance = buf;
  return data;
}

}  // namespace kcc
