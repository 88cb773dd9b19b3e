#ifndef KCC_DEMO_HPP
#define KCC_DEMO_HPP

#include <json.hpp>

#include "kcc/gaussian_lda.hpp"
#include "kcc/population.hpp"

namespace kcc {

// The shipped demo scenarios (also stored under models/): a p=5 binary
// Markov-chain model with two non-null coefficients, and a p=10 LDA model
// with three non-nulls on an identity-plus-equicorrelation covariance.
nlohmann::json demo_discrete_json();
nlohmann::json demo_lda_json();

ProspectiveModel demo_discrete_model();
GaussianLdaModel demo_lda_model();

}  // namespace kcc

#endif
