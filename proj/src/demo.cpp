#include "kcc/demo.hpp"

#include "kcc/model_io.hpp"

namespace kcc {

using nlohmann::json;

json demo_discrete_json() {
  const json transition = {{0.7, 0.3}, {0.25, 0.75}};
  return json{{"type", "markov"},
              {"p", 5},
              {"K", 2},
              {"init", {0.6, 0.4}},
              {"transitions", {transition, transition, transition, transition}},
              {"link", {{"intercept", -0.25}, {"beta", {1.5, 0.0, -1.25, 0.0, 0.0}}}}};
}

json demo_lda_json() {
  const int p = 10;
  std::vector<double> b(p, 0.0);
  b[0] = 0.6;
  b[2] = 0.5;
  b[5] = -0.4;

  // sigma = I + 0.3 * ones
  json sigma = json::array();
  for (int i = 0; i < p; ++i) {
    json row = json::array();
    for (int j = 0; j < p; ++j) row.push_back(i == j ? 1.3 : 0.3);
    sigma.push_back(row);
  }

  // mu1 - mu0 = sigma * b, so the implied beta is exactly the sparse b.
  double sum_b = 0.0;
  for (double v : b) sum_b += v;
  json mu0 = json::array();
  json mu1 = json::array();
  for (int i = 0; i < p; ++i) {
    mu0.push_back(0.0);
    mu1.push_back(b[static_cast<std::size_t>(i)] + 0.3 * sum_b);
  }
  return json{{"type", "lda"},
              {"mu0", mu0},
              {"mu1", mu1},
              {"sigma", sigma},
              {"prevalence", 0.1}};
}

ProspectiveModel demo_discrete_model() {
  return load_model_json(demo_discrete_json()).discrete();
}

GaussianLdaModel demo_lda_model() {
  return load_model_json(demo_lda_json()).lda();
}

}  // namespace kcc
