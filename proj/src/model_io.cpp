#include "kcc/model_io.hpp"

#include <fstream>

#include "kcc/errors.hpp"
#include "kcc/util.hpp"

namespace kcc {

namespace {

using nlohmann::json;

std::vector<double> as_vector(const json& v, const char* what) {
  if (!v.is_array()) throw ValidationError(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) throw ValidationError(std::string(what) + " must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Eigen::MatrixXd as_matrix(const json& v, const char* what) {
  if (!v.is_array() || v.empty()) throw ValidationError(std::string(what) + " must be a 2d array");
  const auto rows = v.size();
  const auto cols = v.front().size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto row = as_vector(v[i], what);
    if (row.size() != cols) throw ValidationError(std::string(what) + " rows differ in length");
    for (std::size_t j = 0; j < cols; ++j) m(static_cast<long>(i), static_cast<long>(j)) = row[j];
  }
  return m;
}

ProspectiveModel markov_model_from_json(const json& spec) {
  MarkovChainSpec chain;
  chain.p = spec.at("p").get<int>();
  chain.K = spec.at("K").get<int>();
  chain.init = as_vector(spec.at("init"), "init");
  for (const auto& t : spec.at("transitions")) {
    const Eigen::MatrixXd m = as_matrix(t, "transition");
    if (m.rows() != chain.K || m.cols() != chain.K) {
      throw ValidationError("transition matrices must be K x K");
    }
    std::vector<double> flat(static_cast<std::size_t>(chain.K) * chain.K);
    for (int r = 0; r < chain.K; ++r) {
      for (int c = 0; c < chain.K; ++c) flat[static_cast<std::size_t>(r * chain.K + c)] = m(r, c);
    }
    chain.transitions.push_back(std::move(flat));
  }
  LogisticLink link;
  const json& link_spec = spec.at("link");
  link.intercept = link_spec.at("intercept").get<double>();
  link.beta = as_vector(link_spec.at("beta"), "beta");
  return ProspectiveModel(tabular_from_markov(chain), std::move(link));
}

GaussianLdaModel lda_model_from_json(const json& spec) {
  const auto mu0 = as_vector(spec.at("mu0"), "mu0");
  const auto mu1 = as_vector(spec.at("mu1"), "mu1");
  const Eigen::MatrixXd sigma = as_matrix(spec.at("sigma"), "sigma");
  return GaussianLdaModel(
      Eigen::Map<const Eigen::VectorXd>(mu0.data(), static_cast<long>(mu0.size())),
      Eigen::Map<const Eigen::VectorXd>(mu1.data(), static_cast<long>(mu1.size())), sigma,
      spec.at("prevalence").get<double>());
}

}  // namespace

const ProspectiveModel& LoadedModel::discrete() const {
  if (!is_discrete()) throw ValidationError("operation needs a discrete (markov) model");
  return std::get<ProspectiveModel>(model);
}

const GaussianLdaModel& LoadedModel::lda() const {
  if (is_discrete()) throw ValidationError("operation needs an LDA model");
  return std::get<GaussianLdaModel>(model);
}

LoadedModel load_model_json(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("type")) {
    throw ValidationError("model spec must be an object with a 'type'");
  }
  const std::string type = spec.at("type").get<std::string>();
  LoadedModel loaded{ProspectiveModel{TabularDistribution({2}, {0.5, 0.5}), LogisticLink{0.0, {0.0}}},
                     spec, json_hash(spec)};
  if (type == "markov") {
    loaded.model = markov_model_from_json(spec);
  } else if (type == "lda") {
    loaded.model = lda_model_from_json(spec);
  } else {
    throw ValidationError("unknown model type '" + type + "' (expected markov|lda)");
  }
  return loaded;
}

LoadedModel load_model_file(const std::string& path) {
  return load_model_json(read_json_file(path));
}

nlohmann::json table_to_json(const TabularDistribution& table) {
  return nlohmann::json{{"type", "table"},
                        {"cardinalities", table.codec().cardinalities()},
                        {"probs", std::vector<double>(table.probs().begin(), table.probs().end())}};
}

TabularDistribution table_from_json(const nlohmann::json& spec) {
  if (spec.value("type", "table") != "table") throw ValidationError("not a table spec");
  std::vector<int> cards;
  for (const auto& c : spec.at("cardinalities")) cards.push_back(c.get<int>());
  return TabularDistribution(std::move(cards), as_vector(spec.at("probs"), "probs"));
}

nlohmann::json kernel_to_json(const ConditionalKernel& kernel,
                              const TabularDistribution& reference) {
  const std::size_t n = kernel.num_states();
  std::vector<std::vector<double>> rows(n);
  for (std::size_t x = 0; x < n; ++x) {
    rows[x].assign(kernel.row(x).begin(), kernel.row(x).end());
  }
  return nlohmann::json{{"type", "kernel"},
                        {"cardinalities", kernel.codec.cardinalities()},
                        {"reference", table_to_json(reference)},
                        {"rows", rows}};
}

std::string json_hash(const nlohmann::json& value) {
  return to_hex(fnv1a64(value.dump()));
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("bad JSON in " + path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const nlohmann::json& value) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << value.dump(2) << '\n';
}

}  // namespace kcc
