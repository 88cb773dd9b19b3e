#ifndef KCC_MODEL_IO_HPP
#define KCC_MODEL_IO_HPP

#include <string>
#include <variant>

#include <json.hpp>

#include "kcc/gaussian_lda.hpp"
#include "kcc/markov.hpp"
#include "kcc/population.hpp"
#include "kcc/scip.hpp"

namespace kcc {

// A model loaded from its JSON spec:
//   {"type":"markov","p":..,"K":..,"init":[..],"transitions":[[[..]]],
//    "link":{"intercept":..,"beta":[..]}}
//   {"type":"lda","mu0":[..],"mu1":[..],"sigma":[[..]],"prevalence":..}
struct LoadedModel {
  std::variant<ProspectiveModel, GaussianLdaModel> model;
  nlohmann::json raw;
  std::string hash;

  bool is_discrete() const { return std::holds_alternative<ProspectiveModel>(model); }
  const ProspectiveModel& discrete() const;
  const GaussianLdaModel& lda() const;
};

LoadedModel load_model_json(const nlohmann::json& spec);
LoadedModel load_model_file(const std::string& path);

nlohmann::json table_to_json(const TabularDistribution& table);
TabularDistribution table_from_json(const nlohmann::json& spec);

nlohmann::json kernel_to_json(const ConditionalKernel& kernel,
                              const TabularDistribution& reference);

std::string json_hash(const nlohmann::json& value);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& value);

}  // namespace kcc

#endif
