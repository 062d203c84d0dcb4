#pragma once

#include <filesystem>
#include <span>
#include <variant>

#include <json.hpp>

#include "voreal/baselines.hpp"
#include "voreal/evolution.hpp"
#include "voreal/genotype.hpp"

namespace voreal {

nlohmann::json individual_to_json(const Individual& ind);
Individual individual_from_json(const nlohmann::json& j);

nlohmann::json population_to_json(const std::vector<Individual>& pop);
std::vector<Individual> population_from_json(const nlohmann::json& j);

nlohmann::json committee_to_json(const Committee& c);
Committee committee_from_json(const nlohmann::json& j);

nlohmann::json nsa_to_json(const NsaModel& m);
NsaModel nsa_from_json(const nlohmann::json& j);

nlohmann::json nb_to_json(const NaiveBayesModel& m);
NaiveBayesModel nb_from_json(const nlohmann::json& j);

// Any trained detector behind one classify() surface, so the harness treats
// committees and baselines uniformly. The JSON carries a "type" tag:
// voreal_committee | nsa_sphere | naive_bayes.
struct AnyModel {
  std::variant<Committee, NsaModel, NaiveBayesModel> model;

  Label classify(std::span<const double> point) const;
  nlohmann::json to_json() const;
  static AnyModel from_json(const nlohmann::json& j);
};

void save_model(const AnyModel& m, const std::filesystem::path& path);
AnyModel load_model(const std::filesystem::path& path);

}  // namespace voreal
