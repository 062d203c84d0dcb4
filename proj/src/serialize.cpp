#include "voreal/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace voreal {

using nlohmann::json;

json individual_to_json(const Individual& ind) {
  json sites = json::array();
  for (const Site& s : ind.sites) {
    sites.push_back({{"coords", s.coords},
                     {"sigmas", s.sigmas},
                     {"label", to_string(s.label)}});
  }
  return {{"sites", std::move(sites)}};
}

Individual individual_from_json(const json& j) {
  Individual ind;
  for (const auto& js : j.at("sites")) {
    Site s;
    s.coords = js.at("coords").get<std::vector<double>>();
    s.sigmas = js.at("sigmas").get<std::vector<double>>();
    s.label = label_from_string(js.at("label").get<std::string>());
    if (s.coords.size() != s.sigmas.size())
      throw std::runtime_error("site coords/sigmas length mismatch");
    ind.sites.push_back(std::move(s));
  }
  return ind;
}

json population_to_json(const std::vector<Individual>& pop) {
  json arr = json::array();
  for (const auto& ind : pop) arr.push_back(individual_to_json(ind));
  return arr;
}

std::vector<Individual> population_from_json(const json& j) {
  std::vector<Individual> pop;
  for (const auto& ji : j) pop.push_back(individual_from_json(ji));
  return pop;
}

json committee_to_json(const Committee& c) {
  return {{"type", "voreal_committee"},
          {"members", population_to_json(c.members)}};
}

Committee committee_from_json(const json& j) {
  Committee c;
  c.members = population_from_json(j.at("members"));
  return c;
}

json nsa_to_json(const NsaModel& m) {
  json dets = json::array();
  for (const auto& d : m.detectors)
    dets.push_back({{"center", d.center}, {"radius", d.radius}});
  return {{"type", "nsa_sphere"},
          {"detectors", std::move(dets)},
          {"coverage_estimate", m.coverage_estimate},
          {"box", {{"lo", m.box.lo}, {"hi", m.box.hi}}}};
}

NsaModel nsa_from_json(const json& j) {
  NsaModel m;
  for (const auto& jd : j.at("detectors")) {
    SphereDetector d;
    d.center = jd.at("center").get<std::vector<double>>();
    d.radius = jd.at("radius").get<double>();
    m.detectors.push_back(std::move(d));
  }
  m.coverage_estimate = j.value("coverage_estimate", 0.0);
  if (j.contains("box"))
    m.box = BoundingBox(j["box"].at("lo").get<std::vector<double>>(),
                        j["box"].at("hi").get<std::vector<double>>());
  return m;
}

json nb_to_json(const NaiveBayesModel& m) {
  return {{"type", "naive_bayes"},
          {"dim", m.dim},
          {"normal",
           {{"prior", m.prior_normal},
            {"mean", m.mean_normal},
            {"var", m.var_normal}}},
          {"anomaly",
           {{"prior", m.prior_anomaly},
            {"mean", m.mean_anomaly},
            {"var", m.var_anomaly}}}};
}

NaiveBayesModel nb_from_json(const json& j) {
  NaiveBayesModel m;
  m.dim = j.at("dim").get<int>();
  m.prior_normal = j.at("normal").at("prior").get<double>();
  m.mean_normal = j.at("normal").at("mean").get<std::vector<double>>();
  m.var_normal = j.at("normal").at("var").get<std::vector<double>>();
  m.prior_anomaly = j.at("anomaly").at("prior").get<double>();
  m.mean_anomaly = j.at("anomaly").at("mean").get<std::vector<double>>();
  m.var_anomaly = j.at("anomaly").at("var").get<std::vector<double>>();
  return m;
}

Label AnyModel::classify(std::span<const double> point) const {
  return std::visit(
      [&](const auto& m) -> Label {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Committee>)
          return committee_classify(m, point);
        else if constexpr (std::is_same_v<T, NsaModel>)
          return nsa_classify(m.detectors, point);
        else
          return nb_classify(m, point);
      },
      model);
}

json AnyModel::to_json() const {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Committee>)
          return committee_to_json(m);
        else if constexpr (std::is_same_v<T, NsaModel>)
          return nsa_to_json(m);
        else
          return nb_to_json(m);
      },
      model);
}

AnyModel AnyModel::from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "voreal_committee") return {committee_from_json(j)};
  if (type == "nsa_sphere") return {nsa_from_json(j)};
  if (type == "naive_bayes") return {nb_from_json(j)};
  throw std::runtime_error("unknown model type: " + type);
}

void save_model(const AnyModel& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << m.to_json().dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

AnyModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  json j;
  in >> j;
  return AnyModel::from_json(j);
}

}  // namespace voreal
