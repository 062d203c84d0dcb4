#include "voreal/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace voreal {

namespace {

bool is_volume_objective(Objective o) {
  return o == Objective::Compactness || o == Objective::MultCompactness ||
         o == Objective::EmptyVolume;
}

bool needs_hulls(Objective o) {
  return o == Objective::Compactness || o == Objective::MultCompactness;
}

double compactness_from(const VolumeReport& rep, int dim) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rep.cell_volumes.size(); ++i) {
    if (static_cast<int>(rep.counts[i]) <= dim) continue;
    if (rep.cell_volumes[i] <= 0.0) continue;
    sum += rep.hull_volumes[i] / rep.cell_volumes[i];
  }
  return sum;
}

double mult_compactness_from(const VolumeReport& rep, int dim) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rep.cell_volumes.size(); ++i) {
    if (static_cast<int>(rep.counts[i]) <= dim) continue;
    if (rep.cell_volumes[i] <= 0.0) continue;
    sum += (static_cast<double>(rep.counts[i]) - dim) * rep.hull_volumes[i] /
           rep.cell_volumes[i];
  }
  return sum;
}

double empty_volume_from(const VolumeReport& rep,
                         const std::vector<Site>& sites) {
  double sum = 0.0;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i].label != Label::Anomaly) continue;
    sum += rep.cell_volumes[i] /
           (1.0 + 2.0 * std::log(static_cast<double>(rep.counts[i]) + 1.0));
  }
  return sum;
}

ConfusionCounts confusion_from_partition(
    const std::vector<std::vector<std::size_t>>& partition,
    const std::vector<Site>& sites, const Dataset& data) {
  ConfusionCounts c;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const bool predicted_anomaly = sites[i].label == Label::Anomaly;
    for (std::size_t idx : partition[i]) {
      const bool is_anomaly = data.labels[idx] == Label::Anomaly;
      if (predicted_anomaly)
        is_anomaly ? ++c.tp : ++c.fp;
      else
        is_anomaly ? ++c.fn : ++c.tn;
    }
  }
  return c;
}

}  // namespace

const char* to_string(Objective o) {
  switch (o) {
    case Objective::Accuracy: return "accuracy";
    case Objective::Recall: return "recall";
    case Objective::Specificity: return "specificity";
    case Objective::Compactness: return "compactness";
    case Objective::MultCompactness: return "mult_compactness";
    case Objective::EmptyVolume: return "empty_volume";
  }
  throw std::invalid_argument("unknown objective");
}

void ObjectiveSet::validate() const {
  if (ids.empty()) throw std::invalid_argument("objective set is empty");
  std::set<Objective> seen;
  for (Objective o : ids)
    if (!seen.insert(o).second)
      throw std::invalid_argument("duplicate objective in set");
}

ObjectiveSet ObjectiveSet::parse(std::string_view text) {
  ObjectiveSet set;
  std::string token;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, token, '/')) {
    if (token == "a" || token == "accuracy")
      set.ids.push_back(Objective::Accuracy);
    else if (token == "r" || token == "recall")
      set.ids.push_back(Objective::Recall);
    else if (token == "s" || token == "specificity")
      set.ids.push_back(Objective::Specificity);
    else if (token == "c" || token == "compactness")
      set.ids.push_back(Objective::Compactness);
    else if (token == "m" || token == "mult_compactness")
      set.ids.push_back(Objective::MultCompactness);
    else if (token == "t" || token == "empty_volume")
      set.ids.push_back(Objective::EmptyVolume);
    else
      throw std::invalid_argument("unknown objective token: " + token);
  }
  set.validate();
  return set;
}

std::string ObjectiveSet::name() const {
  std::string out;
  for (Objective o : ids) {
    if (!out.empty()) out += '/';
    switch (o) {
      case Objective::Accuracy: out += 'a'; break;
      case Objective::Recall: out += 'r'; break;
      case Objective::Specificity: out += 's'; break;
      case Objective::Compactness: out += 'c'; break;
      case Objective::MultCompactness: out += 'm'; break;
      case Objective::EmptyVolume: out += 't'; break;
    }
  }
  return out;
}

ConfusionCounts confusion(const Individual& ind, const Dataset& data) {
  if (data.size() == 0) throw std::invalid_argument("empty dataset");
  const auto partition = assign_points(data.points, ind.sites);
  return confusion_from_partition(partition, ind.sites, data);
}

double metric(const ConfusionCounts& c, Objective which) {
  switch (which) {
    case Objective::Accuracy: {
      const std::int64_t n = c.total();
      return n == 0 ? 0.0 : static_cast<double>(c.tp + c.tn) / n;
    }
    case Objective::Recall: {
      const std::int64_t pos = c.tp + c.fn;
      return pos == 0 ? 0.0 : static_cast<double>(c.tp) / pos;
    }
    case Objective::Specificity: {
      const std::int64_t neg = c.tn + c.fp;
      return neg == 0 ? 0.0 : static_cast<double>(c.tn) / neg;
    }
    default:
      throw std::invalid_argument("not a classification metric");
  }
}

bool metric_degenerate(const ConfusionCounts& c, Objective which) {
  switch (which) {
    case Objective::Accuracy: return c.total() == 0;
    case Objective::Recall: return c.tp + c.fn == 0;
    case Objective::Specificity: return c.tn + c.fp == 0;
    default:
      throw std::invalid_argument("not a classification metric");
  }
}

double compactness(const Individual& ind, const Dataset& data,
                   const BoundingBox& box, const GeomConfig& cfg) {
  return compactness_from(volume_report(ind.sites, data.points, box, cfg),
                          box.dim());
}

double mult_compactness(const Individual& ind, const Dataset& data,
                        const BoundingBox& box, const GeomConfig& cfg) {
  return mult_compactness_from(volume_report(ind.sites, data.points, box, cfg),
                               box.dim());
}

double empty_volume(const Individual& ind, const Dataset& data,
                    const BoundingBox& box, const GeomConfig& cfg) {
  return empty_volume_from(
      volume_report(ind.sites, data.points, box, cfg, /*with_hulls=*/false),
      ind.sites);
}

std::vector<double> evaluate(Individual& ind, const Dataset& data,
                             const ObjectiveSet& set, const BoundingBox& box,
                             const GeomConfig& cfg, std::uint64_t stamp) {
  set.validate();
  if (data.size() == 0) throw std::invalid_argument("empty dataset");
  if (ind.sites.empty()) throw std::invalid_argument("empty diagram");

  bool want_volumes = false;
  bool want_hulls = false;
  for (Objective o : set.ids) {
    want_volumes |= is_volume_objective(o);
    want_hulls |= needs_hulls(o);
  }

  const auto partition = assign_points(data.points, ind.sites);
  const ConfusionCounts conf =
      confusion_from_partition(partition, ind.sites, data);

  VolumeReport rep;
  if (want_volumes) {
    rep = volume_report(ind.sites, data.points, box, cfg, want_hulls);
  }

  std::vector<double> values;
  values.reserve(set.ids.size());
  for (Objective o : set.ids) {
    double v = 0.0;
    switch (o) {
      case Objective::Accuracy:
      case Objective::Recall:
      case Objective::Specificity:
        v = metric(conf, o);
        break;
      case Objective::Compactness:
        v = compactness_from(rep, box.dim());
        break;
      case Objective::MultCompactness:
        v = mult_compactness_from(rep, box.dim());
        break;
      case Objective::EmptyVolume:
        v = empty_volume_from(rep, ind.sites);
        break;
    }
    if (!std::isfinite(v))
      throw std::logic_error("non-finite objective value");
    values.push_back(v);
  }

  Evaluation ev;
  ev.objectives = values;
  ev.accuracy = metric(conf, Objective::Accuracy);
  ev.stamp = stamp;
  ind.eval = std::move(ev);
  return values;
}

void evaluate_population_serial(std::span<Individual> pop, const Dataset& data,
                                const ObjectiveSet& set, const BoundingBox& box,
                                const GeomConfig& cfg, std::uint64_t stamp) {
  for (Individual& ind : pop)
    if (!ind.eval) evaluate(ind, data, set, box, cfg, stamp);
}

void evaluate_population(std::span<Individual> pop, const Dataset& data,
                         const ObjectiveSet& set, const BoundingBox& box,
                         const GeomConfig& cfg, std::uint64_t stamp) {
  set.validate();
  if (data.size() == 0) throw std::invalid_argument("empty dataset");
  const std::int64_t n = static_cast<std::int64_t>(pop.size());
  std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      if (!pop[i].eval) evaluate(pop[i], data, set, box, cfg, stamp);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace voreal
