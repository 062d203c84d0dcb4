#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "voreal/datasets.hpp"
#include "voreal/genotype.hpp"
#include "voreal/geometry.hpp"

namespace voreal {

enum class Objective {
  Accuracy,
  Recall,
  Specificity,
  Compactness,
  MultCompactness,
  EmptyVolume,
};

const char* to_string(Objective o);

// Ordered, duplicate-free list of active objectives, all maximized.
struct ObjectiveSet {
  std::vector<Objective> ids;

  void validate() const;
  // "a/c", "a/m/t", ... — a=accuracy, r=recall, s=specificity,
  // c=compactness, m=mult_compactness, t=empty_volume. Full names accepted.
  static ObjectiveSet parse(std::string_view text);
  std::string name() const;
};

// Anomaly is the positive class.
struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
};

ConfusionCounts confusion(const Individual& ind, const Dataset& data);

// Accuracy, Recall or Specificity from counts. A zero denominator yields 0;
// metric_degenerate reports that case.
double metric(const ConfusionCounts& counts, Objective which);
bool metric_degenerate(const ConfusionCounts& counts, Objective which);

// Sum over cells with more data points than the dimension of
// hull_volume(D_i) / v_i; zero-volume cells contribute 0.
double compactness(const Individual& ind, const Dataset& data,
                   const BoundingBox& box, const GeomConfig& cfg);

// As compactness, each term weighted by (|D_i| - dim).
double mult_compactness(const Individual& ind, const Dataset& data,
                        const BoundingBox& box, const GeomConfig& cfg);

// Sum over anomaly-labeled cells of v_i / (1 + 2 ln(|D_i| + 1)).
double empty_volume(const Individual& ind, const Dataset& data,
                    const BoundingBox& box, const GeomConfig& cfg);

// Computes the requested objectives, sharing the partition and volumes, and
// caches the result (plus accuracy, which committee selection always needs)
// on the individual with the given generation stamp.
std::vector<double> evaluate(Individual& ind, const Dataset& data,
                             const ObjectiveSet& set, const BoundingBox& box,
                             const GeomConfig& cfg, std::uint64_t stamp = 0);

// Evaluates every individual that has no cached result. Parallel across
// individuals; results land in index order, so the output is bit-identical
// to the serial reference.
void evaluate_population(std::span<Individual> pop, const Dataset& data,
                         const ObjectiveSet& set, const BoundingBox& box,
                         const GeomConfig& cfg, std::uint64_t stamp = 0);
void evaluate_population_serial(std::span<Individual> pop, const Dataset& data,
                                const ObjectiveSet& set, const BoundingBox& box,
                                const GeomConfig& cfg, std::uint64_t stamp = 0);

}  // namespace voreal
