#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "voreal/bounding_box.hpp"
#include "voreal/datasets.hpp"

namespace voreal {

struct SphereDetector {
  std::vector<double> center;
  double radius = 0.0;
};

struct NsaParams {
  double self_radius = 0.0;        // exclusion radius around normal points
  double target_coverage = 0.99;   // stop once non-self space looks covered
  int max_detectors = 1000;
  int coverage_window = 500;       // candidates in the running estimate
  std::size_t coverage_samples = 20'000;  // post-hoc estimate sample count
};

struct NsaModel {
  std::vector<SphereDetector> detectors;
  double coverage_estimate = 0.0;  // measured on the final detector library
  BoundingBox box;
};

// V-detector style negative selection: candidate centers uniform in the
// 10%-expanded training box, rejected inside the self region, radius
// reaching to the nearest normal point minus self_radius. Training anomaly
// points then enrich the library with one detector each (skipped when the
// radius would be non-positive).
NsaModel nsa_train(const Dataset& train, const NsaParams& params,
                   std::uint64_t seed);

// Anomaly iff the point lies inside any detector sphere.
Label nsa_classify(const std::vector<SphereDetector>& detectors,
                   std::span<const double> point);

struct NaiveBayesModel {
  int dim = 0;
  double prior_normal = 0.0;
  double prior_anomaly = 0.0;
  std::vector<double> mean_normal, var_normal;
  std::vector<double> mean_anomaly, var_anomaly;
};

inline constexpr double kNbVarianceFloor = 1e-9;

// Per-class per-dimension Gaussian likelihoods with a variance floor.
// Throws when the training set misses a class.
NaiveBayesModel nb_train(const Dataset& train);

double nb_log_posterior(const NaiveBayesModel& model,
                        std::span<const double> point, Label cls);

// Maximum posterior in log space; exact ties go to Anomaly.
Label nb_classify(const NaiveBayesModel& model, std::span<const double> point);

}  // namespace voreal
