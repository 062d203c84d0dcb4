#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "voreal/datasets.hpp"
#include "voreal/evolution.hpp"
#include "voreal/serialize.hpp"
#include "voreal/stats.hpp"

namespace voreal {

struct DatasetEntry {
  std::string name;  // defaults to the generator kind
  GeneratorSpec spec;
};

// One detector configuration. type selects the branch; the other fields are
// ignored by the branches that do not use them.
struct AlgorithmConfig {
  std::string name;
  std::string type = "voreal";  // voreal | nsa | naive_bayes

  // voreal
  std::string objectives = "a/m/t";
  int pop_size = 100;
  int n_off = 0;  // 0 = same as pop_size
  int generations = 500;
  double mating_prob = 0.5;
  MutationParams mutation;
  GenomeBounds bounds;
  double rho = 0.05;
  std::size_t mc_samples = 50'000;

  // nsa
  double self_radius_frac = 0.02;  // of the training box diagonal
  double target_coverage = 0.99;
  int max_detectors = 1000;
};

struct ExperimentConfig {
  std::vector<DatasetEntry> datasets;
  std::vector<AlgorithmConfig> algorithms;
  int runs = 1;
  std::uint64_t base_seed = 0;
  double alpha = 0.05;
  std::filesystem::path output_dir;
  int test_anomalies = 50;
  double delta_frac = 0.05;  // injection distance, fraction of box diagonal

  void validate() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

AlgorithmConfig algorithm_from_json(const nlohmann::json& j);
GeneratorSpec generator_spec_from_json(const nlohmann::json& j);

struct RunRecord {
  std::string dataset;
  std::string algorithm;
  int run = 0;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  double recall = 0.0;
  double specificity = 0.0;
  double wall_time_s = 0.0;  // recorded in timings.csv, not in records.csv
  std::string status = "ok";
};

// Trains one detector on one training set; the dispatch used by both the
// bench loop and the train subcommand.
AnyModel train_algorithm(const AlgorithmConfig& algo, const Dataset& train,
                         std::uint64_t seed);

// Runs every (dataset, algorithm, run) cell in canonical sorted order,
// appending to <output_dir>/records.csv as it goes. Cells already present
// in the file are skipped, so an interrupted run resumes to a byte-identical
// final file. Training data is shared by all algorithms of a given
// (dataset, run); failures are recorded with an error status instead of
// aborting the batch.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg);

// +/-/~ matrix over algorithms (row vs column), row-major.
struct SignMatrix {
  std::vector<std::string> algorithms;
  std::vector<char> cells;

  char at(std::size_t row, std::size_t col) const {
    return cells[row * algorithms.size() + col];
  }
};

// Per dataset: Friedman across algorithms at level alpha, then pairwise
// two-sided Wilcoxon rank-sum with Holm correction (a documented stand-in
// for the Bergmann-Hommel procedure). '~' everywhere when the Friedman gate
// does not fire.
std::map<std::string, SignMatrix> compare(const std::vector<RunRecord>& records,
                                          const std::string& metric,
                                          double alpha);

// records.csv, summary.json (medians/quartiles per dataset/algorithm),
// stats_<metric>.csv for each matrix set, wins.csv ('+' counts grouped by
// metric and by problem).
void export_results(
    const std::vector<RunRecord>& records,
    const std::map<std::string, std::map<std::string, SignMatrix>>&
        matrices_by_metric,
    const std::filesystem::path& output_dir);

// records.csv helpers (shared by run_experiment, export and the stats CLI).
std::vector<RunRecord> load_records_csv(const std::filesystem::path& path);
void write_records_csv(const std::vector<RunRecord>& records,
                       const std::filesystem::path& path);

}  // namespace voreal
