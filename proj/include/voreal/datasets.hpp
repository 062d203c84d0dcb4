#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "voreal/bounding_box.hpp"
#include "voreal/genotype.hpp"

namespace voreal {

enum class GeneratorKind {
  TwoSpiral,
  CrescentFullMoon,
  HalfKernel,
  Corners,
  Outliers,
  ClusterInCluster,
};

const char* to_string(GeneratorKind k);
GeneratorKind generator_kind_from_string(std::string_view s);  // throws

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::TwoSpiral;
  int n_points = 400;
  double noise = 0.2;  // per-generator jitter scale, see the constants table
  std::uint64_t seed = 0;
};

// Labeled point set. origin is set by generate() and lets the test-set
// builder draw a fresh noise resample of the same generator.
struct Dataset {
  std::vector<std::vector<double>> points;
  std::vector<Label> labels;
  int dim = 0;
  std::string name;
  std::uint64_t seed = 0;
  std::optional<GeneratorSpec> origin;

  std::size_t size() const { return points.size(); }
};

// Deterministic per seed. Classes are imbalanced: 80% Normal, 20% Anomaly.
Dataset generate(const GeneratorSpec& spec);

// Hard analytic bounds of a generator's output (noise draws are truncated,
// so these hold exactly).
BoundingBox generator_bounds(const GeneratorSpec& spec);

struct InjectionReport {
  double final_delta = 0.0;
  int shrink_count = 0;
};

// Test set: a fresh resample of the training generator (or a copy when the
// origin is unknown) plus n_anom anomalies rejection-sampled in the
// 10%-expanded training box, each farther than delta from every training
// point. After 1000 consecutive rejections delta shrinks by x0.9.
Dataset inject_test_anomalies(const Dataset& train, int n_anom, double delta,
                              std::uint64_t seed,
                              InjectionReport* report = nullptr);

// CSV with header x0,...,x{n-1},label. 17 significant digits, so the
// round-trip is bit-exact.
void save_csv(const Dataset& ds, const std::filesystem::path& path);
Dataset load_csv(const std::filesystem::path& path);  // errors carry line numbers

}  // namespace voreal
