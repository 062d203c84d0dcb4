#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "voreal/bounding_box.hpp"
#include "voreal/genotype.hpp"

namespace voreal {

// {x : normal . x = offset}, |normal| = 1.
struct Hyperplane {
  std::vector<double> normal;
  double offset = 0.0;
};

struct Hull2D {
  std::vector<std::array<double, 2>> vertices;  // counter-clockwise
  bool degenerate = false;  // fewer than 3 non-collinear points
};

// Per-site volume and occupancy summary of one diagram against one point
// set. samples_used is 0 on the exact 2-D path.
struct VolumeReport {
  std::vector<double> cell_volumes;
  std::vector<double> hull_volumes;
  std::vector<std::size_t> counts;
  std::size_t samples_used = 0;
};

// Volume estimation settings. The seed is shared by every individual
// evaluated in one batch (common random numbers), so Pareto comparisons are
// not dominated by estimator noise.
struct GeomConfig {
  std::size_t n_samples = 50'000;
  std::uint64_t seed = 0;
};

// Index of the closest site by Euclidean distance; ties go to the lowest
// index. Throws "empty diagram" on an empty site list.
std::size_t nearest_site(std::span<const double> point,
                         const std::vector<Site>& sites);

// Partition of the data into per-site index lists D_1..D_p.
// assign_points parallelizes over points and is bit-identical to the serial
// reference (each point's owner is independent of every other point's).
std::vector<std::vector<std::size_t>> assign_points(
    const std::vector<std::vector<double>>& data, const std::vector<Site>& sites);
std::vector<std::vector<std::size_t>> assign_points_serial(
    const std::vector<std::vector<double>>& data, const std::vector<Site>& sites);

// Monte Carlo cell volumes: v_i = (samples owned by site i / n_samples) *
// box.volume(). Samples come from a counter-indexed stream (jittered
// stratified grid plus an i.i.d. remainder), so results depend only on
// (seed, n_samples) and the OpenMP kernel reproduces the serial reference
// bit for bit.
std::vector<double> cell_volumes_mc(const std::vector<Site>& sites,
                                    const BoundingBox& box,
                                    std::size_t n_samples, std::uint64_t seed);
std::vector<double> cell_volumes_mc_serial(const std::vector<Site>& sites,
                                           const BoundingBox& box,
                                           std::size_t n_samples,
                                           std::uint64_t seed);

// Exact 2-D cell areas by clipping the box against the perpendicular
// bisector half-planes of every site pair; shoelace area of the result.
// A site that exactly duplicates a lower-indexed one owns an empty cell.
std::vector<double> cell_volumes_exact_2d(const std::vector<Site>& sites,
                                          const BoundingBox& box);

// Monotone-chain convex hull, counter-clockwise, collinear interior points
// excluded. Degenerate (flagged) when fewer than 3 non-collinear points.
Hull2D convex_hull_2d(const std::vector<std::array<double, 2>>& points);

// Signed shoelace area (positive for counter-clockwise rings).
double polygon_area(const std::vector<std::array<double, 2>>& poly);

// Feasibility test: can q be written as a convex combination of pts?
// Solved by a small phase-1 simplex.
bool point_in_hull(std::span<const double> q,
                   const std::vector<std::vector<double>>& pts);

// Volume of the convex hull of a point set, relative to the box:
// 0 when |points| <= dim, exact shoelace area in 2-D, Monte Carlo point-in-
// hull counting otherwise.
double hull_volume(const std::vector<std::vector<double>>& points,
                   const BoundingBox& box, std::size_t n_samples,
                   std::uint64_t seed);

// Everything the volume objectives need in one pass: partition counts, cell
// volumes (exact in 2-D, MC otherwise) and per-cell data hull volumes.
VolumeReport volume_report(const std::vector<Site>& sites,
                           const std::vector<std::vector<double>>& data,
                           const BoundingBox& box, const GeomConfig& cfg,
                           bool with_hulls = true);

}  // namespace voreal
