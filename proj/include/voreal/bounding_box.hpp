#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace voreal {

// Axis-aligned box on which all volumes are defined. Voronoi cells are
// unbounded, so every volume in the objective functions is measured
// relative to one of these.
struct BoundingBox {
  std::vector<double> lo;
  std::vector<double> hi;

  BoundingBox() = default;

  BoundingBox(std::vector<double> lo_, std::vector<double> hi_)
      : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size() || lo.empty())
      throw std::invalid_argument("bounding box: dimension mismatch");
    for (std::size_t d = 0; d < lo.size(); ++d)
      if (!(lo[d] < hi[d]))
        throw std::invalid_argument("bounding box: lo must be < hi per dimension");
  }

  int dim() const { return static_cast<int>(lo.size()); }

  double extent(int d) const { return hi[d] - lo[d]; }

  double volume() const {
    double v = 1.0;
    for (std::size_t d = 0; d < lo.size(); ++d) v *= hi[d] - lo[d];
    return v;
  }

  double diagonal() const;

  bool contains(std::span<const double> p) const {
    if (p.size() != lo.size()) return false;
    for (std::size_t d = 0; d < lo.size(); ++d)
      if (p[d] < lo[d] || p[d] > hi[d]) return false;
    return true;
  }

  // Axis-aligned bounds of a point set, expanded by pad_frac of the extent
  // on each side. Zero-extent dimensions get a small absolute pad so the
  // box keeps positive volume.
  static BoundingBox around(const std::vector<std::vector<double>>& points,
                            double pad_frac = 0.10);
};

inline double BoundingBox::diagonal() const {
  double s = 0.0;
  for (std::size_t d = 0; d < lo.size(); ++d) {
    const double e = hi[d] - lo[d];
    s += e * e;
  }
  return s > 0.0 ? std::sqrt(s) : 0.0;
}

inline BoundingBox BoundingBox::around(
    const std::vector<std::vector<double>>& points, double pad_frac) {
  if (points.empty()) throw std::invalid_argument("bounding box: no points");
  const std::size_t d = points.front().size();
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (const auto& p : points) {
    if (p.size() != d)
      throw std::invalid_argument("bounding box: ragged point set");
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  }
  for (std::size_t k = 0; k < d; ++k) {
    const double extent = hi[k] - lo[k];
    const double pad = extent > 0.0 ? pad_frac * extent : 1e-6;
    lo[k] -= pad;
    hi[k] += pad;
  }
  return BoundingBox(std::move(lo), std::move(hi));
}

}  // namespace voreal
