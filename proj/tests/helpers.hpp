#pragma once

// Shared brute-force oracles and small builders for the test suites. These
// stay independent of the library code paths they check: plain loops over
// definitions, no reuse of the kernels under test.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "voreal/bounding_box.hpp"
#include "voreal/genotype.hpp"
#include "voreal/rng.hpp"

namespace test_helpers {

inline voreal::BoundingBox unit_square() {
  return voreal::BoundingBox({0.0, 0.0}, {1.0, 1.0});
}

inline voreal::Site make_site(std::vector<double> coords,
                              voreal::Label label = voreal::Label::Normal) {
  voreal::Site s;
  s.sigmas.assign(coords.size(), 0.1);
  s.coords = std::move(coords);
  s.label = label;
  return s;
}

// Exhaustive distance scan, the definition nearest_site must match.
inline std::size_t brute_nearest(const std::vector<double>& point,
                                 const std::vector<voreal::Site>& sites) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sites.size(); ++i) {
    double d = 0.0;
    for (std::size_t k = 0; k < point.size(); ++k) {
      const double diff = point[k] - sites[i].coords[k];
      d += diff * diff;
    }
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

inline std::vector<voreal::Site> random_sites(std::size_t count, int dim,
                                              voreal::Rng& rng,
                                              double lo = 0.0,
                                              double hi = 1.0) {
  std::vector<voreal::Site> sites;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> c(dim);
    for (int d = 0; d < dim; ++d) c[d] = rng.uniform(lo, hi);
    sites.push_back(make_site(std::move(c), rng.uniform_index(2) == 0
                                                ? voreal::Label::Normal
                                                : voreal::Label::Anomaly));
  }
  return sites;
}

inline std::vector<std::vector<double>> random_points(std::size_t count,
                                                      int dim,
                                                      voreal::Rng& rng,
                                                      double lo = 0.0,
                                                      double hi = 1.0) {
  std::vector<std::vector<double>> pts(count);
  for (auto& p : pts) {
    p.resize(dim);
    for (int d = 0; d < dim; ++d) p[d] = rng.uniform(lo, hi);
  }
  return pts;
}

// Dominance-graph peeling: repeatedly strip the set of vectors not
// dominated by any remaining vector. O(N^2 M) per level, the reference for
// non_dominated_sort.
inline std::vector<std::vector<std::size_t>> peel_fronts(
    const std::vector<std::vector<double>>& objs) {
  auto dominates = [](const std::vector<double>& a,
                      const std::vector<double>& b) {
    bool strict = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] < b[k]) return false;
      if (a[k] > b[k]) strict = true;
    }
    return strict;
  };
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<bool> assigned(objs.size(), false);
  std::size_t remaining = objs.size();
  while (remaining > 0) {
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < objs.size(); ++i) {
      if (assigned[i]) continue;
      bool dominated = false;
      for (std::size_t j = 0; j < objs.size(); ++j) {
        if (j == i || assigned[j]) continue;
        if (dominates(objs[j], objs[i])) {
          dominated = true;
          break;
        }
      }
      if (!dominated) front.push_back(i);
    }
    for (std::size_t i : front) assigned[i] = true;
    remaining -= front.size();
    fronts.push_back(std::move(front));
  }
  return fronts;
}

// Hypervolume dominated by a 2-D maximization front with the origin as
// reference point.
inline double hypervolume_2d(std::vector<std::vector<double>> front) {
  std::sort(front.begin(), front.end(),
            [](const auto& a, const auto& b) { return a[0] > b[0]; });
  double hv = 0.0;
  double prev_y = 0.0;
  for (const auto& p : front) {
    if (p[1] > prev_y) {
      hv += p[0] * (p[1] - prev_y);
      prev_y = p[1];
    }
  }
  return hv;
}

}  // namespace test_helpers
