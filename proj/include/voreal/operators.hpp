#pragma once

#include <utility>
#include <vector>

#include "voreal/genotype.hpp"
#include "voreal/geometry.hpp"
#include "voreal/rng.hpp"

namespace voreal {

struct MutationParams {
  double p_site = 0.5;     // probability of mutating a site
  double p_feature = 0.5;  // per-coordinate probability
  double p_label = 0.1;    // label flip probability
  double p_add = 0.2;      // probability of appending a random site
  double p_remove = 0.1;   // probability of removing a random site
  double eta = 0.5;        // log-normal learning rate

  void validate() const;
};

// Site-count limits of the genome. Adds/removes that would cross them are
// skipped; crossover offspring are repaired back inside them.
struct GenomeBounds {
  int p_min = 20;
  int p_max = 100;

  void validate() const;
};

// Per-dimension clamp for the self-adaptive step sizes, derived from the
// box extents.
struct SigmaBounds {
  std::vector<double> lo;
  std::vector<double> hi;

  static SigmaBounds from_box(const BoundingBox& box);
};

// One coordinate of Eq-style self-adaptive Gaussian mutation: the step size
// is updated first (log-normal, clamped), then the coordinate moves by the
// new step size. The z arguments are the two standard normal draws; the Rng
// overload draws them in that order.
std::pair<double, double> self_adaptive_mutate_coord(double x, double sigma,
                                                     double eta, double sig_lo,
                                                     double sig_hi,
                                                     double z_sigma,
                                                     double z_coord);
std::pair<double, double> self_adaptive_mutate_coord(double x, double sigma,
                                                     double eta, double sig_lo,
                                                     double sig_hi, Rng& rng);

// Whole-diagram mutation: per site, with p_site gate, each coordinate
// mutates with p_feature and the label flips with p_label; then one site may
// be added (p_add) and one removed (p_remove), skipped at the bounds.
// Returns a new individual with a cleared evaluation cache.
Individual mutate_voronoi(const Individual& ind, const MutationParams& params,
                          const GenomeBounds& bounds, const BoundingBox& box,
                          Rng& rng);

// Random cutting hyperplane: direction uniform on the unit sphere, passing
// through a uniformly chosen site of the union.
Hyperplane random_hyperplane(const std::vector<Site>& sites_union, Rng& rng);

// Splits sites by the plane: strictly-below part first, boundary goes above.
std::pair<std::vector<Site>, std::vector<Site>> split_individual(
    const Individual& ind, const Hyperplane& plane);

// Geometric crossover: resample the plane until all four fragments are
// non-empty (at most max_retries times), then swap the halves. Offspring
// outside the site-count bounds are repaired (uniform removal above p_max,
// duplicate-with-jitter below p_min). On retry exhaustion the parents are
// returned unchanged apart from cleared caches.
std::pair<Individual, Individual> crossover_voronoi(const Individual& i1,
                                                    const Individual& i2,
                                                    const GenomeBounds& bounds,
                                                    Rng& rng,
                                                    int max_retries = 32);

}  // namespace voreal
