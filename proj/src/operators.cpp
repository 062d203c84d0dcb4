#include "voreal/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace voreal {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_prob(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string(name) + " must be in [0,1]");
}

}  // namespace

void MutationParams::validate() const {
  check_prob(p_site, "p_site");
  check_prob(p_feature, "p_feature");
  check_prob(p_label, "p_label");
  check_prob(p_add, "p_add");
  check_prob(p_remove, "p_remove");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
}

void GenomeBounds::validate() const {
  if (p_min < 1) throw std::invalid_argument("p_min must be >= 1");
  if (p_min > p_max) throw std::invalid_argument("p_min must be <= p_max");
}

SigmaBounds SigmaBounds::from_box(const BoundingBox& box) {
  SigmaBounds b;
  b.lo.resize(box.dim());
  b.hi.resize(box.dim());
  for (int d = 0; d < box.dim(); ++d) {
    b.lo[d] = kSigmaMinFrac * box.extent(d);
    b.hi[d] = kSigmaMaxFrac * box.extent(d);
  }
  return b;
}

std::pair<double, double> self_adaptive_mutate_coord(double x, double sigma,
                                                     double eta, double sig_lo,
                                                     double sig_hi,
                                                     double z_sigma,
                                                     double z_coord) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  const double new_sigma =
      std::clamp(sigma * std::exp(eta * z_sigma), sig_lo, sig_hi);
  return {x + new_sigma * z_coord, new_sigma};
}

std::pair<double, double> self_adaptive_mutate_coord(double x, double sigma,
                                                     double eta, double sig_lo,
                                                     double sig_hi, Rng& rng) {
  const double z_sigma = rng.normal();
  const double z_coord = rng.normal();
  return self_adaptive_mutate_coord(x, sigma, eta, sig_lo, sig_hi, z_sigma,
                                    z_coord);
}

Individual mutate_voronoi(const Individual& ind, const MutationParams& params,
                          const GenomeBounds& bounds, const BoundingBox& box,
                          Rng& rng) {
  params.validate();
  bounds.validate();
  const int dim = box.dim();
  const SigmaBounds sig = SigmaBounds::from_box(box);

  Individual out;
  out.sites = ind.sites;
  for (Site& s : out.sites) {
    if (rng.uniform() >= params.p_site) continue;
    for (int d = 0; d < dim; ++d) {
      if (rng.uniform() < params.p_feature) {
        auto [x, sg] = self_adaptive_mutate_coord(
            s.coords[d], s.sigmas[d], params.eta, sig.lo[d], sig.hi[d], rng);
        s.coords[d] = x;
        s.sigmas[d] = sg;
      }
    }
    if (rng.uniform() < params.p_label) s.label = flip(s.label);
  }

  const bool do_add = rng.uniform() < params.p_add;
  if (do_add && static_cast<int>(out.sites.size()) < bounds.p_max)
    out.sites.push_back(random_site(dim, box, rng));

  const bool do_remove = rng.uniform() < params.p_remove;
  if (do_remove && static_cast<int>(out.sites.size()) > bounds.p_min)
    out.sites.erase(out.sites.begin() +
                    static_cast<std::ptrdiff_t>(rng.uniform_index(out.sites.size())));

  return out;
}

Hyperplane random_hyperplane(const std::vector<Site>& sites_union, Rng& rng) {
  if (sites_union.empty())
    throw std::invalid_argument("random_hyperplane: empty site union");
  const std::size_t dim = sites_union.front().coords.size();

  Hyperplane plane;
  plane.normal.resize(dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      plane.normal[d] = rng.normal();
      norm += plane.normal[d] * plane.normal[d];
    }
    norm = std::sqrt(norm);
  } while (norm == 0.0);
  for (std::size_t d = 0; d < dim; ++d) plane.normal[d] /= norm;

  const Site& through = sites_union[rng.uniform_index(sites_union.size())];
  plane.offset = dot(plane.normal, through.coords);
  return plane;
}

std::pair<std::vector<Site>, std::vector<Site>> split_individual(
    const Individual& ind, const Hyperplane& plane) {
  std::vector<Site> below, above;
  for (const Site& s : ind.sites) {
    if (dot(plane.normal, s.coords) < plane.offset)
      below.push_back(s);
    else
      above.push_back(s);
  }
  return {std::move(below), std::move(above)};
}

namespace {

void repair_size(Individual& ind, const GenomeBounds& bounds, Rng& rng) {
  while (static_cast<int>(ind.sites.size()) > bounds.p_max)
    ind.sites.erase(ind.sites.begin() +
                    static_cast<std::ptrdiff_t>(rng.uniform_index(ind.sites.size())));
  while (static_cast<int>(ind.sites.size()) < bounds.p_min) {
    Site s = ind.sites[rng.uniform_index(ind.sites.size())];
    for (std::size_t d = 0; d < s.coords.size(); ++d)
      s.coords[d] += s.sigmas[d] * rng.normal();
    ind.sites.push_back(std::move(s));
  }
}

}  // namespace

std::pair<Individual, Individual> crossover_voronoi(const Individual& i1,
                                                    const Individual& i2,
                                                    const GenomeBounds& bounds,
                                                    Rng& rng, int max_retries) {
  bounds.validate();
  if (i1.dim() != i2.dim())
    throw std::invalid_argument("crossover: dimension mismatch");

  std::vector<Site> sites_union = i1.sites;
  sites_union.insert(sites_union.end(), i2.sites.begin(), i2.sites.end());

  for (int attempt = 0; attempt < max_retries; ++attempt) {
    const Hyperplane plane = random_hyperplane(sites_union, rng);
    auto [below1, above1] = split_individual(i1, plane);
    auto [below2, above2] = split_individual(i2, plane);
    if (below1.empty() || above1.empty() || below2.empty() || above2.empty())
      continue;

    Individual o1, o2;
    o1.sites = std::move(below1);
    o1.sites.insert(o1.sites.end(), above2.begin(), above2.end());
    o2.sites = std::move(below2);
    o2.sites.insert(o2.sites.end(), above1.begin(), above1.end());
    repair_size(o1, bounds, rng);
    repair_size(o2, bounds, rng);
    return {std::move(o1), std::move(o2)};
  }

  // No separating plane found; hand back the parents (cleared caches).
  Individual c1, c2;
  c1.sites = i1.sites;
  c2.sites = i2.sites;
  return {std::move(c1), std::move(c2)};
}

}  // namespace voreal
