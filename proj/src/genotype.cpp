#include "voreal/genotype.hpp"

#include <stdexcept>
#include <string>

#include "voreal/geometry.hpp"

namespace voreal {

const char* to_string(Label l) {
  return l == Label::Normal ? "normal" : "anomaly";
}

Label label_from_string(std::string_view s) {
  if (s == "normal") return Label::Normal;
  if (s == "anomaly") return Label::Anomaly;
  throw std::invalid_argument("unknown label: " + std::string(s));
}

Site random_site(int dim, const BoundingBox& box, Rng& rng) {
  Site s;
  s.coords.resize(dim);
  s.sigmas.resize(dim);
  for (int d = 0; d < dim; ++d) {
    s.coords[d] = rng.uniform(box.lo[d], box.hi[d]);
    s.sigmas[d] = kInitialSigmaFrac * box.extent(d);
  }
  s.label = rng.uniform_index(2) == 0 ? Label::Normal : Label::Anomaly;
  return s;
}

Individual random_individual(int dim, int p_min, int p_max,
                             const BoundingBox& box, std::uint64_t seed) {
  if (p_min < 1) throw std::invalid_argument("p_min must be >= 1");
  if (p_min > p_max) throw std::invalid_argument("p_min must be <= p_max");
  if (dim != box.dim()) throw std::invalid_argument("dimension mismatch");

  Rng rng(seed);
  const int count =
      p_min + static_cast<int>(rng.uniform_index(
                  static_cast<std::size_t>(p_max - p_min) + 1));
  Individual ind;
  ind.sites.reserve(count);
  for (int i = 0; i < count; ++i) ind.sites.push_back(random_site(dim, box, rng));
  return ind;
}

Label classify(const Individual& ind, std::span<const double> point) {
  return ind.sites[nearest_site(point, ind.sites)].label;
}

}  // namespace voreal
