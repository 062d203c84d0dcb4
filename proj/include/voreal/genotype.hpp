#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "voreal/bounding_box.hpp"
#include "voreal/rng.hpp"

namespace voreal {

enum class Label : std::uint8_t { Normal = 0, Anomaly = 1 };

inline Label flip(Label l) {
  return l == Label::Normal ? Label::Anomaly : Label::Normal;
}

const char* to_string(Label l);
Label label_from_string(std::string_view s);  // throws on unknown text

// One Voronoi site: a position, one self-adaptive step size per coordinate,
// and the label given to every point in its cell.
struct Site {
  std::vector<double> coords;
  std::vector<double> sigmas;
  Label label = Label::Normal;
};

// Cached evaluation results. Accuracy is kept even when it is not an active
// objective because committee selection ranks by it.
struct Evaluation {
  std::vector<double> objectives;
  double accuracy = 0.0;
  std::uint64_t stamp = 0;
};

// The genome: a variable-length list of labeled sites. The same object is
// the classifier (nearest-site label). Treated as an immutable value by the
// operators; only the evaluation cache is filled in after construction.
struct Individual {
  std::vector<Site> sites;
  std::optional<Evaluation> eval;

  int dim() const {
    return sites.empty() ? 0 : static_cast<int>(sites.front().coords.size());
  }
};

// Fraction of the per-dimension box extent used for freshly created step
// sizes, and the self-adaptation clamp expressed in the same units.
inline constexpr double kInitialSigmaFrac = 0.10;
inline constexpr double kSigmaMinFrac = 1e-6;
inline constexpr double kSigmaMaxFrac = 1.0;

// One random site: coordinates uniform in the box, label uniform over the
// two classes, sigmas at kInitialSigmaFrac of the box extent.
Site random_site(int dim, const BoundingBox& box, Rng& rng);

// Random individual with a uniform site count in [p_min, p_max].
Individual random_individual(int dim, int p_min, int p_max,
                             const BoundingBox& box, std::uint64_t seed);

// Label of the nearest site (ties to the lowest index).
Label classify(const Individual& ind, std::span<const double> point);

}  // namespace voreal
