#include "voreal/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "voreal/rng.hpp"

namespace voreal {

namespace {

constexpr double kPi = 3.14159265358979323846;

double dist_to_nearest(const std::vector<std::vector<double>>& pts,
                       std::span<const double> q) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double diff = q[k] - p[k];
      d2 += diff * diff;
    }
    best = std::min(best, d2);
  }
  return std::sqrt(best);
}

bool covered(const std::vector<SphereDetector>& detectors,
             std::span<const double> q) {
  for (const auto& det : detectors) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < det.center.size(); ++k) {
      const double diff = q[k] - det.center[k];
      d2 += diff * diff;
    }
    if (d2 <= det.radius * det.radius) return true;
  }
  return false;
}

}  // namespace

NsaModel nsa_train(const Dataset& train, const NsaParams& params,
                   std::uint64_t seed) {
  if (!(params.self_radius > 0.0))
    throw std::invalid_argument("nsa: self_radius must be > 0");
  std::vector<std::vector<double>> normals;
  for (std::size_t i = 0; i < train.size(); ++i)
    if (train.labels[i] == Label::Normal) normals.push_back(train.points[i]);
  if (normals.empty())
    throw std::invalid_argument("nsa: training set has no normal points");

  NsaModel model;
  model.box = BoundingBox::around(train.points, 0.10);
  const int dim = model.box.dim();

  Rng rng(derive_seed(seed, "nsa"));
  std::deque<bool> window;
  std::size_t window_covered = 0;
  const std::size_t max_candidates =
      std::max<std::size_t>(1'000'000, 2000 * params.max_detectors);

  std::vector<double> cand(dim);
  for (std::size_t tried = 0; tried < max_candidates; ++tried) {
    if (static_cast<int>(model.detectors.size()) >= params.max_detectors) break;
    if (window.size() >= static_cast<std::size_t>(params.coverage_window) &&
        static_cast<double>(window_covered) / window.size() >=
            params.target_coverage)
      break;

    for (int d = 0; d < dim; ++d)
      cand[d] = rng.uniform(model.box.lo[d], model.box.hi[d]);
    const double dmin = dist_to_nearest(normals, cand);
    if (dmin <= params.self_radius) continue;  // inside self, not counted

    const bool is_covered = covered(model.detectors, cand);
    window.push_back(is_covered);
    if (is_covered) ++window_covered;
    while (window.size() > static_cast<std::size_t>(params.coverage_window)) {
      if (window.front()) --window_covered;
      window.pop_front();
    }
    if (is_covered) continue;

    model.detectors.push_back({std::vector<double>(cand.begin(), cand.end()),
                               dmin - params.self_radius});
  }

  // NSA+ enrichment: one detector per training anomaly.
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train.labels[i] != Label::Anomaly) continue;
    const double dmin = dist_to_nearest(normals, train.points[i]);
    const double radius = dmin - params.self_radius;
    if (radius > 0.0) model.detectors.push_back({train.points[i], radius});
  }

  // Post-hoc coverage of the non-self region, measured on the final library.
  Rng est_rng(derive_seed(seed, "nsa-coverage"));
  std::size_t non_self = 0, hit = 0;
  for (std::size_t s = 0; s < params.coverage_samples; ++s) {
    for (int d = 0; d < dim; ++d)
      cand[d] = est_rng.uniform(model.box.lo[d], model.box.hi[d]);
    if (dist_to_nearest(normals, cand) <= params.self_radius) continue;
    ++non_self;
    if (covered(model.detectors, cand)) ++hit;
  }
  model.coverage_estimate =
      non_self == 0 ? 1.0 : static_cast<double>(hit) / non_self;
  return model;
}

Label nsa_classify(const std::vector<SphereDetector>& detectors,
                   std::span<const double> point) {
  return covered(detectors, point) ? Label::Anomaly : Label::Normal;
}

NaiveBayesModel nb_train(const Dataset& train) {
  if (train.size() == 0) throw std::invalid_argument("nb: empty training set");
  const int dim = train.dim;

  std::size_t n_normal = 0, n_anomaly = 0;
  for (Label l : train.labels)
    (l == Label::Normal ? n_normal : n_anomaly) += 1;
  if (n_normal == 0 || n_anomaly == 0)
    throw std::invalid_argument("nb: training set must contain both classes");

  NaiveBayesModel model;
  model.dim = dim;
  model.prior_normal = static_cast<double>(n_normal) / train.size();
  model.prior_anomaly = static_cast<double>(n_anomaly) / train.size();
  model.mean_normal.assign(dim, 0.0);
  model.mean_anomaly.assign(dim, 0.0);
  model.var_normal.assign(dim, 0.0);
  model.var_anomaly.assign(dim, 0.0);

  for (std::size_t i = 0; i < train.size(); ++i) {
    auto& mean = train.labels[i] == Label::Normal ? model.mean_normal
                                                  : model.mean_anomaly;
    for (int d = 0; d < dim; ++d) mean[d] += train.points[i][d];
  }
  for (int d = 0; d < dim; ++d) {
    model.mean_normal[d] /= static_cast<double>(n_normal);
    model.mean_anomaly[d] /= static_cast<double>(n_anomaly);
  }
  for (std::size_t i = 0; i < train.size(); ++i) {
    const bool normal = train.labels[i] == Label::Normal;
    auto& mean = normal ? model.mean_normal : model.mean_anomaly;
    auto& var = normal ? model.var_normal : model.var_anomaly;
    for (int d = 0; d < dim; ++d) {
      const double diff = train.points[i][d] - mean[d];
      var[d] += diff * diff;
    }
  }
  for (int d = 0; d < dim; ++d) {
    model.var_normal[d] =
        std::max(model.var_normal[d] / static_cast<double>(n_normal),
                 kNbVarianceFloor);
    model.var_anomaly[d] =
        std::max(model.var_anomaly[d] / static_cast<double>(n_anomaly),
                 kNbVarianceFloor);
  }
  return model;
}

double nb_log_posterior(const NaiveBayesModel& model,
                        std::span<const double> point, Label cls) {
  const bool normal = cls == Label::Normal;
  const auto& mean = normal ? model.mean_normal : model.mean_anomaly;
  const auto& var = normal ? model.var_normal : model.var_anomaly;
  double lp = std::log(normal ? model.prior_normal : model.prior_anomaly);
  for (int d = 0; d < model.dim; ++d) {
    const double diff = point[d] - mean[d];
    lp += -0.5 * std::log(2.0 * kPi * var[d]) - diff * diff / (2.0 * var[d]);
  }
  return lp;
}

Label nb_classify(const NaiveBayesModel& model, std::span<const double> point) {
  const double la = nb_log_posterior(model, point, Label::Anomaly);
  const double ln = nb_log_posterior(model, point, Label::Normal);
  return la >= ln ? Label::Anomaly : Label::Normal;
}

}  // namespace voreal
