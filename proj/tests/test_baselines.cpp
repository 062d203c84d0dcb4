#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "voreal/baselines.hpp"

using namespace voreal;
using namespace test_helpers;

namespace {

Dataset blob_dataset(std::uint64_t seed, int n_normal = 150, int n_anom = 30) {
  // Normal blob in the lower-left, anomalies upper-right.
  Dataset ds;
  ds.dim = 2;
  Rng rng(seed);
  for (int i = 0; i < n_normal; ++i) {
    ds.points.push_back({rng.uniform(0.0, 0.4), rng.uniform(0.0, 0.4)});
    ds.labels.push_back(Label::Normal);
  }
  for (int i = 0; i < n_anom; ++i) {
    ds.points.push_back({rng.uniform(0.7, 1.0), rng.uniform(0.7, 1.0)});
    ds.labels.push_back(Label::Anomaly);
  }
  return ds;
}

}  // namespace

TEST_CASE("nsa detectors avoid the self region") {
  const Dataset train = blob_dataset(10);
  NsaParams params;
  params.self_radius = 0.05;
  params.max_detectors = 200;
  const NsaModel model = nsa_train(train, params, 3);
  REQUIRE(!model.detectors.empty());

  for (const auto& det : model.detectors) {
    CHECK(det.radius > 0.0);
    double min_d = 1e300;
    for (std::size_t i = 0; i < train.size(); ++i) {
      if (train.labels[i] != Label::Normal) continue;
      const double dx = det.center[0] - train.points[i][0];
      const double dy = det.center[1] - train.points[i][1];
      min_d = std::min(min_d, std::sqrt(dx * dx + dy * dy));
    }
    // Center clear of self, and the sphere kisses no normal point.
    CHECK(min_d > params.self_radius);
    CHECK(det.radius <= min_d - params.self_radius + 1e-12);
  }
}

TEST_CASE("no detector sphere contains a normal training point") {
  const Dataset train = blob_dataset(11);
  NsaParams params;
  params.self_radius = 0.04;
  const NsaModel model = nsa_train(train, params, 4);
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train.labels[i] != Label::Normal) continue;
    CHECK(nsa_classify(model.detectors, train.points[i]) == Label::Normal);
  }
}

TEST_CASE("nsa coverage estimate agrees with an independent remeasurement") {
  const Dataset train = blob_dataset(12);
  NsaParams params;
  params.self_radius = 0.05;
  params.max_detectors = 400;
  const NsaModel model = nsa_train(train, params, 5);

  // Fresh sampling stream, same measurement definition.
  Rng rng(999);
  std::size_t non_self = 0, hit = 0;
  for (int s = 0; s < 20'000; ++s) {
    std::vector<double> q = {rng.uniform(model.box.lo[0], model.box.hi[0]),
                             rng.uniform(model.box.lo[1], model.box.hi[1])};
    double min_d = 1e300;
    for (std::size_t i = 0; i < train.size(); ++i) {
      if (train.labels[i] != Label::Normal) continue;
      const double dx = q[0] - train.points[i][0];
      const double dy = q[1] - train.points[i][1];
      min_d = std::min(min_d, std::sqrt(dx * dx + dy * dy));
    }
    if (min_d <= params.self_radius) continue;
    ++non_self;
    if (nsa_classify(model.detectors, q) == Label::Anomaly) ++hit;
  }
  REQUIRE(non_self > 0);
  const double remeasured = static_cast<double>(hit) / non_self;
  CHECK(std::abs(remeasured - model.coverage_estimate) < 0.02);
}

TEST_CASE("nsa training demands normal points") {
  Dataset ds;
  ds.dim = 2;
  ds.points = {{0.1, 0.1}};
  ds.labels = {Label::Anomaly};
  NsaParams params;
  params.self_radius = 0.05;
  CHECK_THROWS_AS(nsa_train(ds, params, 1), std::invalid_argument);
}

TEST_CASE("nsa_classify basics and brute-force agreement") {
  CHECK(nsa_classify({}, std::vector<double>{0.5, 0.5}) == Label::Normal);

  std::vector<SphereDetector> dets = {{{0.5, 0.5}, 0.2}, {{0.1, 0.9}, 0.05}};
  CHECK(nsa_classify(dets, std::vector<double>{0.5, 0.5}) == Label::Anomaly);

  Rng rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const std::vector<double> q = {rng.uniform(), rng.uniform()};
    bool inside = false;
    for (const auto& d : dets) {
      const double dx = q[0] - d.center[0];
      const double dy = q[1] - d.center[1];
      if (std::sqrt(dx * dx + dy * dy) <= d.radius) inside = true;
    }
    CHECK(nsa_classify(dets, q) == (inside ? Label::Anomaly : Label::Normal));
  }
}

TEST_CASE("naive bayes separates two 1-D gaussians at the midpoint") {
  Dataset ds;
  ds.dim = 1;
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    ds.points.push_back({-2.0 + 0.3 * rng.normal()});
    ds.labels.push_back(Label::Normal);
    ds.points.push_back({2.0 + 0.3 * rng.normal()});
    ds.labels.push_back(Label::Anomaly);
  }
  const NaiveBayesModel model = nb_train(ds);
  CHECK(nb_classify(model, std::vector<double>{-1.5}) == Label::Normal);
  CHECK(nb_classify(model, std::vector<double>{1.5}) == Label::Anomaly);
}

TEST_CASE("naive bayes tie at the symmetry center goes to Anomaly") {
  // Perfectly symmetric classes around 0 with equal priors.
  Dataset ds;
  ds.dim = 1;
  for (double x : {1.0, 2.0, 3.0}) {
    ds.points.push_back({-x});
    ds.labels.push_back(Label::Normal);
    ds.points.push_back({x});
    ds.labels.push_back(Label::Anomaly);
  }
  const NaiveBayesModel model = nb_train(ds);
  CHECK(model.prior_normal == doctest::Approx(0.5));
  CHECK(nb_classify(model, std::vector<double>{0.0}) == Label::Anomaly);
}

TEST_CASE("log-space posterior equals the direct probability computation") {
  const Dataset ds = blob_dataset(22, 60, 40);
  const NaiveBayesModel model = nb_train(ds);

  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> q = {rng.uniform(), rng.uniform()};
    const double la = nb_log_posterior(model, q, Label::Anomaly);
    const double ln = nb_log_posterior(model, q, Label::Normal);
    const double log_norm_post = la - std::log(std::exp(la) + std::exp(ln));

    auto direct_density = [&](const std::vector<double>& mean,
                              const std::vector<double>& var, double prior) {
      double p = prior;
      for (int d = 0; d < 2; ++d) {
        const double diff = q[d] - mean[d];
        p *= std::exp(-diff * diff / (2.0 * var[d])) /
             std::sqrt(2.0 * 3.14159265358979323846 * var[d]);
      }
      return p;
    };
    const double pa =
        direct_density(model.mean_anomaly, model.var_anomaly, model.prior_anomaly);
    const double pn =
        direct_density(model.mean_normal, model.var_normal, model.prior_normal);
    CHECK(std::exp(log_norm_post) ==
          doctest::Approx(pa / (pa + pn)).epsilon(1e-9));
  }
}

TEST_CASE("classification is invariant under shared likelihood rescaling") {
  // Scaling both class priors by the same factor shifts both log posteriors
  // equally, so the argmax cannot move.
  const Dataset ds = blob_dataset(24, 80, 40);
  NaiveBayesModel model = nb_train(ds);
  NaiveBayesModel scaled = model;
  scaled.prior_normal *= 3.7;
  scaled.prior_anomaly *= 3.7;

  Rng rng(25);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<double> q = {rng.uniform(-1.0, 2.0),
                                   rng.uniform(-1.0, 2.0)};
    CHECK(nb_classify(model, q) == nb_classify(scaled, q));
  }
}

TEST_CASE("naive bayes rejects single-class training data") {
  Dataset ds;
  ds.dim = 1;
  ds.points = {{0.0}, {1.0}};
  ds.labels = {Label::Normal, Label::Normal};
  CHECK_THROWS_AS(nb_train(ds), std::invalid_argument);
}

TEST_CASE("variance floor keeps constant features finite") {
  Dataset ds;
  ds.dim = 2;
  // Second coordinate constant per class.
  ds.points = {{0.0, 5.0}, {0.1, 5.0}, {1.0, 5.0}, {1.1, 5.0}};
  ds.labels = {Label::Normal, Label::Normal, Label::Anomaly, Label::Anomaly};
  const NaiveBayesModel model = nb_train(ds);
  CHECK(model.var_normal[1] == kNbVarianceFloor);
  const double lp = nb_log_posterior(model, std::vector<double>{0.05, 5.0},
                                     Label::Normal);
  CHECK(std::isfinite(lp));
}
