#include <doctest.h>

#include <cmath>
#include <set>
#include <string>

#include "helpers.hpp"
#include "voreal/operators.hpp"

using namespace voreal;
using namespace test_helpers;

namespace {

MutationParams zero_params() {
  MutationParams p;
  p.p_site = p.p_feature = p.p_label = p.p_add = p.p_remove = 0.0;
  p.eta = 0.5;
  return p;
}

// Multiset fingerprint of a site list, order-insensitive.
std::multiset<std::string> site_multiset(const std::vector<Site>& sites) {
  std::multiset<std::string> out;
  for (const Site& s : sites) {
    std::string key;
    for (double c : s.coords) key += std::to_string(c) + '|';
    for (double g : s.sigmas) key += std::to_string(g) + '|';
    key += s.label == Label::Normal ? 'n' : 'a';
    out.insert(std::move(key));
  }
  return out;
}

}  // namespace

TEST_CASE("self_adaptive_mutate_coord with zero draws is the identity") {
  const auto [x, sigma] =
      self_adaptive_mutate_coord(1.5, 0.3, 0.5, 1e-9, 10.0, 0.0, 0.0);
  CHECK(x == 1.5);
  CHECK(sigma == 0.3);
}

TEST_CASE("sigma is exactly preserved when the log-normal draw is zero") {
  // exp(eta * 0) = 1 regardless of eta.
  const auto [x, sigma] =
      self_adaptive_mutate_coord(0.0, 0.25, 0.9, 1e-9, 10.0, 0.0, 0.0);
  CHECK(sigma == 0.25);
  CHECK(x == 0.0);
}

TEST_CASE("sigma update is log-normal with the right moments") {
  Rng rng(2024);
  const double eta = 0.5;
  const double sigma0 = 1.0;
  const int n = 100'000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto [x, sigma] =
        self_adaptive_mutate_coord(0.0, sigma0, eta, 1e-12, 1e12, rng);
    (void)x;
    const double lr = std::log(sigma / sigma0);
    sum += lr;
    sum2 += lr * lr;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(sd - eta) < 0.01);
}

TEST_CASE("sigma stays inside its clamp") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const auto [x, sigma] =
        self_adaptive_mutate_coord(0.0, 0.5, 2.0, 0.1, 0.9, rng);
    (void)x;
    CHECK(sigma >= 0.1);
    CHECK(sigma <= 0.9);
  }
}

TEST_CASE("mutation with all probabilities zero is the identity") {
  const auto box = unit_square();
  const Individual ind = random_individual(2, 5, 10, box, 11);
  Rng rng(1);
  const Individual out = mutate_voronoi(ind, zero_params(), {1, 100}, box, rng);
  REQUIRE(out.sites.size() == ind.sites.size());
  for (std::size_t i = 0; i < out.sites.size(); ++i) {
    CHECK(out.sites[i].coords == ind.sites[i].coords);
    CHECK(out.sites[i].sigmas == ind.sites[i].sigmas);
    CHECK(out.sites[i].label == ind.sites[i].label);
  }
  CHECK(!out.eval.has_value());
}

TEST_CASE("removal is skipped at the lower bound") {
  const auto box = unit_square();
  MutationParams p = zero_params();
  p.p_remove = 1.0;
  const GenomeBounds bounds{5, 10};
  const Individual ind = random_individual(2, 5, 5, box, 3);
  Rng rng(9);
  const Individual out = mutate_voronoi(ind, p, bounds, box, rng);
  CHECK(out.sites.size() == 5);
}

TEST_CASE("addition is skipped at the upper bound") {
  const auto box = unit_square();
  MutationParams p = zero_params();
  p.p_add = 1.0;
  const GenomeBounds bounds{1, 6};
  const Individual ind = random_individual(2, 6, 6, box, 3);
  Rng rng(9);
  const Individual out = mutate_voronoi(ind, p, bounds, box, rng);
  CHECK(out.sites.size() == 6);
}

TEST_CASE("paper default parameters are accepted and applied") {
  const MutationParams defaults;  // p_s=.5 p_f=.5 p_t=.1 p_+=.2 p_-=.1 eta=.5
  CHECK(defaults.p_site == 0.5);
  CHECK(defaults.p_feature == 0.5);
  CHECK(defaults.p_label == 0.1);
  CHECK(defaults.p_add == 0.2);
  CHECK(defaults.p_remove == 0.1);
  CHECK(defaults.eta == 0.5);
  CHECK_NOTHROW(defaults.validate());

  const auto box = unit_square();
  const Individual ind = random_individual(2, 20, 40, box, 21);
  Rng rng(22);
  const Individual out = mutate_voronoi(ind, defaults, {20, 100}, box, rng);
  CHECK(out.sites.size() >= 20);
  CHECK(out.sites.size() <= 100);
}

TEST_CASE("mutation is deterministic under a fixed stream") {
  const auto box = unit_square();
  const Individual ind = random_individual(2, 10, 20, box, 4);
  Rng r1(123), r2(123);
  const Individual a = mutate_voronoi(ind, {}, {1, 100}, box, r1);
  const Individual b = mutate_voronoi(ind, {}, {1, 100}, box, r2);
  CHECK(site_multiset(a.sites) == site_multiset(b.sites));
}

TEST_CASE("random_hyperplane has unit normal") {
  Rng rng(88);
  Individual ind;
  ind.sites = random_sites(12, 3, rng, -2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const Hyperplane plane = random_hyperplane(ind.sites, rng);
    double norm = 0.0;
    for (double c : plane.normal) norm += c * c;
    CHECK(std::abs(std::sqrt(norm) - 1.0) < 1e-9);
  }
}

TEST_CASE("random_hyperplane in 1-D gives +/-1") {
  Rng rng(89);
  std::vector<Site> sites = {make_site({0.3}), make_site({0.9})};
  for (int i = 0; i < 50; ++i) {
    const Hyperplane plane = random_hyperplane(sites, rng);
    CHECK(std::abs(std::abs(plane.normal[0]) - 1.0) < 1e-12);
  }
}

TEST_CASE("hyperplane normals are uniform on the sphere") {
  Rng rng(90);
  Individual ind;
  ind.sites = random_sites(5, 3, rng);
  double mx = 0, my = 0, mz = 0;
  const int n = 10'000;
  for (int i = 0; i < n; ++i) {
    const Hyperplane p = random_hyperplane(ind.sites, rng);
    mx += p.normal[0];
    my += p.normal[1];
    mz += p.normal[2];
  }
  const double norm =
      std::sqrt(mx * mx + my * my + mz * mz) / static_cast<double>(n);
  CHECK(norm < 0.05);
}

TEST_CASE("split_individual partitions the sites by side") {
  Rng rng(91);
  Individual ind;
  ind.sites = random_sites(30, 2, rng);
  for (int trial = 0; trial < 20; ++trial) {
    const Hyperplane plane = random_hyperplane(ind.sites, rng);
    const auto [below, above] = split_individual(ind, plane);
    CHECK(below.size() + above.size() == ind.sites.size());
    auto side = [&](const Site& s) {
      double dot = 0.0;
      for (std::size_t k = 0; k < s.coords.size(); ++k)
        dot += plane.normal[k] * s.coords[k];
      return dot;
    };
    for (const Site& s : below) CHECK(side(s) < plane.offset);
    for (const Site& s : above) CHECK(side(s) >= plane.offset);
  }
}

TEST_CASE("split handles one-sided diagrams") {
  Individual ind;
  ind.sites = {make_site({0.1, 0.1}), make_site({0.2, 0.2})};
  Hyperplane plane;
  plane.normal = {1.0, 0.0};
  plane.offset = 5.0;  // everything strictly below
  const auto [below, above] = split_individual(ind, plane);
  CHECK(below.size() == 2);
  CHECK(above.empty());
}

TEST_CASE("crossover conserves the site multiset when no repair fires") {
  Rng rng(4242);
  const GenomeBounds bounds{2, 200};  // wide enough that repair cannot fire
  for (int trial = 0; trial < 50; ++trial) {
    Individual p1, p2;
    p1.sites = random_sites(12 + rng.uniform_index(8), 2, rng);
    p2.sites = random_sites(12 + rng.uniform_index(8), 2, rng);
    auto parents = site_multiset(p1.sites);
    for (const auto& k : site_multiset(p2.sites)) parents.insert(k);

    const auto [o1, o2] = crossover_voronoi(p1, p2, bounds, rng);
    auto children = site_multiset(o1.sites);
    for (const auto& k : site_multiset(o2.sites)) children.insert(k);
    CHECK(parents == children);
  }
}

TEST_CASE("identical spread parents still conserve total site count") {
  Rng rng(4343);
  Individual p;
  p.sites = random_sites(10, 2, rng);
  const auto [o1, o2] = crossover_voronoi(p, p, {2, 100}, rng);
  CHECK(o1.sites.size() + o2.sites.size() == 2 * p.sites.size());
}

TEST_CASE("degenerate parents fall back to copies") {
  Individual p1, p2;
  p1.sites = {make_site({0.5, 0.5}), make_site({0.5, 0.5})};
  p2.sites = {make_site({0.5, 0.5})};
  Rng rng(7);
  const auto [o1, o2] = crossover_voronoi(p1, p2, {1, 100}, rng, 8);
  CHECK(site_multiset(o1.sites) == site_multiset(p1.sites));
  CHECK(site_multiset(o2.sites) == site_multiset(p2.sites));
  CHECK(!o1.eval.has_value());
}

TEST_CASE("crossover repair keeps offspring inside the bounds") {
  Rng rng(505);
  const GenomeBounds bounds{8, 12};
  for (int trial = 0; trial < 200; ++trial) {
    Individual p1, p2;
    p1.sites = random_sites(8 + rng.uniform_index(5), 2, rng);
    p2.sites = random_sites(8 + rng.uniform_index(5), 2, rng);
    const auto [o1, o2] = crossover_voronoi(p1, p2, bounds, rng);
    CHECK(o1.sites.size() >= 8);
    CHECK(o1.sites.size() <= 12);
    CHECK(o2.sites.size() >= 8);
    CHECK(o2.sites.size() <= 12);
  }
}

TEST_CASE("operator chains never violate the site bounds") {
  Rng rng(606);
  const auto box = unit_square();
  const GenomeBounds bounds{4, 16};
  MutationParams params;
  params.p_add = 0.5;
  params.p_remove = 0.5;

  std::vector<Individual> pool;
  for (int i = 0; i < 8; ++i)
    pool.push_back(random_individual(2, 4, 16, box, 1000 + i));

  for (int step = 0; step < 500; ++step) {
    const std::size_t a = rng.uniform_index(pool.size());
    const std::size_t b = rng.uniform_index(pool.size());
    auto [c1, c2] = crossover_voronoi(pool[a], pool[b], bounds, rng);
    c1 = mutate_voronoi(c1, params, bounds, box, rng);
    c2 = mutate_voronoi(c2, params, bounds, box, rng);
    CHECK(c1.sites.size() >= 4);
    CHECK(c1.sites.size() <= 16);
    CHECK(c2.sites.size() >= 4);
    CHECK(c2.sites.size() <= 16);
    pool[a] = std::move(c1);
    pool[b] = std::move(c2);
  }
}

TEST_CASE("parameter validation") {
  MutationParams p;
  p.p_site = 1.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = MutationParams{};
  p.eta = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  GenomeBounds g{0, 5};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}
