#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "voreal/geometry.hpp"

using namespace voreal;
using namespace test_helpers;

TEST_CASE("nearest_site basic cases") {
  const std::vector<Site> sites = {make_site({1.0, 0.0}), make_site({0.0, 2.0})};
  const std::vector<double> origin = {0.0, 0.0};
  CHECK(nearest_site(origin, sites) == 0);  // distance 1 < 2

  // Equidistant: lowest index wins.
  const std::vector<Site> pair = {make_site({-1.0, 0.0}), make_site({1.0, 0.0})};
  CHECK(nearest_site(origin, pair) == 0);
}

TEST_CASE("nearest_site rejects an empty diagram") {
  const std::vector<double> p = {0.0, 0.0};
  CHECK_THROWS_WITH_AS(nearest_site(p, {}), "empty diagram",
                       std::invalid_argument);
}

TEST_CASE("nearest_site matches the exhaustive scan") {
  Rng rng(101);
  const auto sites = random_sites(10, 2, rng);
  const auto points = random_points(50, 2, rng);
  for (const auto& p : points)
    CHECK(nearest_site(p, sites) == brute_nearest(p, sites));
}

TEST_CASE("assign_points partitions the data") {
  Rng rng(55);
  const auto sites = random_sites(20, 2, rng);
  const auto points = random_points(200, 2, rng);
  const auto parts = assign_points(points, sites);

  std::size_t total = 0;
  std::vector<bool> seen(points.size(), false);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    total += parts[i].size();
    for (std::size_t idx : parts[i]) {
      CHECK(!seen[idx]);
      seen[idx] = true;
      CHECK(brute_nearest(points[idx], sites) == i);
    }
  }
  CHECK(total == points.size());
}

TEST_CASE("assign_points edge cases") {
  Rng rng(56);
  const auto sites = random_sites(5, 2, rng);
  CHECK(assign_points({}, sites).size() == 5);

  const auto points = random_points(10, 2, rng);
  const std::vector<Site> one = {make_site({0.5, 0.5})};
  const auto parts = assign_points(points, one);
  CHECK(parts[0].size() == points.size());
}

TEST_CASE("parallel assign_points equals the serial reference") {
  Rng rng(57);
  const auto sites = random_sites(15, 2, rng);
  const auto points = random_points(10'000, 2, rng);  // above the omp cutoff
  CHECK(assign_points(points, sites) == assign_points_serial(points, sites));
}

TEST_CASE("cell_volumes_mc single site owns the whole box") {
  const std::vector<Site> one = {make_site({0.3, 0.9})};
  const auto v = cell_volumes_mc(one, unit_square(), 1000, 1);
  CHECK(v.size() == 1);
  CHECK(v[0] == doctest::Approx(1.0));
}

TEST_CASE("cell_volumes_mc mirror symmetry") {
  const std::vector<Site> sites = {make_site({0.25, 0.5}),
                                   make_site({0.75, 0.5})};
  const auto v = cell_volumes_mc(sites, unit_square(), 100'000, 7);
  CHECK(v[0] == doctest::Approx(0.5).epsilon(0.02));
  CHECK(v[1] == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("cell_volumes_mc is deterministic and rejects bad input") {
  const std::vector<Site> sites = {make_site({0.2, 0.2}), make_site({0.8, 0.7})};
  const auto a = cell_volumes_mc(sites, unit_square(), 5000, 99);
  const auto b = cell_volumes_mc(sites, unit_square(), 5000, 99);
  CHECK(a == b);  // bit-identical
  CHECK_THROWS_AS(cell_volumes_mc({}, unit_square(), 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(cell_volumes_mc(sites, unit_square(), 0, 1),
                  std::invalid_argument);
}

TEST_CASE("parallel cell_volumes_mc equals the serial reference") {
  Rng rng(58);
  const auto sites = random_sites(12, 2, rng);
  const auto par = cell_volumes_mc(sites, unit_square(), 50'000, 3);
  const auto ser = cell_volumes_mc_serial(sites, unit_square(), 50'000, 3);
  CHECK(par == ser);  // bit-identical
}

TEST_CASE("mc counts partition the sample set") {
  Rng rng(59);
  const auto sites = random_sites(9, 2, rng);
  const std::size_t n = 20'000;
  const auto v = cell_volumes_mc(sites, unit_square(), n, 17);
  const double sum = std::accumulate(v.begin(), v.end(), 0.0);
  // Every sample lands in exactly one cell; the float sum only carries
  // rounding from the per-cell scaling.
  CHECK(sum == doctest::Approx(unit_square().volume()).epsilon(1e-12));
}

TEST_CASE("exact 2-D volumes: bisector splits the square") {
  const std::vector<Site> sites = {make_site({0.25, 0.5}),
                                   make_site({0.75, 0.5})};
  const auto v = cell_volumes_exact_2d(sites, unit_square());
  CHECK(v[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("exact 2-D volumes: single site and duplicates") {
  const std::vector<Site> one = {make_site({0.1, 0.2})};
  CHECK(cell_volumes_exact_2d(one, unit_square())[0] ==
        doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<Site> dup = {make_site({0.5, 0.5}), make_site({0.5, 0.5})};
  const auto v = cell_volumes_exact_2d(dup, unit_square());
  CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v[1] == 0.0);
}

TEST_CASE("exact 2-D volumes reject other dimensions") {
  const std::vector<Site> sites = {make_site({0.1, 0.2, 0.3})};
  const BoundingBox cube({0, 0, 0}, {1, 1, 1});
  CHECK_THROWS_WITH_AS(cell_volumes_exact_2d(sites, cube),
                       "exact volume only in 2-D", std::invalid_argument);
}

TEST_CASE("exact 2-D areas sum to the box area") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const auto sites = random_sites(8, 2, rng);
    const auto v = cell_volumes_exact_2d(sites, unit_square());
    for (double a : v) CHECK(a >= 0.0);
    const double sum = std::accumulate(v.begin(), v.end(), 0.0);
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
}

TEST_CASE("mc volumes agree with the exact 2-D clipping oracle") {
  Rng rng(1212);
  const auto sites = random_sites(10, 2, rng);
  const auto exact = cell_volumes_exact_2d(sites, unit_square());
  const auto mc = cell_volumes_mc(sites, unit_square(), 200'000, 5);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (exact[i] < 0.01) continue;
    CHECK(std::abs(mc[i] - exact[i]) / exact[i] < 0.02);
  }
}

TEST_CASE("mc error shrinks with the sample count") {
  Rng rng(77);
  const auto sites = random_sites(6, 2, rng);
  const auto exact = cell_volumes_exact_2d(sites, unit_square());
  auto max_err = [&](std::size_t n) {
    const auto mc = cell_volumes_mc(sites, unit_square(), n, 13);
    double worst = 0.0;
    for (std::size_t i = 0; i < sites.size(); ++i)
      if (exact[i] >= 0.01)
        worst = std::max(worst, std::abs(mc[i] - exact[i]) / exact[i]);
    return worst;
  };
  CHECK(max_err(200'000) <= max_err(2'000));
}

TEST_CASE("convex hull: square corners exclude the center") {
  const std::vector<std::array<double, 2>> pts = {
      {0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  const Hull2D hull = convex_hull_2d(pts);
  CHECK(!hull.degenerate);
  CHECK(hull.vertices.size() == 4);
  CHECK(polygon_area(hull.vertices) == doctest::Approx(1.0));
}

TEST_CASE("convex hull: collinear points are degenerate") {
  const std::vector<std::array<double, 2>> pts = {{0, 0}, {1, 1}, {2, 2}};
  CHECK(convex_hull_2d(pts).degenerate);
  CHECK(convex_hull_2d({{0, 0}, {1, 0}}).degenerate);
  CHECK(convex_hull_2d({}).degenerate);
}

TEST_CASE("convex hull contains every input point") {
  Rng rng(31);
  std::vector<std::array<double, 2>> pts(100);
  for (auto& p : pts) p = {rng.uniform(), rng.uniform()};
  const Hull2D hull = convex_hull_2d(pts);
  REQUIRE(!hull.degenerate);

  // Cross-product containment for a CCW polygon, with slack for roundoff.
  for (const auto& p : pts) {
    for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
      const auto& a = hull.vertices[i];
      const auto& b = hull.vertices[(i + 1) % hull.vertices.size()];
      const double c = (b[0] - a[0]) * (p[1] - a[1]) -
                       (b[1] - a[1]) * (p[0] - a[0]);
      CHECK(c >= -1e-12);
    }
  }
}

TEST_CASE("point_in_hull agrees with 2-D geometry") {
  const std::vector<std::vector<double>> tri = {{0, 0}, {1, 0}, {0, 1}};
  CHECK(point_in_hull(std::vector<double>{0.2, 0.2}, tri));
  CHECK(point_in_hull(std::vector<double>{0.0, 0.0}, tri));
  CHECK(!point_in_hull(std::vector<double>{0.7, 0.7}, tri));
  CHECK(!point_in_hull(std::vector<double>{-0.1, 0.0}, tri));
}

TEST_CASE("hull_volume: unit square corners give area 1") {
  const std::vector<std::vector<double>> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(hull_volume(pts, unit_square(), 100, 1) == doctest::Approx(1.0));
}

TEST_CASE("hull_volume: simplex-deficient point sets give 0") {
  // |points| <= dim
  CHECK(hull_volume({{0, 0}, {1, 1}}, unit_square(), 100, 1) == 0.0);
  const BoundingBox cube({0, 0, 0}, {1, 1, 1});
  CHECK(hull_volume({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, cube, 100, 1) == 0.0);
}

TEST_CASE("hull_volume: 3-D cube corners via Monte Carlo") {
  std::vector<std::vector<double>> corners;
  for (int i = 0; i < 8; ++i)
    corners.push_back({double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
  const BoundingBox cube({0, 0, 0}, {1, 1, 1});
  const double v = hull_volume(corners, cube, 200'000, 9);
  CHECK(std::abs(v - 1.0) <= 0.02);
}

TEST_CASE("hull_volume: 3-D half cube") {
  // Prism: x + y <= 1 inside the unit cube; volume 1/2.
  std::vector<std::vector<double>> verts;
  for (double z : {0.0, 1.0}) {
    verts.push_back({0, 0, z});
    verts.push_back({1, 0, z});
    verts.push_back({0, 1, z});
  }
  const BoundingBox cube({0, 0, 0}, {1, 1, 1});
  const double v = hull_volume(verts, cube, 100'000, 21);
  CHECK(v == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("volume_report ties counts, volumes and hulls together") {
  Rng rng(404);
  const auto sites = random_sites(6, 2, rng);
  const auto data = random_points(120, 2, rng);
  const GeomConfig cfg{.n_samples = 10'000, .seed = 77};
  const VolumeReport rep = volume_report(sites, data, unit_square(), cfg);

  CHECK(rep.samples_used == 0);  // exact path in 2-D
  CHECK(std::accumulate(rep.counts.begin(), rep.counts.end(), std::size_t{0}) ==
        data.size());
  const double total =
      std::accumulate(rep.cell_volumes.begin(), rep.cell_volumes.end(), 0.0);
  CHECK(std::abs(total - 1.0) < 1e-9);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    CHECK(rep.hull_volumes[i] <= unit_square().volume());
    if (rep.counts[i] <= 2) CHECK(rep.hull_volumes[i] == 0.0);
  }
}
