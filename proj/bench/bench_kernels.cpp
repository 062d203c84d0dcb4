// Timing comparison of the OpenMP kernels against their serial reference
// implementations: point assignment, Monte Carlo cell volumes and batch
// population evaluation. Each measurement is the best of three after a
// warmup pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "voreal/datasets.hpp"
#include "voreal/geometry.hpp"
#include "voreal/objectives.hpp"
#include "voreal/rng.hpp"

using namespace voreal;

namespace {

double time_best_of(int reps, const std::function<void()>& fn) {
  fn();  // warmup
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    best = std::min(best, s);
  }
  return best;
}

std::vector<Site> random_sites(std::size_t count, int dim, Rng& rng) {
  std::vector<Site> sites(count);
  for (auto& s : sites) {
    s.coords.resize(dim);
    s.sigmas.assign(dim, 0.1);
    for (int d = 0; d < dim; ++d) s.coords[d] = rng.uniform();
    s.label = rng.uniform_index(2) == 0 ? Label::Normal : Label::Anomaly;
  }
  return sites;
}

void report(const char* name, double serial_s, double parallel_s,
            bool identical) {
  std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n",
              name, serial_s, parallel_s, serial_s / parallel_s,
              identical ? "outputs identical" : "OUTPUTS DIFFER");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled; both columns run the serial path\n\n");
#endif

  Rng rng(12345);
  const BoundingBox box({0.0, 0.0}, {1.0, 1.0});

  {
    const auto sites = random_sites(60, 2, rng);
    std::vector<std::vector<double>> data(400'000, std::vector<double>(2));
    for (auto& p : data) {
      p[0] = rng.uniform();
      p[1] = rng.uniform();
    }
    const double ts =
        time_best_of(3, [&] { assign_points_serial(data, sites); });
    const double tp = time_best_of(3, [&] { assign_points(data, sites); });
    report("assign_points (400k x 60)", ts, tp,
           assign_points(data, sites) == assign_points_serial(data, sites));
  }

  {
    const auto sites = random_sites(80, 2, rng);
    const double ts = time_best_of(
        3, [&] { cell_volumes_mc_serial(sites, box, 2'000'000, 7); });
    const double tp =
        time_best_of(3, [&] { cell_volumes_mc(sites, box, 2'000'000, 7); });
    report("cell_volumes_mc (2M x 80)", ts, tp,
           cell_volumes_mc(sites, box, 2'000'000, 7) ==
               cell_volumes_mc_serial(sites, box, 2'000'000, 7));
  }

  {
    GeneratorSpec spec{GeneratorKind::TwoSpiral, 400, 0.2, 3};
    const Dataset train = generate(spec);
    const BoundingBox tbox = BoundingBox::around(train.points, 0.10);
    const ObjectiveSet set = ObjectiveSet::parse("a/m/t");
    const GeomConfig geo{.n_samples = 20'000, .seed = 5};

    std::vector<Individual> pop;
    for (int i = 0; i < 64; ++i)
      pop.push_back(random_individual(2, 20, 100, tbox, 100 + i));

    auto fresh = [&] { return pop; };  // unevaluated copies each round
    const double ts = time_best_of(3, [&] {
      auto p = fresh();
      evaluate_population_serial(p, train, set, tbox, geo);
    });
    const double tp = time_best_of(3, [&] {
      auto p = fresh();
      evaluate_population(p, train, set, tbox, geo);
    });

    auto a = fresh();
    auto b = fresh();
    evaluate_population_serial(a, train, set, tbox, geo);
    evaluate_population(b, train, set, tbox, geo);
    bool identical = true;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].eval->objectives != b[i].eval->objectives) identical = false;
    report("evaluate_population (64)", ts, tp, identical);
  }

  return 0;
}
