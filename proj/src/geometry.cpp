#include "voreal/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "voreal/rng.hpp"

namespace voreal {

namespace {

// Contiguous site coordinates for the inner loops.
struct FlatSites {
  std::vector<double> coords;  // count * dim
  std::size_t count = 0;
  int dim = 0;

  explicit FlatSites(const std::vector<Site>& sites) {
    count = sites.size();
    if (count == 0) return;
    dim = static_cast<int>(sites.front().coords.size());
    coords.resize(count * dim);
    for (std::size_t i = 0; i < count; ++i) {
      if (static_cast<int>(sites[i].coords.size()) != dim)
        throw std::invalid_argument("sites disagree on dimension");
      std::memcpy(&coords[i * dim], sites[i].coords.data(),
                  sizeof(double) * dim);
    }
  }

  std::size_t nearest(const double* pt) const {
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    const double* s = coords.data();
    for (std::size_t i = 0; i < count; ++i, s += dim) {
      double d2 = 0.0;
      for (int d = 0; d < dim; ++d) {
        const double diff = pt[d] - s[d];
        d2 += diff * diff;
      }
      if (d2 < best_d2) {  // strict: ties keep the lowest index
        best_d2 = d2;
        best = i;
      }
    }
    return best;
  }
};

bool in_parallel_region() {
#ifdef _OPENMP
  return omp_in_parallel() != 0;
#else
  return false;
#endif
}

// Stratification grid: m cells per dimension with m^dim <= n_samples.
std::size_t strata_per_dim(std::size_t n_samples, int dim) {
  if (dim <= 0) return 1;
  std::size_t m = static_cast<std::size_t>(
      std::floor(std::pow(static_cast<double>(n_samples), 1.0 / dim)));
  if (m < 1) m = 1;
  auto pow_ok = [&](std::size_t mm) {
    double p = 1.0;
    for (int d = 0; d < dim; ++d) p *= static_cast<double>(mm);
    return p <= static_cast<double>(n_samples);
  };
  while (!pow_ok(m) && m > 1) --m;
  while (pow_ok(m + 1)) ++m;
  return m;
}

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Sample j of the shared stream: jittered stratified grid for the first
// m^dim samples, plain uniform for the remainder. Depends only on
// (seed, j), never on evaluation order.
void mc_sample(const BoundingBox& box, std::uint64_t seed, std::size_t j,
               std::size_t m, std::size_t m_pow_dim, double* out) {
  CounterRng rng(seed, j);
  const int dim = box.dim();
  if (j < m_pow_dim) {
    std::size_t idx = j;
    for (int d = 0; d < dim; ++d) {
      const std::size_t cell = idx % m;
      idx /= m;
      const double w = box.extent(d) / static_cast<double>(m);
      out[d] = box.lo[d] + (static_cast<double>(cell) + rng.uniform()) * w;
    }
  } else {
    for (int d = 0; d < dim; ++d)
      out[d] = box.lo[d] + box.extent(d) * rng.uniform();
  }
}

using P2 = std::array<double, 2>;

// Sutherland-Hodgman against the half-plane {p : a*x + b*y <= c}.
std::vector<P2> clip_halfplane(const std::vector<P2>& poly, double a, double b,
                               double c) {
  std::vector<P2> out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const P2& cur = poly[i];
    const P2& nxt = poly[(i + 1) % n];
    const double fc = a * cur[0] + b * cur[1] - c;
    const double fn = a * nxt[0] + b * nxt[1] - c;
    if (fc <= 0.0) out.push_back(cur);
    if ((fc < 0.0 && fn > 0.0) || (fc > 0.0 && fn < 0.0)) {
      const double t = fc / (fc - fn);
      out.push_back({cur[0] + t * (nxt[0] - cur[0]),
                     cur[1] + t * (nxt[1] - cur[1])});
    }
  }
  return out;
}

double cross(const P2& o, const P2& a, const P2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

template <typename CountBody>
std::vector<double> mc_volumes_impl(const std::vector<Site>& sites,
                                    const BoundingBox& box,
                                    std::size_t n_samples, CountBody&& body) {
  if (sites.empty()) throw std::invalid_argument("empty diagram");
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  FlatSites flat(sites);
  if (flat.dim != box.dim())
    throw std::invalid_argument("box/site dimension mismatch");

  const std::size_t m = strata_per_dim(n_samples, flat.dim);
  const std::size_t m_pow = ipow(m, flat.dim);
  std::vector<std::size_t> counts(sites.size(), 0);
  body(flat, m, m_pow, counts);

  const double scale = box.volume() / static_cast<double>(n_samples);
  std::vector<double> v(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i)
    v[i] = static_cast<double>(counts[i]) * scale;
  return v;
}

}  // namespace

std::size_t nearest_site(std::span<const double> point,
                         const std::vector<Site>& sites) {
  if (sites.empty()) throw std::invalid_argument("empty diagram");
  const std::size_t dim = sites.front().coords.size();
  if (point.size() != dim)
    throw std::invalid_argument("point/site dimension mismatch");
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto& c = sites[i].coords;
    if (c.size() != dim) throw std::invalid_argument("sites disagree on dimension");
    double d2 = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = point[d] - c[d];
      d2 += diff * diff;
    }
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

std::vector<std::vector<std::size_t>> assign_points_serial(
    const std::vector<std::vector<double>>& data,
    const std::vector<Site>& sites) {
  if (sites.empty()) throw std::invalid_argument("empty diagram");
  FlatSites flat(sites);
  std::vector<std::vector<std::size_t>> parts(sites.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (static_cast<int>(data[i].size()) != flat.dim)
      throw std::invalid_argument("point/site dimension mismatch");
    parts[flat.nearest(data[i].data())].push_back(i);
  }
  return parts;
}

std::vector<std::vector<std::size_t>> assign_points(
    const std::vector<std::vector<double>>& data,
    const std::vector<Site>& sites) {
  if (data.size() < 4096 || in_parallel_region())
    return assign_points_serial(data, sites);

  if (sites.empty()) throw std::invalid_argument("empty diagram");
  FlatSites flat(sites);
  const std::int64_t n = static_cast<std::int64_t>(data.size());
  std::vector<std::size_t> owner(data.size());
  bool bad_dim = false;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    if (static_cast<int>(data[i].size()) != flat.dim) {
      bad_dim = true;
      continue;
    }
    owner[i] = flat.nearest(data[i].data());
  }
  if (bad_dim) throw std::invalid_argument("point/site dimension mismatch");

  // Bucketing in ascending point order keeps the output identical to the
  // serial reference.
  std::vector<std::vector<std::size_t>> parts(sites.size());
  for (std::size_t i = 0; i < data.size(); ++i) parts[owner[i]].push_back(i);
  return parts;
}

std::vector<double> cell_volumes_mc_serial(const std::vector<Site>& sites,
                                           const BoundingBox& box,
                                           std::size_t n_samples,
                                           std::uint64_t seed) {
  return mc_volumes_impl(
      sites, box, n_samples,
      [&](const FlatSites& flat, std::size_t m, std::size_t m_pow,
          std::vector<std::size_t>& counts) {
        std::vector<double> pt(flat.dim);
        for (std::size_t j = 0; j < n_samples; ++j) {
          mc_sample(box, seed, j, m, m_pow, pt.data());
          ++counts[flat.nearest(pt.data())];
        }
      });
}

std::vector<double> cell_volumes_mc(const std::vector<Site>& sites,
                                    const BoundingBox& box,
                                    std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 16384 || in_parallel_region())
    return cell_volumes_mc_serial(sites, box, n_samples, seed);

  return mc_volumes_impl(
      sites, box, n_samples,
      [&](const FlatSites& flat, std::size_t m, std::size_t m_pow,
          std::vector<std::size_t>& counts) {
        const std::int64_t n = static_cast<std::int64_t>(n_samples);
#pragma omp parallel
        {
          std::vector<std::size_t> local(counts.size(), 0);
          std::vector<double> pt(flat.dim);
#pragma omp for schedule(static)
          for (std::int64_t j = 0; j < n; ++j) {
            mc_sample(box, seed, static_cast<std::size_t>(j), m, m_pow,
                      pt.data());
            ++local[flat.nearest(pt.data())];
          }
#pragma omp critical
          {
            for (std::size_t i = 0; i < counts.size(); ++i)
              counts[i] += local[i];
          }
        }
      });
}

std::vector<double> cell_volumes_exact_2d(const std::vector<Site>& sites,
                                          const BoundingBox& box) {
  if (sites.empty()) throw std::invalid_argument("empty diagram");
  if (box.dim() != 2) throw std::invalid_argument("exact volume only in 2-D");
  for (const auto& s : sites)
    if (s.coords.size() != 2)
      throw std::invalid_argument("exact volume only in 2-D");

  const std::vector<P2> box_poly = {{box.lo[0], box.lo[1]},
                                    {box.hi[0], box.lo[1]},
                                    {box.hi[0], box.hi[1]},
                                    {box.lo[0], box.hi[1]}};
  std::vector<double> vols(sites.size(), 0.0);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const double six = sites[i].coords[0];
    const double siy = sites[i].coords[1];
    std::vector<P2> poly = box_poly;
    for (std::size_t j = 0; j < sites.size() && !poly.empty(); ++j) {
      if (j == i) continue;
      const double sjx = sites[j].coords[0];
      const double sjy = sites[j].coords[1];
      const double dx = sjx - six;
      const double dy = sjy - siy;
      if (dx == 0.0 && dy == 0.0) {
        if (j < i) poly.clear();  // later duplicate owns nothing
        continue;
      }
      // |p - S_i| <= |p - S_j|  <=>  2(S_j - S_i).p <= |S_j|^2 - |S_i|^2
      const double c =
          (sjx * sjx + sjy * sjy) - (six * six + siy * siy);
      poly = clip_halfplane(poly, 2.0 * dx, 2.0 * dy, c);
    }
    vols[i] = poly.empty() ? 0.0 : std::abs(polygon_area(poly));
  }
  return vols;
}

double polygon_area(const std::vector<P2>& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const P2& a = poly[i];
    const P2& b = poly[(i + 1) % n];
    twice += a[0] * b[1] - b[0] * a[1];
  }
  return 0.5 * twice;
}

Hull2D convex_hull_2d(const std::vector<P2>& points) {
  std::vector<P2> pts = points;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return {pts, true};

  std::vector<P2> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {  // upper chain
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) return {hull, true};  // all collinear
  return {hull, false};
}

bool point_in_hull(std::span<const double> q,
                   const std::vector<std::vector<double>>& pts) {
  const int dim = static_cast<int>(q.size());
  const int m = static_cast<int>(pts.size());
  if (m == 0) return false;

  // Phase-1 simplex for: lambda >= 0, sum(lambda_j * p_j) = q, sum(lambda) = 1.
  const int rows = dim + 1;
  const int cols = m + rows;  // original variables + one artificial per row
  std::vector<double> tab(static_cast<std::size_t>(rows + 1) * (cols + 1), 0.0);
  const auto at = [&](int i, int j) -> double& {
    return tab[static_cast<std::size_t>(i) * (cols + 1) + j];
  };

  for (int i = 0; i < rows; ++i) {
    double rhs = (i < dim) ? q[i] : 1.0;
    double sign = rhs < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < m; ++j)
      at(i, j) = sign * ((i < dim) ? pts[j][i] : 1.0);
    at(i, m + i) = 1.0;
    at(i, cols) = sign * rhs;
  }
  // Objective row: reduced costs for minimizing the artificial sum.
  for (int j = 0; j <= cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < rows; ++i) s += at(i, j);
    at(rows, j) = s;
  }
  for (int i = 0; i < rows; ++i) at(rows, m + i) = 0.0;

  std::vector<int> basis(rows);
  for (int i = 0; i < rows; ++i) basis[i] = m + i;

  double scale = 1.0;
  for (int i = 0; i < rows; ++i) scale = std::max(scale, std::abs(at(i, cols)));
  const double eps = 1e-10 * scale;

  const int max_iter = 64 * (rows + m);
  for (int iter = 0; iter < max_iter; ++iter) {
    int pivot_col = -1;  // Bland: first improving column
    for (int j = 0; j < cols; ++j) {
      if (at(rows, j) > eps) {
        pivot_col = j;
        break;
      }
    }
    if (pivot_col < 0) break;

    int pivot_row = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < rows; ++i) {
      const double a = at(i, pivot_col);
      if (a > eps) {
        const double ratio = at(i, cols) / a;
        if (pivot_row < 0 || ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 &&
             basis[i] < basis[pivot_row])) {
          pivot_row = i;
          best_ratio = ratio;
        }
      }
    }
    if (pivot_row < 0) break;  // unbounded cannot occur here; stop defensively

    const double pv = at(pivot_row, pivot_col);
    for (int j = 0; j <= cols; ++j) at(pivot_row, j) /= pv;
    for (int i = 0; i <= rows; ++i) {
      if (i == pivot_row) continue;
      const double f = at(i, pivot_col);
      if (f == 0.0) continue;
      for (int j = 0; j <= cols; ++j) at(i, j) -= f * at(pivot_row, j);
    }
    basis[pivot_row] = pivot_col;
  }
  return at(rows, cols) <= 1e-7 * scale;
}

double hull_volume(const std::vector<std::vector<double>>& points,
                   const BoundingBox& box, std::size_t n_samples,
                   std::uint64_t seed) {
  const int dim = box.dim();
  if (static_cast<int>(points.size()) <= dim) return 0.0;

  if (dim == 2) {
    std::vector<P2> pts(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
      pts[i] = {points[i][0], points[i][1]};
    const Hull2D hull = convex_hull_2d(pts);
    return hull.degenerate ? 0.0 : polygon_area(hull.vertices);
  }

  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");

  // Bounding box of the hull points: cheap reject before the simplex.
  std::vector<double> plo(dim, std::numeric_limits<double>::infinity());
  std::vector<double> phi(dim, -std::numeric_limits<double>::infinity());
  for (const auto& p : points)
    for (int d = 0; d < dim; ++d) {
      plo[d] = std::min(plo[d], p[d]);
      phi[d] = std::max(phi[d], p[d]);
    }

  const std::size_t m = strata_per_dim(n_samples, dim);
  const std::size_t m_pow = ipow(m, dim);
  const std::int64_t n = static_cast<std::int64_t>(n_samples);
  std::int64_t inside = 0;

  const bool parallel = n_samples >= 16384 && !in_parallel_region();
#pragma omp parallel if (parallel)
  {
    std::vector<double> pt(dim);
    std::int64_t local = 0;
#pragma omp for schedule(static)
    for (std::int64_t j = 0; j < n; ++j) {
      mc_sample(box, seed, static_cast<std::size_t>(j), m, m_pow, pt.data());
      bool in_bbox = true;
      for (int d = 0; d < dim; ++d)
        if (pt[d] < plo[d] || pt[d] > phi[d]) {
          in_bbox = false;
          break;
        }
      if (in_bbox && point_in_hull(pt, points)) ++local;
    }
#pragma omp critical
    inside += local;
  }
  return static_cast<double>(inside) * box.volume() /
         static_cast<double>(n_samples);
}

VolumeReport volume_report(const std::vector<Site>& sites,
                           const std::vector<std::vector<double>>& data,
                           const BoundingBox& box, const GeomConfig& cfg,
                           bool with_hulls) {
  VolumeReport rep;
  const auto partition = assign_points(data, sites);
  rep.counts.resize(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i)
    rep.counts[i] = partition[i].size();

  if (box.dim() == 2) {
    rep.cell_volumes = cell_volumes_exact_2d(sites, box);
    rep.samples_used = 0;
  } else {
    rep.cell_volumes = cell_volumes_mc(sites, box, cfg.n_samples, cfg.seed);
    rep.samples_used = cfg.n_samples;
  }

  rep.hull_volumes.assign(sites.size(), 0.0);
  if (with_hulls) {
    const int dim = box.dim();
    for (std::size_t i = 0; i < sites.size(); ++i) {
      if (static_cast<int>(partition[i].size()) <= dim) continue;
      std::vector<std::vector<double>> cell_pts;
      cell_pts.reserve(partition[i].size());
      for (std::size_t idx : partition[i]) cell_pts.push_back(data[idx]);
      rep.hull_volumes[i] = hull_volume(cell_pts, box, cfg.n_samples,
                                        derive_seed(cfg.seed, "hull", i));
    }
  }
  return rep;
}

}  // namespace voreal
