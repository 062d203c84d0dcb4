#include "voreal/datasets.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "voreal/rng.hpp"

namespace voreal {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Geometry constants of the six benchmarks. Every generator keeps its
// points inside generator_bounds(): Gaussian draws are truncated at
// +/- kNoiseTrunc sigma.
//
//   two_spiral          r = A*theta, theta in [ThetaMin, ThetaMax]; the
//                       anomaly arm is the normal arm rotated by pi;
//                       coordinate jitter sigma = noise.
//   crescent_full_moon  full moon: uniform disc radius MoonR at the origin;
//                       crescent: annular sector radius [CrescentR0,
//                       CrescentR1], angle [pi/6, 5pi/6]; jitter = noise.
//   half_kernel         two half-rings, angle in [0, pi], radial sigma =
//                       noise; radii HalfKernelRNormal / HalfKernelRAnomaly.
//   corners             four L-shaped strips (arm length CornerArm, width
//                       CornerWidth) hugging the corners of the
//                       [-CornerHalf, CornerHalf] square; anomalies form a
//                       center blob with sigma = noise.
//   outliers            normal blob sigma = OutlierBlobSigma at the origin;
//                       anomalies uniform in the annulus [OutlierR0,
//                       OutlierR1]; jitter = noise.
//   cluster_in_cluster  anomalies uniform in a disc of radius InnerR;
//                       normals in the annulus [AnnulusR0, AnnulusR1];
//                       jitter = noise.
constexpr double kNoiseTrunc = 4.0;
constexpr double kSpiralA = 1.0;
constexpr double kSpiralThetaMin = 0.5 * kPi;
constexpr double kSpiralThetaMax = 3.5 * kPi;
constexpr double kMoonR = 1.0;
constexpr double kCrescentR0 = 1.8;
constexpr double kCrescentR1 = 2.6;
constexpr double kCrescentAngle0 = kPi / 6.0;
constexpr double kCrescentAngle1 = 5.0 * kPi / 6.0;
constexpr double kHalfKernelRNormal = 2.0;
constexpr double kHalfKernelRAnomaly = 4.0;
constexpr double kCornerHalf = 4.0;
constexpr double kCornerArm = 2.5;
constexpr double kCornerWidth = 0.6;
constexpr double kOutlierBlobSigma = 0.6;
constexpr double kOutlierR0 = 3.5;
constexpr double kOutlierR1 = 6.0;
constexpr double kInnerR = 1.0;
constexpr double kAnnulusR0 = 2.5;
constexpr double kAnnulusR1 = 3.5;
constexpr double kAnomalyFraction = 0.2;

double trunc_normal(Rng& rng) {
  double z;
  do {
    z = rng.normal();
  } while (std::abs(z) > kNoiseTrunc);
  return z;
}

BoundingBox square_bounds(double half) {
  return BoundingBox({-half, -half}, {half, half});
}

void push_point(Dataset& ds, double x, double y, Label label) {
  ds.points.push_back({x, y});
  ds.labels.push_back(label);
}

void gen_two_spiral(Dataset& ds, int n_normal, int n_anom, double noise,
                    Rng& rng) {
  auto arm_point = [&](int arm) {
    const double theta =
        rng.uniform(kSpiralThetaMin, kSpiralThetaMax);
    const double r = kSpiralA * theta;
    const double angle = theta + arm * kPi;
    const double x = r * std::cos(angle) + noise * trunc_normal(rng);
    const double y = r * std::sin(angle) + noise * trunc_normal(rng);
    return std::pair{x, y};
  };
  for (int i = 0; i < n_normal; ++i) {
    auto [x, y] = arm_point(0);
    push_point(ds, x, y, Label::Normal);
  }
  for (int i = 0; i < n_anom; ++i) {
    auto [x, y] = arm_point(1);
    push_point(ds, x, y, Label::Anomaly);
  }
}

void gen_crescent_full_moon(Dataset& ds, int n_normal, int n_anom,
                            double noise, Rng& rng) {
  for (int i = 0; i < n_normal; ++i) {
    const double r = kMoonR * std::sqrt(rng.uniform());
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    push_point(ds, r * std::cos(phi) + noise * trunc_normal(rng),
               r * std::sin(phi) + noise * trunc_normal(rng), Label::Normal);
  }
  for (int i = 0; i < n_anom; ++i) {
    const double r = rng.uniform(kCrescentR0, kCrescentR1);
    const double phi = rng.uniform(kCrescentAngle0, kCrescentAngle1);
    push_point(ds, r * std::cos(phi) + noise * trunc_normal(rng),
               r * std::sin(phi) + noise * trunc_normal(rng), Label::Anomaly);
  }
}

void gen_half_kernel(Dataset& ds, int n_normal, int n_anom, double noise,
                     Rng& rng) {
  auto ring_point = [&](double base_r, Label label) {
    const double phi = rng.uniform(0.0, kPi);
    const double r = base_r + noise * trunc_normal(rng);
    push_point(ds, r * std::cos(phi), r * std::sin(phi), label);
  };
  for (int i = 0; i < n_normal; ++i)
    ring_point(kHalfKernelRNormal, Label::Normal);
  for (int i = 0; i < n_anom; ++i)
    ring_point(kHalfKernelRAnomaly, Label::Anomaly);
}

void gen_corners(Dataset& ds, int n_normal, int n_anom, double noise,
                 Rng& rng) {
  for (int i = 0; i < n_normal; ++i) {
    const std::size_t corner = rng.uniform_index(4);
    const double sx = (corner & 1) ? 1.0 : -1.0;
    const double sy = (corner & 2) ? 1.0 : -1.0;
    const bool horizontal = rng.uniform_index(2) == 0;
    const double along = rng.uniform(kCornerHalf - kCornerArm, kCornerHalf);
    const double across = rng.uniform(kCornerHalf - kCornerWidth, kCornerHalf);
    const double x = sx * (horizontal ? along : across);
    const double y = sy * (horizontal ? across : along);
    push_point(ds, x, y, Label::Normal);
  }
  for (int i = 0; i < n_anom; ++i)
    push_point(ds, noise * trunc_normal(rng), noise * trunc_normal(rng),
               Label::Anomaly);
}

void gen_outliers(Dataset& ds, int n_normal, int n_anom, double noise,
                  Rng& rng) {
  for (int i = 0; i < n_normal; ++i)
    push_point(ds, kOutlierBlobSigma * trunc_normal(rng),
               kOutlierBlobSigma * trunc_normal(rng), Label::Normal);
  for (int i = 0; i < n_anom; ++i) {
    const double r = rng.uniform(kOutlierR0, kOutlierR1);
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    push_point(ds, r * std::cos(phi) + noise * trunc_normal(rng),
               r * std::sin(phi) + noise * trunc_normal(rng), Label::Anomaly);
  }
}

void gen_cluster_in_cluster(Dataset& ds, int n_normal, int n_anom,
                            double noise, Rng& rng) {
  for (int i = 0; i < n_normal; ++i) {
    const double r = rng.uniform(kAnnulusR0, kAnnulusR1);
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    push_point(ds, r * std::cos(phi) + noise * trunc_normal(rng),
               r * std::sin(phi) + noise * trunc_normal(rng), Label::Normal);
  }
  for (int i = 0; i < n_anom; ++i) {
    const double r = kInnerR * std::sqrt(rng.uniform());
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    push_point(ds, r * std::cos(phi) + noise * trunc_normal(rng),
               r * std::sin(phi) + noise * trunc_normal(rng), Label::Anomaly);
  }
}

}  // namespace

const char* to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::TwoSpiral: return "two_spiral";
    case GeneratorKind::CrescentFullMoon: return "crescent_full_moon";
    case GeneratorKind::HalfKernel: return "half_kernel";
    case GeneratorKind::Corners: return "corners";
    case GeneratorKind::Outliers: return "outliers";
    case GeneratorKind::ClusterInCluster: return "cluster_in_cluster";
  }
  throw std::invalid_argument("unknown generator kind");
}

GeneratorKind generator_kind_from_string(std::string_view s) {
  if (s == "two_spiral") return GeneratorKind::TwoSpiral;
  if (s == "crescent_full_moon") return GeneratorKind::CrescentFullMoon;
  if (s == "half_kernel") return GeneratorKind::HalfKernel;
  if (s == "corners") return GeneratorKind::Corners;
  if (s == "outliers") return GeneratorKind::Outliers;
  if (s == "cluster_in_cluster") return GeneratorKind::ClusterInCluster;
  throw std::invalid_argument("unknown generator kind: " + std::string(s));
}

BoundingBox generator_bounds(const GeneratorSpec& spec) {
  const double pad = kNoiseTrunc * spec.noise;
  switch (spec.kind) {
    case GeneratorKind::TwoSpiral:
      return square_bounds(kSpiralA * kSpiralThetaMax + pad);
    case GeneratorKind::CrescentFullMoon:
      return square_bounds(kCrescentR1 + pad);
    case GeneratorKind::HalfKernel:
      return square_bounds(kHalfKernelRAnomaly + pad);
    case GeneratorKind::Corners:
      return square_bounds(std::max(kCornerHalf, pad));
    case GeneratorKind::Outliers:
      return square_bounds(
          std::max(kOutlierR1 + pad, kNoiseTrunc * kOutlierBlobSigma));
    case GeneratorKind::ClusterInCluster:
      return square_bounds(kAnnulusR1 + pad);
  }
  throw std::invalid_argument("unknown generator kind");
}

Dataset generate(const GeneratorSpec& spec) {
  if (spec.n_points < 4)
    throw std::invalid_argument("generator needs n_points >= 4");
  if (spec.noise < 0.0) throw std::invalid_argument("noise must be >= 0");

  const int n_anom = static_cast<int>(
      std::lround(kAnomalyFraction * static_cast<double>(spec.n_points)));
  const int n_normal = spec.n_points - n_anom;

  Dataset ds;
  ds.dim = 2;
  ds.name = to_string(spec.kind);
  ds.seed = spec.seed;
  ds.origin = spec;
  ds.points.reserve(spec.n_points);
  ds.labels.reserve(spec.n_points);

  Rng rng(derive_seed(spec.seed, "gen", static_cast<std::uint64_t>(spec.kind)));
  switch (spec.kind) {
    case GeneratorKind::TwoSpiral:
      gen_two_spiral(ds, n_normal, n_anom, spec.noise, rng);
      break;
    case GeneratorKind::CrescentFullMoon:
      gen_crescent_full_moon(ds, n_normal, n_anom, spec.noise, rng);
      break;
    case GeneratorKind::HalfKernel:
      gen_half_kernel(ds, n_normal, n_anom, spec.noise, rng);
      break;
    case GeneratorKind::Corners:
      gen_corners(ds, n_normal, n_anom, spec.noise, rng);
      break;
    case GeneratorKind::Outliers:
      gen_outliers(ds, n_normal, n_anom, spec.noise, rng);
      break;
    case GeneratorKind::ClusterInCluster:
      gen_cluster_in_cluster(ds, n_normal, n_anom, spec.noise, rng);
      break;
  }
  return ds;
}

Dataset inject_test_anomalies(const Dataset& train, int n_anom, double delta,
                              std::uint64_t seed, InjectionReport* report) {
  if (train.size() == 0)
    throw std::invalid_argument("inject: empty training set");
  if (!(delta > 0.0)) throw std::invalid_argument("inject: delta must be > 0");

  Dataset test;
  if (train.origin) {
    GeneratorSpec spec = *train.origin;
    spec.seed = derive_seed(seed, "resample");
    test = generate(spec);
  } else {
    test = train;
  }
  test.name = train.name + ":test";

  if (n_anom > 0) {
    const BoundingBox box = BoundingBox::around(train.points, 0.10);
    Rng rng(derive_seed(seed, "inject"));
    double d = delta;
    int shrinks = 0;
    for (int k = 0; k < n_anom; ++k) {
      int attempts = 0;
      for (;;) {
        std::vector<double> cand(train.dim);
        for (int c = 0; c < train.dim; ++c)
          cand[c] = rng.uniform(box.lo[c], box.hi[c]);
        double min_d2 = std::numeric_limits<double>::infinity();
        for (const auto& p : train.points) {
          double d2 = 0.0;
          for (int c = 0; c < train.dim; ++c) {
            const double diff = cand[c] - p[c];
            d2 += diff * diff;
          }
          min_d2 = std::min(min_d2, d2);
        }
        if (min_d2 > d * d) {
          test.points.push_back(std::move(cand));
          test.labels.push_back(Label::Anomaly);
          break;
        }
        if (++attempts >= 1000) {
          d *= 0.9;
          ++shrinks;
          attempts = 0;
        }
      }
    }
    if (report) *report = {d, shrinks};
  } else if (report) {
    *report = {delta, 0};
  }
  return test;
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (int d = 0; d < ds.dim; ++d) out << 'x' << d << ',';
  out << "label\n";
  char buf[64];
  for (std::size_t i = 0; i < ds.points.size(); ++i) {
    for (int d = 0; d < ds.dim; ++d) {
      std::snprintf(buf, sizeof buf, "%.17g", ds.points[i][d]);
      out << buf << ',';
    }
    out << to_string(ds.labels[i]) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());

  auto fail = [&](std::size_t line, const std::string& msg) -> void {
    throw std::runtime_error(path.string() + ":" + std::to_string(line) +
                             ": " + msg);
  };

  std::string line;
  if (!std::getline(in, line)) fail(1, "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
  }
  if (cols.size() < 2 || cols.back() != "label")
    fail(1, "expected header x0,...,label");
  const int dim = static_cast<int>(cols.size()) - 1;
  for (int d = 0; d < dim; ++d)
    if (cols[d] != "x" + std::to_string(d))
      fail(1, "expected header column x" + std::to_string(d));

  Dataset ds;
  ds.dim = dim;
  ds.name = path.stem().string();

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> pt(dim);
    for (int d = 0; d < dim; ++d) {
      if (!std::getline(ss, tok, ',')) fail(lineno, "missing coordinate");
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0')
        fail(lineno, "malformed number '" + tok + "'");
      if (!std::isfinite(v)) fail(lineno, "non-finite coordinate");
      pt[d] = v;
    }
    if (!std::getline(ss, tok, ',')) fail(lineno, "missing label");
    Label lab;
    try {
      lab = label_from_string(tok);
    } catch (const std::exception&) {
      fail(lineno, "unknown label '" + tok + "'");
      throw;  // unreachable
    }
    if (std::getline(ss, tok, ',')) fail(lineno, "trailing fields");
    ds.points.push_back(std::move(pt));
    ds.labels.push_back(lab);
  }
  return ds;
}

}  // namespace voreal
