#include "voreal/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace voreal {

namespace {

constexpr int kGammaMaxIter = 300;
constexpr double kGammaEps = 3e-12;

// Series expansion of P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < kGammaMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kGammaEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kGammaMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kGammaEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0)
    throw std::invalid_argument("gamma_q: invalid arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi2_sf(double x, int df) {
  if (df < 1) throw std::invalid_argument("chi2_sf: df must be >= 1");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * df, 0.5 * x);
}

std::vector<double> ranks_with_ties(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

FriedmanResult friedman_test(const std::vector<std::vector<double>>& samples) {
  const std::size_t k = samples.size();
  if (k < 2) throw std::invalid_argument("friedman: need >= 2 samples");
  const std::size_t n = samples.front().size();
  if (n < 1) throw std::invalid_argument("friedman: empty samples");
  for (const auto& s : samples)
    if (s.size() != n)
      throw std::invalid_argument("friedman: unequal sample sizes");

  std::vector<double> rank_sums(k, 0.0);
  double tie_term = 0.0;  // sum over blocks of sum(t^3 - t)
  std::vector<double> block(k);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < k; ++j) block[j] = samples[j][r];
    const auto ranks = ranks_with_ties(block);
    for (std::size_t j = 0; j < k; ++j) rank_sums[j] += ranks[j];

    std::vector<double> sorted = block;
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < k) {
      std::size_t j = i;
      while (j + 1 < k && sorted[j + 1] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i + 1);
      tie_term += t * t * t - t;
      i = j + 1;
    }
  }

  const double kk = static_cast<double>(k);
  const double nn = static_cast<double>(n);
  double stat = 0.0;
  for (double rs : rank_sums) stat += rs * rs;
  stat = 12.0 / (nn * kk * (kk + 1.0)) * stat - 3.0 * nn * (kk + 1.0);

  const double correction = 1.0 - tie_term / (nn * kk * (kk * kk - 1.0));
  FriedmanResult out;
  if (correction <= 0.0) {
    out.statistic = 0.0;
    out.p_value = 1.0;
    return out;
  }
  out.statistic = stat / correction;
  out.p_value = chi2_sf(out.statistic, static_cast<int>(k) - 1);
  return out;
}

RankSumResult wilcoxon_rank_sum(std::span<const double> x,
                                std::span<const double> y) {
  const std::size_t n1 = x.size();
  const std::size_t n2 = y.size();
  if (n1 == 0 || n2 == 0)
    throw std::invalid_argument("wilcoxon: empty sample");

  std::vector<double> combined(x.begin(), x.end());
  combined.insert(combined.end(), y.begin(), y.end());
  const auto ranks = ranks_with_ties(combined);

  double w = 0.0;
  for (std::size_t i = 0; i < n1; ++i) w += ranks[i];

  const double dn1 = static_cast<double>(n1);
  const double dn2 = static_cast<double>(n2);
  const double nt = dn1 + dn2;
  const double mu = dn1 * (nt + 1.0) / 2.0;

  double tie_term = 0.0;
  std::vector<double> sorted = combined;
  std::sort(sorted.begin(), sorted.end());
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }

  const double var =
      dn1 * dn2 / 12.0 * ((nt + 1.0) - tie_term / (nt * (nt - 1.0)));

  RankSumResult out;
  if (w > mu)
    out.direction = 1;
  else if (w < mu)
    out.direction = -1;
  if (var <= 0.0) return out;  // all values identical

  const double shift = w > mu ? -0.5 : (w < mu ? 0.5 : 0.0);
  out.z = (w - mu + shift) / std::sqrt(var);
  out.p_value = std::erfc(std::abs(out.z) / std::sqrt(2.0));
  return out;
}

std::vector<double> holm_adjust(const std::vector<double>& p_values) {
  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p_values[a] < p_values[b];
  });

  std::vector<double> adjusted(m, 0.0);
  double running = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double scaled =
        static_cast<double>(m - i) * p_values[order[i]];
    running = std::max(running, scaled);
    adjusted[order[i]] = std::min(1.0, running);
  }
  return adjusted;
}

}  // namespace voreal
