#pragma once

#include <span>
#include <vector>

namespace voreal {

// Upper-tail regularized incomplete gamma Q(a, x) and the chi-square
// survival function built on it.
double gamma_q(double a, double x);
double chi2_sf(double x, int df);

// Average ranks (1-based) with ties shared.
std::vector<double> ranks_with_ties(std::span<const double> values);

struct FriedmanResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Friedman rank test across k related samples (samples[algorithm][run]),
// tie-corrected, chi-square approximation with k-1 degrees of freedom.
FriedmanResult friedman_test(const std::vector<std::vector<double>>& samples);

struct RankSumResult {
  double z = 0.0;
  double p_value = 1.0;
  int direction = 0;  // +1 when x ranks above y, -1 below, 0 tied
};

// Two-sided Wilcoxon rank-sum (Mann-Whitney), normal approximation with tie
// correction and continuity correction.
RankSumResult wilcoxon_rank_sum(std::span<const double> x,
                                std::span<const double> y);

// Holm step-down adjustment; returns adjusted p-values in input order.
std::vector<double> holm_adjust(const std::vector<double>& p_values);

}  // namespace voreal
