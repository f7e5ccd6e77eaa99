#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "homi/matrix.hpp"

/// Rank-based comparison of several methods over several datasets: the
/// Friedman test followed by Holm's step-down procedure against a control.
namespace homi::stats {

struct RankSummary {
  std::size_t methods = 0;   // k
  std::size_t datasets = 0;  // N
  Vector avg_ranks;          // k column means of per_dataset_ranks
  Matrix per_dataset_ranks;  // N×k, 1 = best, ties share the midrank
};

/// Ranks the methods (columns) within each dataset (row).
RankSummary ranks_from_scores(const Matrix& scores, bool higher_is_better);

struct FriedmanResult {
  double chi2 = 0.0;
  /// Empty when N(k−1) − χ² ≤ 0, i.e. the ranks separate perfectly and the
  /// F statistic diverges.
  std::optional<double> f_f;
  std::size_t df1 = 0;  // k−1
  std::size_t df2 = 0;  // (k−1)(N−1)

  bool degenerate() const noexcept { return !f_f.has_value(); }
  /// Throws Error(DegenerateStatistic) when degenerate().
  double f_statistic() const;
  /// Upper-tail probability of f_f under F(df1, df2); 0 when degenerate.
  double p_value() const;
};

FriedmanResult friedman(const RankSummary& summary);
FriedmanResult friedman(std::span<const double> avg_ranks, std::size_t datasets);

struct HolmRow {
  std::size_t method = 0;
  double avg_rank = 0.0;
  double z = 0.0;          // (R_control − R_method) / sqrt(k(k+1)/(6N))
  double p = 1.0;          // two-sided normal p-value of z
  double threshold = 0.0;  // α/(k−j+1) at position j = 2..k
  bool significant = false;
};

/// Comparisons against `control`, ordered by descending average rank of the
/// comparator. Every row before the first one with p ≥ threshold is marked
/// significant. Throws Error(InvalidAlpha) unless 0 < alpha < 1.
std::vector<HolmRow> holm(const RankSummary& summary, std::size_t control, double alpha);
std::vector<HolmRow> holm(std::span<const double> avg_ranks, std::size_t datasets,
                          std::size_t control, double alpha);

double normal_cdf(double x);

/// I_x(a, b), by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

double f_cdf(double x, double d1, double d2);
/// 1 − f_cdf, evaluated without cancellation.
double f_sf(double x, double d1, double d2);
/// Inverse of f_cdf in x, for 0 < p < 1.
double f_quantile(double p, double d1, double d2);

}  // namespace homi::stats
