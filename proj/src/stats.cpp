#include "homi/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "homi/error.hpp"

namespace homi::stats {

RankSummary ranks_from_scores(const Matrix& scores, bool higher_is_better) {
  const std::size_t n = scores.rows();
  const std::size_t k = scores.cols();
  if (n == 0 || k == 0) throw Error(ErrorCode::InvalidArgument, "empty score table");

  RankSummary out{k, n, Vector(k, 0.0), Matrix(n, k)};
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = scores.row(i);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return higher_is_better ? row[a] > row[b] : row[a] < row[b];
    });
    // Runs of equal scores share the mean of the positions they span.
    for (std::size_t start = 0; start < k;) {
      std::size_t end = start + 1;
      while (end < k && row[order[end]] == row[order[start]]) ++end;
      const double midrank = 0.5 * static_cast<double>(start + 1 + end);
      for (std::size_t p = start; p < end; ++p) out.per_dataset_ranks(i, order[p]) = midrank;
      start = end;
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += out.per_dataset_ranks(i, j);
    out.avg_ranks[j] = s / static_cast<double>(n);
  }
  return out;
}

double FriedmanResult::f_statistic() const {
  if (!f_f) {
    throw Error(ErrorCode::DegenerateStatistic,
                "N(k-1) - chi2 <= 0: ranks separate perfectly, F_F is unbounded");
  }
  return *f_f;
}

double FriedmanResult::p_value() const {
  if (!f_f) return 0.0;
  return f_sf(*f_f, static_cast<double>(df1), static_cast<double>(df2));
}

FriedmanResult friedman(std::span<const double> avg_ranks, std::size_t datasets) {
  const std::size_t k = avg_ranks.size();
  if (k < 2 || datasets < 2) {
    throw Error(ErrorCode::InvalidArgument, "Friedman test needs k >= 2 methods and N >= 2 datasets");
  }
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(datasets);
  double sum_sq = 0.0;
  for (double r : avg_ranks) sum_sq += r * r;

  FriedmanResult out;
  out.chi2 = 12.0 * nd / (kd * (kd + 1.0)) * (sum_sq - kd * (kd + 1.0) * (kd + 1.0) / 4.0);
  out.df1 = k - 1;
  out.df2 = (k - 1) * (datasets - 1);
  const double denom = nd * (kd - 1.0) - out.chi2;
  if (denom > 0.0) out.f_f = (nd - 1.0) * out.chi2 / denom;
  return out;
}

FriedmanResult friedman(const RankSummary& summary) {
  return friedman(summary.avg_ranks, summary.datasets);
}

std::vector<HolmRow> holm(std::span<const double> avg_ranks, std::size_t datasets,
                          std::size_t control, double alpha) {
  const std::size_t k = avg_ranks.size();
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidAlpha, "alpha=" + std::to_string(alpha) + " outside (0, 1)");
  }
  if (k < 2 || datasets == 0) throw Error(ErrorCode::InvalidArgument, "Holm needs k >= 2 and N >= 1");
  if (control >= k) throw Error(ErrorCode::InvalidArgument, "control index out of range");

  const double kd = static_cast<double>(k);
  const double se = std::sqrt(kd * (kd + 1.0) / (6.0 * static_cast<double>(datasets)));

  std::vector<std::size_t> others;
  for (std::size_t j = 0; j < k; ++j)
    if (j != control) others.push_back(j);
  std::stable_sort(others.begin(), others.end(),
                   [&](std::size_t a, std::size_t b) { return avg_ranks[a] > avg_ranks[b]; });

  std::vector<HolmRow> rows;
  bool stopped = false;
  for (std::size_t pos = 0; pos < others.size(); ++pos) {
    HolmRow r;
    r.method = others[pos];
    r.avg_rank = avg_ranks[r.method];
    r.z = (avg_ranks[control] - r.avg_rank) / se;
    r.p = std::erfc(std::abs(r.z) / std::sqrt(2.0));
    const std::size_t j = pos + 2;  // the control occupies position 1
    r.threshold = alpha / static_cast<double>(k - j + 1);
    if (!stopped && r.p >= r.threshold) stopped = true;
    r.significant = !stopped;
    rows.push_back(r);
  }
  return rows;
}

std::vector<HolmRow> holm(const RankSummary& summary, std::size_t control, double alpha) {
  return holm(summary.avg_ranks, summary.datasets, control, alpha);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double md = static_cast<double>(m);
    const double m2 = 2.0 * md;
    double aa = md * (b - md) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + md) * (qab + md) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_cdf(double x, double d1, double d2) {
  if (x <= 0.0) return 0.0;
  return regularized_incomplete_beta(0.5 * d1, 0.5 * d2, d1 * x / (d1 * x + d2));
}

double f_sf(double x, double d1, double d2) {
  if (x <= 0.0) return 1.0;
  return regularized_incomplete_beta(0.5 * d2, 0.5 * d1, d2 / (d1 * x + d2));
}

double f_quantile(double p, double d1, double d2) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidArgument, "quantile level outside (0, 1)");
  double lo = 0.0;
  double hi = 1.0;
  while (f_cdf(hi, d1, d2) < p) {
    hi *= 2.0;
    if (hi > 1e300) break;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f_cdf(mid, d1, d2) < p) lo = mid;
    else hi = mid;
    if (hi - lo <= 1e-14 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace homi::stats
