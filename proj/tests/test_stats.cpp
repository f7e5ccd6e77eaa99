#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "homi/error.hpp"
#include "homi/stats.hpp"
#include "support/oracles.hpp"

namespace st = homi::stats;
using homi::Matrix;

TEST(Ranks, OrderedRow) {
  const auto r = st::ranks_from_scores(Matrix{{0.1, 0.2, 0.3}}, false);
  EXPECT_EQ(r.avg_ranks, (homi::Vector{1, 2, 3}));
  const auto h = st::ranks_from_scores(Matrix{{0.1, 0.2, 0.3}}, true);
  EXPECT_EQ(h.avg_ranks, (homi::Vector{3, 2, 1}));
}

TEST(Ranks, Midranks) {
  EXPECT_EQ(st::ranks_from_scores(Matrix{{0.4, 0.4, 0.4, 0.4}}, false).avg_ranks, (homi::Vector{2.5, 2.5, 2.5, 2.5}));
  EXPECT_EQ(st::ranks_from_scores(Matrix{{0.2, 0.2, 0.5}}, false).avg_ranks, (homi::Vector{1.5, 1.5, 3}));
}

TEST(Ranks, RowSumsAreTriangular) {
  oracle::Gen gen(61);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = gen.index(1, 8), k = gen.index(2, 9);
    const auto r = st::ranks_from_scores(gen.tied_scores(n, k), gen.coin());
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (double v : r.per_dataset_ranks.row(i)) sum += v;
      EXPECT_NEAR(sum, k * (k + 1) / 2.0, 1e-9);
    }
  }
}

TEST(Friedman, AllTiedIsZero) {
  const auto fr = st::friedman(st::ranks_from_scores(Matrix(4, 3, 0.5), false));
  EXPECT_EQ(fr.chi2, 0.0);
  EXPECT_EQ(fr.f_statistic(), 0.0);
}

TEST(Friedman, MirrorRanksAreZero) {
  const auto fr = st::friedman(st::ranks_from_scores(Matrix{{1, 2}, {2, 1}}, false));
  EXPECT_EQ(fr.chi2, 0.0);
  EXPECT_EQ(fr.f_statistic(), 0.0);
}

TEST(Friedman, ThreeMethodsFourDatasets) {
  const auto fr = st::friedman(st::ranks_from_scores(Matrix{{1, 2, 3}, {1, 2, 3}, {2, 1, 3}, {1, 2, 3}}, false));
  EXPECT_EQ(fr.chi2, 6.5);
  EXPECT_EQ(fr.f_statistic(), 13.0);
  EXPECT_EQ(fr.df1, 2u);
  EXPECT_EQ(fr.df2, 6u);
  EXPECT_NEAR(fr.p_value(), 0.006591796875, 1e-12);
}

TEST(Friedman, PerfectSeparationIsDegenerate) {
  const auto fr = st::friedman(st::ranks_from_scores(Matrix{{1, 2, 3}, {1, 2, 3}}, false));
  EXPECT_TRUE(fr.degenerate());
  try {
    (void)fr.f_statistic();
    FAIL();
  } catch (const homi::Error& e) {
    EXPECT_EQ(e.code(), homi::ErrorCode::DegenerateStatistic);
  }
}

TEST(Friedman, InvariantUnderMethodRelabeling) {
  oracle::Gen gen(62);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = gen.index(2, 10), k = gen.index(2, 6);
    const Matrix scores = gen.matrix(n, k);
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen.engine());
    Matrix shuffled(n, k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < k; ++j) shuffled(i, j) = scores(i, perm[j]);
    const auto a = st::ranks_from_scores(scores, false);
    const auto b = st::ranks_from_scores(shuffled, false);
    for (std::size_t j = 0; j < k; ++j) EXPECT_EQ(b.avg_ranks[j], a.avg_ranks[perm[j]]);
    const auto fa = st::friedman(a), fb = st::friedman(b);
    EXPECT_NEAR(fa.chi2, fb.chi2, 1e-12);
    EXPECT_EQ(fa.degenerate(), fb.degenerate());
    if (!fa.degenerate()) EXPECT_NEAR(*fa.f_f, *fb.f_f, 1e-9);
  }
}

TEST(Friedman, RequiresTwoMethodsAndDatasets) {
  EXPECT_THROW(st::friedman(st::ranks_from_scores(Matrix{{1, 2}}, false)), homi::Error);
  EXPECT_THROW(st::friedman(st::ranks_from_scores(Matrix{{1}, {2}}, false)), homi::Error);
}

TEST(Holm, EqualRanksAreNotSignificant) {
  const double r[] = {1.5, 1.5};
  const auto rows = st::holm(r, 6, 0, 0.05);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].z, 0.0);
  EXPECT_EQ(rows[0].p, 1.0);
  EXPECT_FALSE(rows[0].significant);
  EXPECT_EQ(rows[0].threshold, 0.05);
}

TEST(Holm, ReferenceComparison) {
  const double r[] = {1.2, 2.2, 2.6};
  const auto rows = st::holm(r, 8, 0, 0.05);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].method, 2u);  // largest average rank first
  EXPECT_EQ(rows[1].method, 1u);
  EXPECT_NEAR(rows[1].z, -2.0, 1e-12);
  EXPECT_NEAR(rows[1].p, 2.0 * (1.0 - oracle::normal_cdf_series(2.0)), 1e-12);
  EXPECT_NEAR(rows[1].p, 0.0455, 1e-3);
  EXPECT_DOUBLE_EQ(rows[0].threshold, 0.025);
  EXPECT_DOUBLE_EQ(rows[1].threshold, 0.05);
}

TEST(Holm, StepDownStopsAtFirstFailure) {
  // Gaps from control: 2.0 (p≈1e-6), 0.2 (large), 1.5 (p≈1e-4).
  const double r[] = {1.0, 3.0, 1.2, 2.5, 2.3};
  const auto rows = st::holm(r, 40, 0, 0.05);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t pos = 1; pos < rows.size(); ++pos) EXPECT_GE(rows[pos - 1].avg_rank, rows[pos].avg_rank);
  bool seen_failure = false;
  for (const auto& row : rows) {
    if (row.p >= row.threshold) seen_failure = true;
    EXPECT_EQ(row.significant, !seen_failure);
  }
}

TEST(Holm, SignificanceIsMonotoneInAlpha) {
  oracle::Gen gen(63);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = gen.index(3, 20), k = gen.index(2, 7);
    const auto summary = st::ranks_from_scores(gen.matrix(n, k), false);
    const auto lo = st::holm(summary, 0, 0.01);
    const auto hi = st::holm(summary, 0, 0.10);
    for (std::size_t pos = 0; pos < lo.size(); ++pos)
      if (lo[pos].significant) EXPECT_TRUE(hi[pos].significant);
  }
}

TEST(Holm, InvalidAlpha) {
  const double r[] = {1.0, 2.0};
  for (double a : {0.0, 1.0, -0.1}) {
    try {
      st::holm(r, 4, 0, a);
      FAIL();
    } catch (const homi::Error& e) {
      EXPECT_EQ(e.code(), homi::ErrorCode::InvalidAlpha);
    }
  }
}

TEST(Distributions, NormalCdf) {
  EXPECT_EQ(st::normal_cdf(0.0), 0.5);
  EXPECT_NEAR(st::normal_cdf(1.96), 0.9750, 1e-4);
  for (double x : {-3.0, -1.0, -0.2, 0.7, 1.96, 2.5})
    EXPECT_NEAR(st::normal_cdf(x), oracle::normal_cdf_series(x), 1e-14);
}

TEST(Distributions, FDistributionReferenceValues) {
  EXPECT_NEAR(st::f_cdf(1.0, 1, 1), 0.5, 1e-14);
  struct Row {
    double x, d1, d2, cdf;
  };
  for (const Row& r : {Row{13, 2, 6, 0.993408203125}, Row{2.5, 3, 10, 0.8809604373417218},
                       Row{0.3, 5, 7, 0.10184423567211534}, Row{4.0, 9, 81, 0.9997062277660697},
                       Row{20, 1, 1, 0.8599513039068979}}) {
    EXPECT_NEAR(st::f_cdf(r.x, r.d1, r.d2), r.cdf, 1e-12);
    EXPECT_NEAR(st::f_sf(r.x, r.d1, r.d2), 1.0 - r.cdf, 1e-12);
  }
  EXPECT_NEAR(st::f_sf(4.0, 9, 81), 0.00029377223393039093, 1e-15);
  EXPECT_EQ(st::f_cdf(0.0, 3, 4), 0.0);
}

TEST(Distributions, FQuantile) {
  EXPECT_NEAR(st::f_quantile(0.95, 9, 81), 1.997609146557733, 1e-9);
  EXPECT_NEAR(st::f_quantile(0.95, 2, 6), 5.143252849784718, 1e-9);
  EXPECT_NEAR(st::f_quantile(0.99, 4, 12), 5.4119514344731385, 1e-9);
  EXPECT_NEAR(st::f_quantile(0.5, 1, 1), 1.0, 1e-9);
}

TEST(Distributions, IncompleteBeta) {
  EXPECT_NEAR(st::regularized_incomplete_beta(2.5, 3.5, 0.4), 0.4869041915261176, 1e-13);
  EXPECT_NEAR(st::regularized_incomplete_beta(0.5, 0.5, 0.2), 0.2951672353008665, 1e-13);
  EXPECT_EQ(st::regularized_incomplete_beta(2, 3, 0.0), 0.0);
  EXPECT_EQ(st::regularized_incomplete_beta(2, 3, 1.0), 1.0);
}
