#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "homi/data.hpp"
#include "homi/model.hpp"

namespace homi {

enum class Metric { HammingLoss, RankingLoss, OneError, MacroAuc };

inline constexpr std::array<Metric, 4> kAllMetrics = {Metric::HammingLoss, Metric::RankingLoss,
                                                      Metric::OneError, Metric::MacroAuc};

std::string_view metric_name(Metric m);

/// Metric values on one test fold. Ranking loss and macro-AUC are empty when
/// the fold has no instance (label) on which they are defined.
struct FoldMetrics {
  std::size_t fold = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t sweeps = 0;
  bool converged = false;
  std::array<std::optional<double>, 4> values;

  std::optional<double> operator[](Metric m) const { return values[static_cast<std::size_t>(m)]; }
};

/// Mean and sample deviation over the folds where the metric is defined.
struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;
  std::size_t folds = 0;
};

struct EvalReport {
  std::vector<FoldMetrics> folds;
  data::FoldPlan plan;

  MetricSummary summary(Metric m) const;
};

/// All four measures of one prediction; undefined ranking measures are empty.
FoldMetrics score_fold(const Matrix& scores, const Matrix& truth);

/// k-fold cross-validation. Each fold is standardized with its own training
/// statistics (missing cells imputed with the training mean) unless
/// `standardize` is false.
EvalReport cross_validate(const data::Dataset& d, const HyperParams& hyper, const FitOptions& options,
                          std::size_t k, std::uint64_t seed, bool standardize = true);

}  // namespace homi
