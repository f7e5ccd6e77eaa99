#include "homi/evaluation.hpp"

#include <cmath>

#include "homi/error.hpp"
#include "homi/metrics.hpp"

namespace homi {

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::HammingLoss: return "hamming_loss";
    case Metric::RankingLoss: return "ranking_loss";
    case Metric::OneError: return "one_error";
    case Metric::MacroAuc: return "macro_auc";
  }
  return "unknown";
}

MetricSummary EvalReport::summary(Metric m) const {
  MetricSummary s;
  double sum = 0.0;
  for (const auto& f : folds) {
    if (auto v = f[m]) {
      sum += *v;
      ++s.folds;
    }
  }
  if (s.folds == 0) return s;
  s.mean = sum / static_cast<double>(s.folds);
  if (s.folds > 1) {
    double ss = 0.0;
    for (const auto& f : folds)
      if (auto v = f[m]) ss += (*v - s.mean) * (*v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.folds - 1));
  }
  return s;
}

namespace {

template <typename F>
std::optional<double> defined_or_empty(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoEvaluableInstance || e.code() == ErrorCode::NoEvaluableLabel) {
      return std::nullopt;
    }
    throw;
  }
}

}  // namespace

FoldMetrics score_fold(const Matrix& scores, const Matrix& truth) {
  FoldMetrics f;
  f.test_size = truth.rows();
  const Matrix pred = threshold(scores);
  f.values[0] = metrics::hamming_loss(pred, truth);
  f.values[1] = defined_or_empty([&] { return metrics::ranking_loss(scores, truth); });
  f.values[2] = metrics::one_error(scores, truth);
  f.values[3] = defined_or_empty([&] { return metrics::macro_auc(scores, truth); });
  return f;
}

EvalReport cross_validate(const data::Dataset& d, const HyperParams& hyper, const FitOptions& options,
                          std::size_t k, std::uint64_t seed, bool standardize) {
  EvalReport report;
  report.plan = data::kfold_split(d.num_instances(), k, seed);
  for (std::size_t fold = 0; fold < k; ++fold) {
    const auto train_rows = report.plan.train_indices(fold);
    const auto test_rows = report.plan.test_indices(fold);
    const data::Dataset train = data::take_rows(d, train_rows);
    const data::Dataset test = data::take_rows(d, test_rows);

    const auto scaling = standardize ? data::Standardization::fit(train.X, train.missing)
                                     : data::Standardization::identity(d.num_features());
    const Matrix train_x = scaling.apply(train.X, train.missing);
    const Matrix test_x = scaling.apply(test.X, test.missing);

    const HomiModel model = fit(train_x, train.Y, hyper, options);
    FoldMetrics f = score_fold(decision_values(model, test_x), test.Y);
    f.fold = fold;
    f.train_size = train_rows.size();
    f.sweeps = model.loss_trace.size();
    f.converged = model.converged;
    report.folds.push_back(f);
  }
  return report;
}

}  // namespace homi
