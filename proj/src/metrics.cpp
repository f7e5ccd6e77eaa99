#include "homi/metrics.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "homi/error.hpp"

namespace homi::metrics {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::ShapeMismatch,
                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

// Both helpers take an ascending-sorted range.
std::size_t count_at_least(const std::vector<double>& sorted, double v) {
  return static_cast<std::size_t>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), v));
}

std::size_t count_at_most(const std::vector<double>& sorted, double v) {
  return static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
}

}  // namespace

double hamming_loss(const Matrix& pred, const Matrix& truth) {
  require_same_shape(pred, truth);
  if (truth.empty()) throw Error(ErrorCode::ShapeMismatch, "empty label matrix");
  std::size_t wrong = 0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    if ((pred.values()[k] != 0.0) != (truth.values()[k] != 0.0)) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

double ranking_loss(const Matrix& scores, const Matrix& truth) {
  require_same_shape(scores, truth);
  double total = 0.0;
  std::size_t evaluable = 0;
  std::vector<double> pos;
  std::vector<double> neg;
  for (std::size_t i = 0; i < truth.rows(); ++i) {
    pos.clear();
    neg.clear();
    for (std::size_t j = 0; j < truth.cols(); ++j) {
      (truth(i, j) != 0.0 ? pos : neg).push_back(scores(i, j));
    }
    if (pos.empty() || neg.empty()) continue;
    std::sort(neg.begin(), neg.end());
    std::size_t misordered = 0;
    for (double p : pos) misordered += count_at_least(neg, p);
    total += static_cast<double>(misordered) / static_cast<double>(pos.size() * neg.size());
    ++evaluable;
  }
  if (evaluable == 0) {
    throw Error(ErrorCode::NoEvaluableInstance, "every instance has all or none of its labels");
  }
  return total / static_cast<double>(evaluable);
}

double one_error(const Matrix& scores, const Matrix& truth) {
  require_same_shape(scores, truth);
  if (truth.rows() == 0 || truth.cols() == 0) throw Error(ErrorCode::ShapeMismatch, "empty input");
  std::size_t misses = 0;
  for (std::size_t i = 0; i < truth.rows(); ++i) {
    std::size_t top = 0;
    for (std::size_t j = 1; j < truth.cols(); ++j)
      if (scores(i, j) > scores(i, top)) top = j;
    if (truth(i, top) == 0.0) ++misses;
  }
  return static_cast<double>(misses) / static_cast<double>(truth.rows());
}

double macro_auc(const Matrix& scores, const Matrix& truth) {
  require_same_shape(scores, truth);
  double total = 0.0;
  std::size_t evaluable = 0;
  std::vector<double> pos;
  std::vector<double> neg;
  for (std::size_t j = 0; j < truth.cols(); ++j) {
    pos.clear();
    neg.clear();
    for (std::size_t i = 0; i < truth.rows(); ++i) {
      (truth(i, j) != 0.0 ? pos : neg).push_back(scores(i, j));
    }
    if (pos.empty() || neg.empty()) continue;
    std::sort(neg.begin(), neg.end());
    std::size_t ordered = 0;
    for (double p : pos) ordered += count_at_most(neg, p);
    total += static_cast<double>(ordered) / static_cast<double>(pos.size() * neg.size());
    ++evaluable;
  }
  if (evaluable == 0) {
    throw Error(ErrorCode::NoEvaluableLabel, "every label is all-positive or all-negative");
  }
  return total / static_cast<double>(evaluable);
}

}  // namespace homi::metrics
