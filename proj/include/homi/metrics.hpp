#pragma once

#include "homi/matrix.hpp"

/// Multi-label evaluation measures. `truth` and `pred` are 0/1 matrices with
/// one row per instance and one column per label.
namespace homi::metrics {

/// Fraction of label slots where prediction and truth disagree.
double hamming_loss(const Matrix& pred, const Matrix& truth);

/// Mean over instances with at least one relevant and one irrelevant label of
/// the fraction of (relevant, irrelevant) pairs with score(relevant) ≤
/// score(irrelevant). Throws Error(NoEvaluableInstance) if no instance
/// qualifies.
double ranking_loss(const Matrix& scores, const Matrix& truth);

/// Fraction of instances whose top-scored label (first index on ties) is
/// irrelevant.
double one_error(const Matrix& scores, const Matrix& truth);

/// Mean over labels with at least one positive and one negative instance of
/// the fraction of (positive, negative) instance pairs with score(positive) ≥
/// score(negative). Throws Error(NoEvaluableLabel) if no label qualifies.
double macro_auc(const Matrix& scores, const Matrix& truth);

}  // namespace homi::metrics
