#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "homi/matrix.hpp"

namespace homi {

struct HyperParams {
  double beta = 2.0;    // weight of the label self-representation term
  double gamma = 1.0;   // weight of the graph smoothness term
  double lambda = 1.0;  // ridge weight on all four parameter blocks
  std::size_t s = 10;   // neighbors per instance in the similarity graph
  std::size_t max_iter = 50;
  double tol = 1e-3;    // absolute change in objective that ends training

  /// Throws Error(InvalidArgument) on negative weights or tol ≤ 0.
  void validate() const;
};

/// Ablation switches. All on reproduces the full joint model.
struct FitOptions {
  bool use_high_order = true;  // off: B fixed to I, t fixed to 0
  bool joint = true;           // off: solve B, t first from the labels alone, then W, z
  bool use_laplacian = true;   // off: γ forced to 0
  bool random_init = false;    // seeded N(0, 0.01²) start instead of zeros
  std::uint64_t seed = 0;
};

struct HomiModel {
  Matrix W;  // m×l feature-to-label weights
  Matrix B;  // l×l label correlation (self-representation) matrix
  Vector z;  // l, bias of the linear predictor
  Vector t;  // l, bias of the self-representation
  HyperParams hyper;
  FitOptions options;
  std::vector<double> loss_trace;  // objective after each full sweep
  bool converged = false;

  std::size_t num_features() const noexcept { return W.rows(); }
  std::size_t num_labels() const noexcept { return B.rows(); }

  static HomiModel zeros(std::size_t features, std::size_t labels);
};

/// One training instance of the joint objective
///
///   ½‖Y − XW − 1zᵀ‖² + (γ/2)·tr(KᵀLK) + (β/2)‖Y − YB − 1tᵀ‖²
///     + (λ/2)(‖W‖² + ‖z‖² + ‖B‖² + ‖t‖²),     K = (XW + 1zᵀ)B + 1tᵀ,
///
/// with every product that does not depend on the parameters computed once.
/// Each update_* returns the exact minimizer over one block with the other
/// three held fixed.
class TrainingProblem {
 public:
  TrainingProblem(Matrix x, Matrix y, Matrix laplacian, const HyperParams& hyper);

  double objective(const Matrix& w, const Matrix& b, const Vector& z, const Vector& t) const;

  Matrix update_w(const Matrix& b, const Vector& z, const Vector& t) const;
  Matrix update_b(const Matrix& w, const Vector& z, const Vector& t) const;
  Vector update_z(const Matrix& w, const Matrix& b, const Vector& t) const;
  Vector update_t(const Matrix& w, const Matrix& b, const Vector& z) const;

  /// βn + γ·1ᵀL1 + λ, the scalar that update_t divides by.
  double t_denominator() const noexcept;

  std::size_t num_samples() const noexcept { return x_.rows(); }
  std::size_t num_features() const noexcept { return x_.cols(); }
  std::size_t num_labels() const noexcept { return y_.cols(); }
  const HyperParams& hyper() const noexcept { return hyper_; }

 private:
  Matrix x_;
  Matrix y_;
  Matrix laplacian_;
  bool has_laplacian_ = false;
  HyperParams hyper_;

  Matrix ridge_gram_;   // XᵀX + λI
  Matrix xt_l_x_;       // XᵀLX
  Matrix xt_y_;         // XᵀY
  Matrix yt_y_;         // YᵀY
  Vector xt_ones_;      // Xᵀ1
  Vector yt_ones_;      // Yᵀ1
  Vector l_ones_;       // L1
  Vector xt_l_ones_;    // XᵀL1
  double ones_l_ones_ = 0.0;
};

double objective(const Matrix& x, const Matrix& y, const Matrix& laplacian, const HomiModel& model);

Matrix update_w(const Matrix& x, const Matrix& y, const Matrix& laplacian, const Matrix& b,
                const Vector& z, const Vector& t, const HyperParams& hyper);
Matrix update_b(const Matrix& x, const Matrix& y, const Matrix& laplacian, const Matrix& w,
                const Vector& z, const Vector& t, const HyperParams& hyper);
Vector update_z(const Matrix& x, const Matrix& y, const Matrix& laplacian, const Matrix& w,
                const Matrix& b, const Vector& t, const HyperParams& hyper);
Vector update_t(const Matrix& x, const Matrix& y, const Matrix& laplacian, const Matrix& w,
                const Matrix& b, const Vector& z, const HyperParams& hyper);

/// Alternating minimization (W, B, z, t per sweep) from a zero start.
///
/// `x` is expected to be standardized by the caller. The neighbor count is
/// capped at n−1 for small training sets. Solver failures are rethrown with
/// the sweep and update step prepended to the detail message.
HomiModel fit(const Matrix& x, const Matrix& y, const HyperParams& hyper,
              const FitOptions& options = {});

/// G = (XW + 1zᵀ)B + 1tᵀ
Matrix decision_values(const HomiModel& model, const Matrix& x);

/// 1 where the decision value is strictly greater than `threshold`.
Matrix threshold(const Matrix& scores, double threshold = 0.5);

Matrix predict(const HomiModel& model, const Matrix& x);

/// B with each column divided by its largest absolute entry.
/// Throws Error(ZeroColumn) for an all-zero column.
Matrix normalized_correlations(const HomiModel& model);

}  // namespace homi
