#include "homi/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "homi/error.hpp"
#include "homi/graph.hpp"
#include "homi/linalg.hpp"

namespace homi {

namespace {

constexpr double kDenominatorFloor = 1e-12;

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

bool is_zero(const Matrix& m) {
  return std::all_of(m.values().begin(), m.values().end(), [](double v) { return v == 0.0; });
}

Matrix add_scaled_identity(Matrix m, double scale) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += scale;
  return m;
}

Vector axpy(Vector y, double a, std::span<const double> x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
  return y;
}

// Σ_ij A_ij·B_ij
double frobenius_inner(const Matrix& a, const Matrix& b) { return dot(a.values(), b.values()); }

void require_binary(const Matrix& y) {
  for (double v : y.values()) {
    if (v != 0.0 && v != 1.0) {
      throw Error(ErrorCode::NonBinaryLabelValue, "label matrix entry " + std::to_string(v));
    }
  }
}

}  // namespace

void HyperParams::validate() const {
  if (!(beta >= 0.0) || !(gamma >= 0.0) || !(lambda >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "beta, gamma and lambda must be nonnegative");
  }
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
}

HomiModel HomiModel::zeros(std::size_t features, std::size_t labels) {
  HomiModel m;
  m.W = Matrix(features, labels);
  m.B = Matrix(labels, labels);
  m.z = Vector(labels, 0.0);
  m.t = Vector(labels, 0.0);
  return m;
}

TrainingProblem::TrainingProblem(Matrix x, Matrix y, Matrix laplacian, const HyperParams& hyper)
    : x_(std::move(x)), y_(std::move(y)), laplacian_(std::move(laplacian)), hyper_(hyper) {
  hyper_.validate();
  const std::size_t n = x_.rows();
  if (y_.rows() != n) {
    throw Error(ErrorCode::DimensionMismatch, "X " + shape(x_) + " and Y " + shape(y_));
  }
  if (laplacian_.rows() != n || laplacian_.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "Laplacian " + shape(laplacian_) + " for " + std::to_string(n) + " samples");
  }
  has_laplacian_ = hyper_.gamma != 0.0 && !is_zero(laplacian_);

  ridge_gram_ = add_scaled_identity(transpose_times(x_, x_), hyper_.lambda);
  xt_y_ = transpose_times(x_, y_);
  yt_y_ = transpose_times(y_, y_);
  xt_ones_ = column_sums(x_);
  yt_ones_ = column_sums(y_);
  if (has_laplacian_) {
    const Matrix l_x = laplacian_ * x_;
    xt_l_x_ = transpose_times(x_, l_x);
    l_ones_ = row_sums(laplacian_);
    xt_l_ones_ = transpose_times(x_, l_ones_);
    ones_l_ones_ = std::accumulate(l_ones_.begin(), l_ones_.end(), 0.0);
  } else {
    xt_l_x_ = Matrix(x_.cols(), x_.cols());
    l_ones_ = Vector(n, 0.0);
    xt_l_ones_ = Vector(x_.cols(), 0.0);
  }
}

double TrainingProblem::t_denominator() const noexcept {
  return hyper_.beta * static_cast<double>(num_samples()) + hyper_.gamma * ones_l_ones_ +
         hyper_.lambda;
}

double TrainingProblem::objective(const Matrix& w, const Matrix& b, const Vector& z,
                                  const Vector& t) const {
  const std::size_t l = num_labels();
  if (w.rows() != num_features() || w.cols() != l || b.rows() != l || b.cols() != l ||
      z.size() != l || t.size() != l) {
    throw Error(ErrorCode::DimensionMismatch, "objective: W " + shape(w) + ", B " + shape(b));
  }
  const Matrix linear = add_to_rows(x_ * w, z);
  const double fit_term = 0.5 * squared_frobenius_norm(y_ - linear);

  double smooth_term = 0.0;
  if (has_laplacian_) {
    const Matrix k = add_to_rows(linear * b, t);
    smooth_term = 0.5 * hyper_.gamma * frobenius_inner(k, laplacian_ * k);
  }

  const Matrix self_residual = add_to_rows(y_ * b, t);
  const double self_term = 0.5 * hyper_.beta * squared_frobenius_norm(y_ - self_residual);

  const double ridge = 0.5 * hyper_.lambda *
                       (squared_frobenius_norm(w) + squared_norm(z) + squared_frobenius_norm(b) +
                        squared_norm(t));
  return fit_term + smooth_term + self_term + ridge;
}

Matrix TrainingProblem::update_w(const Matrix& b, const Vector& z, const Vector& t) const {
  // (XᵀX + λI)W + γXᵀLX·W·BBᵀ = Xᵀ(Y − 1zᵀ) − γ(XᵀL1)(B(Bᵀz + t))ᵀ
  Matrix rhs = xt_y_ - outer(xt_ones_, z);
  if (!has_laplacian_) return linalg::solve_linear(ridge_gram_, rhs);

  const Vector shift = b * axpy(transpose_times(b, z), 1.0, t);
  rhs -= hyper_.gamma * outer(xt_l_ones_, shift);
  const Matrix e = b * b.transposed();
  return linalg::solve_w_system(ridge_gram_, hyper_.gamma * xt_l_x_, e, rhs);
}

Matrix TrainingProblem::update_b(const Matrix& w, const Vector& z, const Vector& t) const {
  // (βYᵀY + λI + γPᵀLP)B = βYᵀY − β(Yᵀ1)tᵀ − γ(PᵀL1)tᵀ,  P = XW + 1zᵀ
  Matrix lhs = add_scaled_identity(hyper_.beta * yt_y_, hyper_.lambda);
  Matrix rhs = hyper_.beta * (yt_y_ - outer(yt_ones_, t));
  if (has_laplacian_) {
    const Matrix linear = add_to_rows(x_ * w, z);
    lhs += hyper_.gamma * transpose_times(linear, laplacian_ * linear);
    rhs -= hyper_.gamma * outer(transpose_times(linear, l_ones_), t);
  }
  return linalg::solve_linear(lhs, rhs);
}

Vector TrainingProblem::update_z(const Matrix& w, const Matrix& b, const Vector& t) const {
  // ((n+λ)I + γ(1ᵀL1)BBᵀ)z = Yᵀ1 − WᵀXᵀ1 − γB(BᵀWᵀXᵀL1 + t·1ᵀL1)
  const double n = static_cast<double>(num_samples());
  Matrix lhs = Matrix::identity(num_labels()) * (n + hyper_.lambda);
  Vector rhs = axpy(yt_ones_, -1.0, transpose_times(w, xt_ones_));
  if (has_laplacian_) {
    lhs += (hyper_.gamma * ones_l_ones_) * (b * b.transposed());
    const Vector inner = axpy(transpose_times(b, transpose_times(w, xt_l_ones_)), ones_l_ones_, t);
    rhs = axpy(std::move(rhs), -hyper_.gamma, b * inner);
  }
  return linalg::solve_linear(lhs, rhs);
}

Vector TrainingProblem::update_t(const Matrix& w, const Matrix& b, const Vector& z) const {
  // t = (βYᵀ1 − βBᵀYᵀ1 − γBᵀ(WᵀXᵀL1 + z·1ᵀL1)) / (βn + γ1ᵀL1 + λ)
  const double denom = t_denominator();
  if (!(denom > kDenominatorFloor)) {
    throw Error(ErrorCode::DegenerateDenominator,
                "t update denominator beta*n + gamma*1'L1 + lambda = " + std::to_string(denom));
  }
  Vector rhs = axpy(yt_ones_, -1.0, transpose_times(b, yt_ones_));
  for (double& v : rhs) v *= hyper_.beta;
  if (has_laplacian_) {
    const Vector inner = axpy(transpose_times(w, xt_l_ones_), ones_l_ones_, z);
    rhs = axpy(std::move(rhs), -hyper_.gamma, transpose_times(b, inner));
  }
  for (double& v : rhs) v /= denom;
  return rhs;
}

double objective(const Matrix& x, const Matrix& y, const Matrix& laplacian, const HomiModel& model) {
  return TrainingProblem(x, y, laplacian, model.hyper).objective(model.W, model.B, model.z, model.t);
}

Matrix update_w(const Matrix& x, const Matrix& y, const Matrix& laplacian, const Matrix& b,
                const Vector& z, const Vector& t, const HyperParams& hyper) {
  return TrainingProblem(x, y, laplacian, hyper).update_w(b, z, t);
}

Matrix update_b(const Matrix& x, const Matrix& y, const Matrix& laplacian, const Matrix& w,
                const Vector& z, const Vector& t, const HyperParams& hyper) {
  return TrainingProblem(x, y, laplacian, hyper).update_b(w, z, t);
}

Vector update_z(const Matrix& x, const Matrix& y, const Matrix& laplacian, const Matrix& w,
                const Matrix& b, const Vector& t, const HyperParams& hyper) {
  return TrainingProblem(x, y, laplacian, hyper).update_z(w, b, t);
}

Vector update_t(const Matrix& x, const Matrix& y, const Matrix& laplacian, const Matrix& w,
                const Matrix& b, const Vector& z, const HyperParams& hyper) {
  return TrainingProblem(x, y, laplacian, hyper).update_t(w, b, z);
}

namespace {

// Ridge regression of Y on [Y, 1]: the label-only self-representation
// problem used by the step-wise variant.
void solve_self_representation(const Matrix& y, double lambda, Matrix& b, Vector& t) {
  const std::size_t n = y.rows();
  const std::size_t l = y.cols();
  Matrix design(n, l + 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(y.row(i).begin(), y.row(i).end(), design.row(i).begin());
    design(i, l) = 1.0;
  }
  const Matrix lhs = add_scaled_identity(transpose_times(design, design), lambda);
  const Matrix coef = linalg::solve_linear(lhs, transpose_times(design, y));
  b = Matrix(l, l);
  t = Vector(l);
  for (std::size_t i = 0; i < l; ++i) std::copy(coef.row(i).begin(), coef.row(i).end(), b.row(i).begin());
  std::copy(coef.row(l).begin(), coef.row(l).end(), t.begin());
}

template <typename Step>
auto run_step(std::size_t sweep, const char* step, Step&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.code(), "sweep " + std::to_string(sweep) + ", " + step + ": " + e.detail());
  }
}

void randomize(HomiModel& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 0.01);
  for (double& v : model.W.values()) v = dist(rng);
  for (double& v : model.B.values()) v = dist(rng);
  for (double& v : model.z) v = dist(rng);
  for (double& v : model.t) v = dist(rng);
}

}  // namespace

HomiModel fit(const Matrix& x, const Matrix& y, const HyperParams& hyper, const FitOptions& options) {
  hyper.validate();
  const std::size_t n = x.rows();
  if (n == 0 || y.cols() == 0) throw Error(ErrorCode::EmptyDataset, "no training instances or labels");
  if (y.rows() != n) throw Error(ErrorCode::DimensionMismatch, "X " + shape(x) + " and Y " + shape(y));
  require_binary(y);

  HyperParams effective = hyper;
  if (!options.use_laplacian) effective.gamma = 0.0;

  Matrix lap(n, n);
  if (effective.gamma != 0.0 && n >= 2) {
    lap = graph::build_neighbor_graph(x, std::min(effective.s, n - 1)).laplacian;
  }

  HomiModel model = HomiModel::zeros(x.cols(), y.cols());
  model.hyper = effective;
  model.options = options;
  if (options.random_init) randomize(model, options.seed);

  const TrainingProblem problem(x, y, std::move(lap), effective);
  const bool learn_b = options.use_high_order;

  if (!options.use_high_order) {
    model.B = Matrix::identity(y.cols());
    model.t.assign(y.cols(), 0.0);
  } else if (!options.joint) {
    run_step(0, "self-representation pre-solve",
             [&] { solve_self_representation(y, effective.lambda, model.B, model.t); });
  }
  const bool alternate_bt = learn_b && options.joint;

  if (alternate_bt && effective.max_iter > 0 && !(problem.t_denominator() > kDenominatorFloor)) {
    run_step(1, "update_t", [&] { return problem.update_t(model.W, model.B, model.z); });
  }

  double previous = problem.objective(model.W, model.B, model.z, model.t);
  for (std::size_t sweep = 1; sweep <= effective.max_iter; ++sweep) {
    model.W = run_step(sweep, "update_w", [&] { return problem.update_w(model.B, model.z, model.t); });
    if (alternate_bt) {
      model.B = run_step(sweep, "update_b", [&] { return problem.update_b(model.W, model.z, model.t); });
    }
    model.z = run_step(sweep, "update_z", [&] { return problem.update_z(model.W, model.B, model.t); });
    if (alternate_bt) {
      model.t = run_step(sweep, "update_t", [&] { return problem.update_t(model.W, model.B, model.z); });
    }
    const double current = problem.objective(model.W, model.B, model.z, model.t);
    model.loss_trace.push_back(current);
    if (std::abs(previous - current) < effective.tol) {
      model.converged = true;
      break;
    }
    previous = current;
  }
  return model;
}

Matrix decision_values(const HomiModel& model, const Matrix& x) {
  if (x.cols() != model.num_features()) {
    throw Error(ErrorCode::DimensionMismatch, "input has " + std::to_string(x.cols()) +
                                                  " features, model expects " +
                                                  std::to_string(model.num_features()));
  }
  return add_to_rows(add_to_rows(x * model.W, model.z) * model.B, model.t);
}

Matrix threshold(const Matrix& scores, double cut) {
  Matrix out(scores.rows(), scores.cols());
  for (std::size_t k = 0; k < scores.size(); ++k) out.values()[k] = scores.values()[k] > cut ? 1.0 : 0.0;
  return out;
}

Matrix predict(const HomiModel& model, const Matrix& x) {
  return threshold(decision_values(model, x), 0.5);
}

Matrix normalized_correlations(const HomiModel& model) {
  Matrix out = model.B;
  for (std::size_t j = 0; j < out.cols(); ++j) {
    double peak = 0.0;
    for (std::size_t i = 0; i < out.rows(); ++i) peak = std::max(peak, std::abs(out(i, j)));
    if (peak == 0.0) throw Error(ErrorCode::ZeroColumn, "column " + std::to_string(j) + " of B is zero");
    for (std::size_t i = 0; i < out.rows(); ++i) out(i, j) /= peak;
  }
  return out;
}

}  // namespace homi
