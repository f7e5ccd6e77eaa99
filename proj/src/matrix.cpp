#include "homi/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "homi/error.hpp"
#include "homi/kernels.hpp"

namespace homi {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()));
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (!std::isfinite(fill)) throw Error(ErrorCode::InvalidArgument, "non-finite matrix fill");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
  if (data_.size() != rows * cols) {
    throw Error(ErrorCode::DimensionMismatch, "matrix value count " +
                                                  std::to_string(data_.size()) + " != " +
                                                  std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!all_finite()) throw Error(ErrorCode::InvalidArgument, "matrix contains NaN or Inf");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  if (!all_finite()) throw Error(ErrorCode::InvalidArgument, "matrix contains NaN or Inf");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::column(std::span<const double> values) {
  return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

Vector Matrix::col(std::size_t j) const {
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

void Matrix::set_col(std::size_t j, std::span<const double> values) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other, "matrix addition");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other, "matrix subtraction");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double scalar) noexcept {
  for (double& v : data_) v *= scalar;
  return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator*(Matrix lhs, double scalar) { return lhs *= scalar; }
Matrix operator*(double scalar, Matrix rhs) { return rhs *= scalar; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols() != rhs.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix product " + std::to_string(lhs.rows()) + "x" + std::to_string(lhs.cols()) +
                    " * " + std::to_string(rhs.rows()) + "x" + std::to_string(rhs.cols()));
  }
  return kernels::parallel::matmul(lhs, rhs);
}

Matrix transpose_times(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.rows() != rhs.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "transpose product row counts differ");
  }
  return kernels::parallel::matmul_tn(lhs, rhs);
}

Vector operator*(const Matrix& lhs, std::span<const double> rhs) {
  if (lhs.cols() != rhs.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector product");
  Vector out(lhs.rows(), 0.0);
  for (std::size_t i = 0; i < lhs.rows(); ++i) out[i] = dot(lhs.row(i), rhs);
  return out;
}

Vector transpose_times(const Matrix& lhs, std::span<const double> rhs) {
  if (lhs.rows() != rhs.size()) {
    throw Error(ErrorCode::DimensionMismatch, "transposed matrix-vector product");
  }
  Vector out(lhs.cols(), 0.0);
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    const auto r = lhs.row(i);
    for (std::size_t j = 0; j < lhs.cols(); ++j) out[j] += r[j] * rhs[i];
  }
  return out;
}

Matrix outer(std::span<const double> a, std::span<const double> b) {
  Matrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

Vector column_sums(const Matrix& m) {
  Vector out(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += r[j];
  }
  return out;
}

Vector row_sums(const Matrix& m) {
  Vector out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (double v : m.row(i)) out[i] += v;
  }
  return out;
}

double squared_frobenius_norm(const Matrix& m) { return squared_norm(m.values()); }

double frobenius_norm(const Matrix& m) { return std::sqrt(squared_frobenius_norm(m)); }

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double inf_norm(const Matrix& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (double v : m.row(i)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double best = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    best = std::max(best, std::abs(a.values()[k] - b.values()[k]));
  }
  return best;
}

Matrix add_to_rows(Matrix m, std::span<const double> v) {
  if (v.size() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "row offset length");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) r[j] += v[j];
  }
  return m;
}

}  // namespace homi
