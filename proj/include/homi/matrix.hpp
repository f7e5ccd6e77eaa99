#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace homi {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
///
/// Constructors that take caller-supplied values reject NaN/Inf; arithmetic
/// results are not re-checked.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);
  static Matrix column(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  Vector col(std::size_t j) const;
  void set_col(std::size_t j, std::span<const double> values);

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  Matrix transposed() const;
  bool all_finite() const noexcept;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double scalar) noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(Matrix lhs, double scalar);
Matrix operator*(double scalar, Matrix rhs);

/// Matrix product, dispatched to the parallel kernel.
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
/// lhsᵀ·rhs without materializing the transpose.
Matrix transpose_times(const Matrix& lhs, const Matrix& rhs);
Vector operator*(const Matrix& lhs, std::span<const double> rhs);
/// lhsᵀ·rhs for a vector rhs.
Vector transpose_times(const Matrix& lhs, std::span<const double> rhs);

/// a·bᵀ
Matrix outer(std::span<const double> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const double> b);

Vector column_sums(const Matrix& m);
Vector row_sums(const Matrix& m);

double frobenius_norm(const Matrix& m);
double squared_frobenius_norm(const Matrix& m);
double squared_norm(std::span<const double> v);
/// Maximum absolute row sum.
double inf_norm(const Matrix& m);
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Adds `v` to every row: M + 1·vᵀ.
Matrix add_to_rows(Matrix m, std::span<const double> v);

}  // namespace homi
