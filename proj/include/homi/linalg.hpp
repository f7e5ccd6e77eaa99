#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "homi/matrix.hpp"

namespace homi::linalg {

/// LU factorization with partial pivoting of a square matrix.
///
/// Throws Error(SingularMatrix) when a pivot magnitude falls to or below
/// 1e-12·‖A‖∞ (or A is the zero matrix).
class LuFactorization {
 public:
  explicit LuFactorization(Matrix a);

  std::size_t dim() const noexcept { return lu_.rows(); }
  Matrix solve(const Matrix& rhs) const;
  Vector solve(std::span<const double> rhs) const;

 private:
  void solve_in_place(std::span<double> column) const;

  Matrix lu_;
  std::vector<std::size_t> perm_;
};

/// Solves A·X = R by factorization. A⁻¹ is never formed.
Matrix solve_linear(const Matrix& a, const Matrix& r);
Vector solve_linear(const Matrix& a, std::span<const double> r);

struct SymEig {
  Vector eigenvalues;  // ascending
  Matrix eigenvectors; // orthonormal columns, column k pairs with eigenvalues[k]
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
/// Throws Error(NotSymmetric) when ‖M − Mᵀ‖_F > 1e-10·max(1, ‖M‖_F).
SymEig sym_eig(const Matrix& m);

/// Solves P·W + G·W·E = R for W (m×l), with P (m×m), G (m×m) and E (l×l)
/// symmetric.
///
/// E = UΛUᵀ is diagonalized, after which column k of W' = W·U solves
/// (P + λ_k·G)·w'_k = (R·U)_k independently; W = W'·Uᵀ. Columns are solved in
/// parallel. Neither P nor G is inverted on its own, so a singular G is fine
/// as long as every shifted system is regular.
Matrix solve_w_system(const Matrix& p, const Matrix& g, const Matrix& e, const Matrix& r);

/// Singular values in descending order (one-sided Jacobi).
Vector singular_values(const Matrix& m);

/// Numerical rank: count of singular values strictly above `tol`. Without a
/// tolerance, tol = max(rows, cols)·ε·σ_max.
std::size_t matrix_rank(const Matrix& m, std::optional<double> tol = std::nullopt);

}  // namespace homi::linalg
