#include "homi/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "homi/error.hpp"

namespace homi::linalg {

namespace {

constexpr double kPivotRelTol = 1e-12;
constexpr double kSymmetryRelTol = 1e-10;
constexpr int kMaxJacobiSweeps = 100;

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_square(const Matrix& m, const char* what) {
  if (!m.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be square, got " + shape(m));
  }
}

double asymmetry(const Matrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const double d = m(i, j) - m(j, i);
      s += 2.0 * d * d;
    }
  return std::sqrt(s);
}

}  // namespace

LuFactorization::LuFactorization(Matrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
  require_square(lu_, "LU input");
  const std::size_t n = lu_.rows();
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  const double threshold = kPivotRelTol * inf_norm(lu_);

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        piv = i;
      }
    }
    if (best <= threshold || best == 0.0) {
      throw Error(ErrorCode::SingularMatrix, "pivot " + std::to_string(best) + " at column " +
                                                 std::to_string(k) + " of " + std::to_string(n) +
                                                 "x" + std::to_string(n) + " system");
    }
    if (piv != k) {
      std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(piv).begin());
      std::swap(perm_[k], perm_[piv]);
    }
    const double inv = 1.0 / lu_(k, k);
    const auto pivot_row = lu_.row(k);
    for (std::size_t i = k + 1; i < n; ++i) {
      auto row = lu_.row(i);
      const double f = row[k] * inv;
      row[k] = f;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) row[j] -= f * pivot_row[j];
    }
  }
}

void LuFactorization::solve_in_place(std::span<double> x) const {
  const std::size_t n = lu_.rows();
  Vector b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = x[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = lu_.row(i);
    double s = b[i];
    for (std::size_t j = 0; j < i; ++j) s -= row[j] * b[j];
    b[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    const auto row = lu_.row(ii);
    double s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= row[j] * b[j];
    b[ii] = s / row[ii];
  }
  std::copy(b.begin(), b.end(), x.begin());
}

Matrix LuFactorization::solve(const Matrix& rhs) const {
  if (rhs.rows() != dim()) {
    throw Error(ErrorCode::DimensionMismatch, "right-hand side " + shape(rhs) + " for " +
                                                  std::to_string(dim()) + "-dimensional system");
  }
  Matrix out(rhs.rows(), rhs.cols());
  for (std::size_t j = 0; j < rhs.cols(); ++j) {
    Vector c = rhs.col(j);
    solve_in_place(c);
    out.set_col(j, c);
  }
  return out;
}

Vector LuFactorization::solve(std::span<const double> rhs) const {
  if (rhs.size() != dim()) throw Error(ErrorCode::DimensionMismatch, "right-hand side length");
  Vector x(rhs.begin(), rhs.end());
  solve_in_place(x);
  return x;
}

Matrix solve_linear(const Matrix& a, const Matrix& r) {
  require_square(a, "solve_linear matrix");
  if (r.rows() != a.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "solve_linear: " + shape(a) + " with rhs " + shape(r));
  }
  return LuFactorization(a).solve(r);
}

Vector solve_linear(const Matrix& a, std::span<const double> r) {
  require_square(a, "solve_linear matrix");
  return LuFactorization(a).solve(r);
}

SymEig sym_eig(const Matrix& m) {
  require_square(m, "sym_eig input");
  const std::size_t n = m.rows();
  const double norm = frobenius_norm(m);
  if (asymmetry(m) > kSymmetryRelTol * std::max(1.0, norm)) {
    throw Error(ErrorCode::NotSymmetric, "sym_eig input asymmetry exceeds tolerance");
  }

  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
  Matrix v = Matrix::identity(n);

  const double stop = std::numeric_limits<double>::epsilon() * 1e-2 * norm;
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(2.0 * off) <= stop || off == 0.0) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  SymEig out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

Matrix solve_w_system(const Matrix& p, const Matrix& g, const Matrix& e, const Matrix& r) {
  require_square(p, "P");
  require_square(g, "G");
  require_square(e, "E");
  const std::size_t m = p.rows();
  const std::size_t l = e.rows();
  if (g.rows() != m || r.rows() != m || r.cols() != l) {
    throw Error(ErrorCode::DimensionMismatch, "solve_w_system: P " + shape(p) + ", G " + shape(g) +
                                                  ", E " + shape(e) + ", R " + shape(r));
  }

  const SymEig eig = sym_eig(e);
  const Matrix rotated_rhs = r * eig.eigenvectors;
  Matrix rotated_w(m, l);

  const auto cols = static_cast<std::ptrdiff_t>(l);
  bool failed = false;
  std::size_t failed_col = 0;
  std::string failed_what;
#pragma omp parallel for schedule(dynamic, 1) if (m >= 32)
  for (std::ptrdiff_t sk = 0; sk < cols; ++sk) {
    const auto k = static_cast<std::size_t>(sk);
    Matrix shifted = p;
    const double lambda = eig.eigenvalues[k];
    auto sv = shifted.values();
    const auto gv = g.values();
    for (std::size_t idx = 0; idx < sv.size(); ++idx) sv[idx] += lambda * gv[idx];
    try {
      const Vector w = LuFactorization(std::move(shifted)).solve(rotated_rhs.col(k));
      rotated_w.set_col(k, w);
    } catch (const Error& err) {
#pragma omp critical(homi_w_system_error)
      {
        if (!failed || k < failed_col) {
          failed = true;
          failed_col = k;
          failed_what = err.detail();
        }
      }
    }
  }
  if (failed) {
    throw Error(ErrorCode::SingularMatrix, "shifted system for eigenvalue index " +
                                               std::to_string(failed_col) + ": " + failed_what);
  }
  return rotated_w * eig.eigenvectors.transposed();
}

Vector singular_values(const Matrix& m) {
  // Work on the orientation with at most as many columns as rows.
  Matrix a = m.rows() >= m.cols() ? m : m.transposed();
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  constexpr double eps = std::numeric_limits<double>::epsilon();

  // Column-major scratch for cache-friendly column rotations.
  std::vector<Vector> c(cols, Vector(rows));
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) c[j][i] = a(i, j);

  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        const double alpha = squared_norm(c[p]);
        const double beta = squared_norm(c[q]);
        const double gamma = dot(c[p], c[q]);
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double xp = c[p][i];
          const double xq = c[q][i];
          c[p][i] = cs * xp - sn * xq;
          c[q][i] = sn * xp + cs * xq;
        }
      }
    }
    if (!rotated) break;
  }

  Vector sv(cols);
  for (std::size_t j = 0; j < cols; ++j) sv[j] = std::sqrt(squared_norm(c[j]));
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

std::size_t matrix_rank(const Matrix& m, std::optional<double> tol) {
  if (m.empty()) return 0;
  const Vector sv = singular_values(m);
  const double sigma_max = sv.empty() ? 0.0 : sv.front();
  const double threshold =
      tol.value_or(static_cast<double>(std::max(m.rows(), m.cols())) *
                   std::numeric_limits<double>::epsilon() * sigma_max);
  return static_cast<std::size_t>(
      std::count_if(sv.begin(), sv.end(), [&](double s) { return s > threshold; }));
}

}  // namespace homi::linalg
