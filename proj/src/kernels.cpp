#include "homi/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace homi::kernels {

namespace {

// Rows centered on their own mean, plus each row's Euclidean norm after
// centering. The 1/(m-1) covariance factor cancels in the correlation ratio.
struct CenteredRows {
  Matrix centered;
  Vector norms;
};

CenteredRows center_rows(const Matrix& x) {
  CenteredRows out{x, Vector(x.rows(), 0.0)};
  const double m = static_cast<double>(x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto r = out.centered.row(i);
    double mean = 0.0;
    for (double v : r) mean += v;
    mean /= m;
    double ss = 0.0;
    for (double& v : r) {
      v -= mean;
      ss += v * v;
    }
    out.norms[i] = std::sqrt(ss);
  }
  return out;
}

// Zero-variance rows have no correlation signal: off-diagonal entries are 0.
inline double correlation_entry(const CenteredRows& c, std::size_t i, std::size_t j) {
  if (c.norms[i] == 0.0 || c.norms[j] == 0.0) return 0.0;
  const auto a = c.centered.row(i);
  const auto b = c.centered.row(j);
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return std::clamp(s / (c.norms[i] * c.norms[j]), -1.0, 1.0);
}

inline void matmul_row(const Matrix& a, const Matrix& b, Matrix& c, std::size_t i) {
  auto out = c.row(i);
  const auto ar = a.row(i);
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const double aik = ar[k];
    if (aik == 0.0) continue;
    const auto br = b.row(k);
    for (std::size_t j = 0; j < b.cols(); ++j) out[j] += aik * br[j];
  }
}

inline void matmul_tn_row(const Matrix& a, const Matrix& b, Matrix& c, std::size_t i) {
  auto out = c.row(i);
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double aki = a(k, i);
    if (aki == 0.0) continue;
    const auto br = b.row(k);
    for (std::size_t j = 0; j < b.cols(); ++j) out[j] += aki * br[j];
  }
}

}  // namespace

namespace serial {

Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) matmul_row(a, b, c, i);
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  Matrix c(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.cols(); ++i) matmul_tn_row(a, b, c, i);
  return c;
}

Matrix row_correlation(const Matrix& x) {
  const std::size_t n = x.rows();
  const CenteredRows c = center_rows(x);
  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    r(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = correlation_entry(c, i, j);
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return r;
}

}  // namespace serial

namespace parallel {

Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static) if (a.rows() * a.cols() * b.cols() > 32768)
  for (std::ptrdiff_t i = 0; i < rows; ++i) matmul_row(a, b, c, static_cast<std::size_t>(i));
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  Matrix c(a.cols(), b.cols());
  const auto rows = static_cast<std::ptrdiff_t>(a.cols());
#pragma omp parallel for schedule(static) if (a.rows() * a.cols() * b.cols() > 32768)
  for (std::ptrdiff_t i = 0; i < rows; ++i) matmul_tn_row(a, b, c, static_cast<std::size_t>(i));
  return c;
}

Matrix row_correlation(const Matrix& x) {
  const std::size_t n = x.rows();
  const CenteredRows c = center_rows(x);
  Matrix r(n, n);
  const auto rows = static_cast<std::ptrdiff_t>(n);
  // Triangular workload, hence dynamic scheduling.
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t si = 0; si < rows; ++si) {
    const auto i = static_cast<std::size_t>(si);
    r(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = correlation_entry(c, i, j);
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return r;
}

}  // namespace parallel

}  // namespace homi::kernels
