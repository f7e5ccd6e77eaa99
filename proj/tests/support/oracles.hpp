#pragma once

// Reference implementations for tests. Everything here is written with plain
// loops over Matrix storage so that it shares no arithmetic with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "homi/matrix.hpp"
#include "homi/model.hpp"

namespace oracle {

using homi::Matrix;
using homi::Vector;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  Matrix matrix(std::size_t r, std::size_t c, double lo = -1.0, double hi = 1.0) {
    Matrix m(r, c);
    for (double& v : m.values()) v = uniform(lo, hi);
    return m;
  }
  Vector vector(std::size_t n, double lo = -1.0, double hi = 1.0) {
    Vector v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }
  Matrix binary(std::size_t r, std::size_t c, double p = 0.4) {
    Matrix m(r, c);
    for (double& v : m.values()) v = coin(p) ? 1.0 : 0.0;
    return m;
  }
  // Scores on a coarse grid so that ties occur often.
  Matrix tied_scores(std::size_t r, std::size_t c) {
    Matrix m(r, c);
    for (double& v : m.values()) v = static_cast<double>(index(0, 4)) / 4.0;
    return m;
  }
  // AᵀA + shift·I: symmetric positive definite.
  Matrix spd(std::size_t n, double shift = 0.5) {
    Matrix a = matrix(n + 2, n);
    Matrix out = mul(transpose(a), a);
    for (std::size_t i = 0; i < n; ++i) out(i, i) += shift;
    return out;
  }
  Matrix symmetric(std::size_t n) {
    Matrix a = matrix(n, n);
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) = 0.5 * (a(i, j) + a(j, i));
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

  static Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
  }
  static Matrix mul(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
        c(i, j) = s;
      }
    return c;
  }

 private:
  std::mt19937_64 rng_;
};

inline Matrix transpose(const Matrix& a) { return Gen::transpose(a); }
inline Matrix mul(const Matrix& a, const Matrix& b) { return Gen::mul(a, b); }

inline double max_abs(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

// Gauss–Jordan elimination with partial pivoting on [A | R].
inline Matrix gauss_solve(Matrix a, Matrix r) {
  const std::size_t n = a.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::abs(a(i, c)) > std::abs(a(piv, c))) piv = i;
    if (a(piv, c) == 0.0) throw std::runtime_error("oracle: singular system");
    for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
    for (std::size_t j = 0; j < r.cols(); ++j) std::swap(r(c, j), r(piv, j));
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const double f = a(i, c) / a(c, c);
      if (f == 0.0) continue;
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
      for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) -= f * r(c, j);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) /= a(i, i);
  return r;
}

// Solves P·W + G·W·E = R through the vectorized system
// (I ⊗ P + Eᵀ ⊗ G) vec(W) = vec(R), with column-major vec.
inline Matrix kronecker_solve(const Matrix& p, const Matrix& g, const Matrix& e, const Matrix& r) {
  const std::size_t m = p.rows();
  const std::size_t l = e.rows();
  Matrix big(m * l, m * l);
  for (std::size_t bk = 0; bk < l; ++bk)
    for (std::size_t bj = 0; bj < l; ++bj)
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          double v = e(bj, bk) * g(i, j);
          if (bk == bj) v += p(i, j);
          big(bk * m + i, bj * m + j) = v;
        }
  Matrix rhs(m * l, 1);
  for (std::size_t k = 0; k < l; ++k)
    for (std::size_t i = 0; i < m; ++i) rhs(k * m + i, 0) = r(i, k);
  const Matrix sol = gauss_solve(big, rhs);
  Matrix w(m, l);
  for (std::size_t k = 0; k < l; ++k)
    for (std::size_t i = 0; i < m; ++i) w(i, k) = sol(k * m + i, 0);
  return w;
}

struct Params {
  Matrix w, b;
  Vector z, t;
};

// Joint objective evaluated term by term.
inline double objective(const Matrix& x, const Matrix& y, const Matrix& lap, const Params& p,
                        const homi::HyperParams& h) {
  const std::size_t n = x.rows(), l = y.cols();
  Matrix f = mul(x, p.w);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < l; ++j) f(i, j) += p.z[j];
  Matrix k = mul(f, p.b);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < l; ++j) k(i, j) += p.t[j];
  Matrix yb = mul(y, p.b);

  double fit = 0.0, self = 0.0, smooth = 0.0, reg = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < l; ++j) {
      fit += (y(i, j) - f(i, j)) * (y(i, j) - f(i, j));
      const double e = y(i, j) - yb(i, j) - p.t[j];
      self += e * e;
    }
  if (lap.rows() == n)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t c = 0; c < n; ++c) {
        if (lap(a, c) == 0.0) continue;
        for (std::size_t j = 0; j < l; ++j) smooth += k(a, j) * lap(a, c) * k(c, j);
      }
  for (double v : p.w.values()) reg += v * v;
  for (double v : p.b.values()) reg += v * v;
  for (double v : p.z) reg += v * v;
  for (double v : p.t) reg += v * v;
  return 0.5 * fit + 0.5 * h.gamma * smooth + 0.5 * h.beta * self + 0.5 * h.lambda * reg;
}

enum class Block { W, B, Z, T };

// Central-difference gradient of the objective with respect to one block.
// Each block enters quadratically, so the differences are exact up to rounding.
inline std::vector<double> numeric_gradient(const Matrix& x, const Matrix& y, const Matrix& lap, Params p,
                                            const homi::HyperParams& h, Block block, double step = 1e-3) {
  std::vector<double> grad;
  auto probe = [&](double& v) {
    const double keep = v;
    v = keep + step;
    const double up = objective(x, y, lap, p, h);
    v = keep - step;
    const double down = objective(x, y, lap, p, h);
    v = keep;
    grad.push_back((up - down) / (2.0 * step));
  };
  switch (block) {
    case Block::W:
      for (double& v : p.w.values()) probe(v);
      break;
    case Block::B:
      for (double& v : p.b.values()) probe(v);
      break;
    case Block::Z:
      for (double& v : p.z) probe(v);
      break;
    case Block::T:
      for (double& v : p.t) probe(v);
      break;
  }
  return grad;
}

inline std::vector<double*> block_coords(Params& p, Block block) {
  std::vector<double*> out;
  auto add = [&](auto&& range) {
    for (double& v : range) out.push_back(&v);
  };
  switch (block) {
    case Block::W: add(p.w.values()); break;
    case Block::B: add(p.b.values()); break;
    case Block::Z: add(p.z); break;
    case Block::T: add(p.t); break;
  }
  return out;
}

// Minimizer of the objective over one block with the others fixed. The block
// enters quadratically, so unit-step differences give the exact gradient and
// Hessian of the vectorized problem; the system H·θ = H·θ₀ − g is solved by
// elimination.
inline Params block_minimizer(const Matrix& x, const Matrix& y, const Matrix& lap, Params p,
                              const homi::HyperParams& h, Block block) {
  auto c = block_coords(p, block);
  const std::size_t d = c.size();
  auto f = [&] { return objective(x, y, lap, p, h); };
  Matrix hess(d, d), rhs(d, 1);
  for (std::size_t i = 0; i < d; ++i) {
    const double ci = *c[i];
    *c[i] = ci + 1.0;
    const double up = f();
    *c[i] = ci - 1.0;
    const double down = f();
    *c[i] = ci;
    const double grad = 0.5 * (up - down);
    for (std::size_t j = 0; j < d; ++j) {
      const double cj = *c[j];
      double acc = 0.0;
      for (int si : {1, -1})
        for (int sj : {1, -1}) {
          *c[i] += si;
          *c[j] += sj;
          acc += si * sj * f();
          *c[i] = ci;
          *c[j] = cj;
        }
      hess(i, j) = acc / 4.0;
    }
    rhs(i, 0) = -grad;
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) rhs(i, 0) += hess(i, j) * *c[j];
  const Matrix sol = gauss_solve(hess, rhs);
  for (std::size_t i = 0; i < d; ++i) *c[i] = sol(i, 0);
  return p;
}

inline double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Ranking loss by explicit enumeration of (relevant, irrelevant) label pairs.
// Returns NaN when no instance has both kinds.
inline double ranking_loss(const Matrix& scores, const Matrix& truth) {
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < truth.rows(); ++i) {
    std::size_t bad = 0, pairs = 0;
    for (std::size_t a = 0; a < truth.cols(); ++a)
      for (std::size_t b = 0; b < truth.cols(); ++b) {
        if (truth(i, a) != 1.0 || truth(i, b) != 0.0) continue;
        ++pairs;
        if (scores(i, a) <= scores(i, b)) ++bad;
      }
    if (pairs == 0) continue;
    total += static_cast<double>(bad) / static_cast<double>(pairs);
    ++used;
  }
  return used ? total / static_cast<double>(used) : std::nan("");
}

// Macro-AUC by explicit enumeration of (positive, negative) instance pairs.
inline double macro_auc(const Matrix& scores, const Matrix& truth) {
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t j = 0; j < truth.cols(); ++j) {
    std::size_t good = 0, pairs = 0;
    for (std::size_t a = 0; a < truth.rows(); ++a)
      for (std::size_t b = 0; b < truth.rows(); ++b) {
        if (truth(a, j) != 1.0 || truth(b, j) != 0.0) continue;
        ++pairs;
        if (scores(a, j) >= scores(b, j)) ++good;
      }
    if (pairs == 0) continue;
    total += static_cast<double>(good) / static_cast<double>(pairs);
    ++used;
  }
  return used ? total / static_cast<double>(used) : std::nan("");
}

// Φ(x) from the Maclaurin series of erf.
inline double normal_cdf_series(double x) {
  const double u = x / std::sqrt(2.0);
  double term = u, sum = u;
  for (int k = 1; k < 200; ++k) {
    term *= -u * u / k;
    sum += term / (2 * k + 1);
  }
  return 0.5 + sum / std::sqrt(M_PI);
}

}  // namespace oracle
