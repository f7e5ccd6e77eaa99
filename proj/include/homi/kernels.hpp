#pragma once

#include "homi/matrix.hpp"

/// Dense data-parallel kernels.
///
/// Every kernel exists twice: an OpenMP version used by the library and a
/// plain serial reference kept for testing and benchmarking. Each output
/// entry is accumulated by a single thread in the same order as the serial
/// loop, so the two versions agree bit for bit.
namespace homi::kernels {

namespace serial {
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_tn(const Matrix& a, const Matrix& b);
Matrix row_correlation(const Matrix& x);
}  // namespace serial

namespace parallel {
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_tn(const Matrix& a, const Matrix& b);
Matrix row_correlation(const Matrix& x);
}  // namespace parallel

}  // namespace homi::kernels
