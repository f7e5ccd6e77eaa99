#pragma once

#include <cstddef>

#include "homi/matrix.hpp"

namespace homi::graph {

/// Instance-similarity structure used by the smoothness regularizer.
struct NeighborGraph {
  Matrix correlation;  // R: pairwise Pearson coefficients between samples
  Matrix adjacency;    // S: R restricted to each row's s strongest positive neighbors
  Matrix laplacian;    // L: Laplacian of the symmetrized graph (S + Sᵀ)/2
  std::size_t neighbors = 0;
};

/// Pearson correlation between every pair of samples (rows of `x`), taken
/// across the feature coordinates. Constant rows correlate 0 with everything
/// else; the diagonal is always 1.
Matrix pearson_matrix(const Matrix& x);

/// Keeps, for each row i, the `s` largest off-diagonal values R_ij (ties to
/// the smaller j) and zeroes everything else. Selected values ≤ 0 are dropped
/// as well, so S ≥ 0. The result is generally asymmetric.
/// Throws Error(InvalidS) unless 1 ≤ s ≤ n−1.
Matrix snn_adjacency(const Matrix& r, std::size_t s);

/// D − W with W = (S + Sᵀ)/2 off the diagonal and D = diag(W·1), so that
/// tr(KᵀLK) = ½·Σ_ij S_ij‖K_i − K_j‖². Positive semidefinite for S ≥ 0, and
/// L·1 = 0. The diagonal of S is ignored.
Matrix laplacian(const Matrix& s);

NeighborGraph build_neighbor_graph(const Matrix& x, std::size_t s);

}  // namespace homi::graph
