#include "homi/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "homi/error.hpp"
#include "homi/kernels.hpp"

namespace homi::graph {

Matrix pearson_matrix(const Matrix& x) { return kernels::parallel::row_correlation(x); }

Matrix snn_adjacency(const Matrix& r, std::size_t s) {
  if (!r.is_square()) throw Error(ErrorCode::DimensionMismatch, "correlation matrix must be square");
  const std::size_t n = r.rows();
  if (s < 1 || n < 2 || s > n - 1) {
    throw Error(ErrorCode::InvalidS,
                "s=" + std::to_string(s) + " outside [1, " + std::to_string(n > 0 ? n - 1 : 0) + "]");
  }
  Matrix out(n, n);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel
  {
    std::vector<std::size_t> candidates;
    candidates.reserve(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t si = 0; si < rows; ++si) {
      const auto i = static_cast<std::size_t>(si);
      candidates.clear();
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) candidates.push_back(j);
      const auto row = r.row(i);
      // Strict total order (value desc, index asc), so the selection is unique.
      std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(s),
                        candidates.end(), [&](std::size_t a, std::size_t b) {
                          if (row[a] != row[b]) return row[a] > row[b];
                          return a < b;
                        });
      for (std::size_t k = 0; k < s; ++k) {
        const double v = row[candidates[k]];
        if (v > 0.0) out(i, candidates[k]) = v;
      }
    }
  }
  return out;
}

Matrix laplacian(const Matrix& s) {
  if (!s.is_square()) throw Error(ErrorCode::DimensionMismatch, "adjacency must be square");
  const std::size_t n = s.rows();
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double w = 0.5 * (s(i, j) + s(j, i));
      l(i, j) = -w;
      degree += w;
    }
    l(i, i) = degree;
  }
  return l;
}

NeighborGraph build_neighbor_graph(const Matrix& x, std::size_t s) {
  NeighborGraph g;
  g.correlation = pearson_matrix(x);
  g.adjacency = snn_adjacency(g.correlation, s);
  g.laplacian = laplacian(g.adjacency);
  g.neighbors = s;
  return g;
}

}  // namespace homi::graph
