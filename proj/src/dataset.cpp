#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "homi/data.hpp"
#include "homi/error.hpp"

namespace homi::data {

DatasetStats dataset_stats(const Dataset& d) {
  DatasetStats s;
  s.n = d.num_instances();
  s.m = d.num_features();
  s.l = d.num_labels();
  if (s.n == 0) return s;

  double relevant = 0.0;
  std::set<std::vector<bool>> distinct;
  std::vector<bool> key(s.l);
  for (std::size_t i = 0; i < s.n; ++i) {
    for (std::size_t j = 0; j < s.l; ++j) {
      key[j] = d.Y(i, j) != 0.0;
      relevant += key[j] ? 1.0 : 0.0;
    }
    distinct.insert(key);
  }
  s.lcard = relevant / static_cast<double>(s.n);
  s.lden = s.l ? s.lcard / static_cast<double>(s.l) : 0.0;
  s.dl = distinct.size();
  return s;
}

Dataset take_rows(const Dataset& d, std::span<const std::size_t> rows) {
  Dataset out;
  out.relation = d.relation;
  out.feature_names = d.feature_names;
  out.label_names = d.label_names;
  out.X = Matrix(rows.size(), d.num_features());
  out.Y = Matrix(rows.size(), d.num_labels());

  std::vector<std::ptrdiff_t> new_index(d.num_instances(), -1);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t src = rows[r];
    if (src >= d.num_instances()) throw Error(ErrorCode::InvalidArgument, "row index out of range");
    std::copy(d.X.row(src).begin(), d.X.row(src).end(), out.X.row(r).begin());
    std::copy(d.Y.row(src).begin(), d.Y.row(src).end(), out.Y.row(r).begin());
    new_index[src] = static_cast<std::ptrdiff_t>(r);
  }
  for (const auto& c : d.missing) {
    if (new_index[c.row] >= 0) out.missing.push_back({static_cast<std::size_t>(new_index[c.row]), c.col});
  }
  std::sort(out.missing.begin(), out.missing.end(), [](const MissingCell& a, const MissingCell& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  return out;
}

Dataset concat_rows(const Dataset& a, const Dataset& b) {
  if (a.feature_names != b.feature_names || a.label_names != b.label_names) {
    throw Error(ErrorCode::ShapeMismatch, "cannot stack datasets with different attributes");
  }
  Dataset out;
  out.relation = a.relation;
  out.feature_names = a.feature_names;
  out.label_names = a.label_names;
  const std::size_t na = a.num_instances();
  out.X = Matrix(na + b.num_instances(), a.num_features());
  out.Y = Matrix(na + b.num_instances(), a.num_labels());
  for (std::size_t i = 0; i < na; ++i) {
    std::copy(a.X.row(i).begin(), a.X.row(i).end(), out.X.row(i).begin());
    std::copy(a.Y.row(i).begin(), a.Y.row(i).end(), out.Y.row(i).begin());
  }
  for (std::size_t i = 0; i < b.num_instances(); ++i) {
    std::copy(b.X.row(i).begin(), b.X.row(i).end(), out.X.row(na + i).begin());
    std::copy(b.Y.row(i).begin(), b.Y.row(i).end(), out.Y.row(na + i).begin());
  }
  out.missing = a.missing;
  for (const auto& c : b.missing) out.missing.push_back({na + c.row, c.col});
  return out;
}

Standardization Standardization::identity(std::size_t features) {
  return {Vector(features, 0.0), Vector(features, 1.0)};
}

Standardization Standardization::fit(const Matrix& x, std::span<const MissingCell> missing) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  if (n == 0) throw Error(ErrorCode::EmptyDataset, "cannot standardize an empty training set");

  std::vector<std::vector<bool>> skip;
  if (!missing.empty()) {
    skip.assign(n, std::vector<bool>(m, false));
    for (const auto& c : missing) skip[c.row][c.col] = true;
  }
  auto observed = [&](std::size_t i, std::size_t j) { return skip.empty() || !skip[i][j]; };

  Standardization s{Vector(m, 0.0), Vector(m, 1.0)};
  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!observed(i, j)) continue;
      sum += x(i, j);
      ++count;
    }
    if (count == 0) continue;
    const double mean = sum / static_cast<double>(count);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!observed(i, j)) continue;
      const double d = x(i, j) - mean;
      ss += d * d;
    }
    const double dev = std::sqrt(ss / static_cast<double>(count));
    s.mean[j] = mean;
    s.scale[j] = dev > 1e-12 * std::max(1.0, std::abs(mean)) ? dev : 1.0;
  }
  return s;
}

Matrix Standardization::apply(const Matrix& x, std::span<const MissingCell> missing) const {
  if (x.cols() != mean.size()) {
    throw Error(ErrorCode::DimensionMismatch, "standardization fitted on " + std::to_string(mean.size()) +
                                                  " features, input has " + std::to_string(x.cols()));
  }
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = (x(i, j) - mean[j]) / scale[j];
  for (const auto& c : missing) out(c.row, c.col) = 0.0;
  return out;
}

StandardizedPair standardize(const Matrix& train_x, const Matrix& apply_x) {
  StandardizedPair out;
  out.stats = Standardization::fit(train_x);
  out.train = out.stats.apply(train_x);
  out.apply = out.stats.apply(apply_x);
  return out;
}

namespace {

// Uniform draw in [0, range) by rejection on raw 64-bit output.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t range) {
  const std::uint64_t limit = (0 - range) % range;
  while (true) {
    const std::uint64_t r = rng();
    if (r >= limit) return r % range;
  }
}

}  // namespace

FoldPlan kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > n) {
    throw Error(ErrorCode::InvalidK,
                "k=" + std::to_string(k) + " needs 2 <= k <= n=" + std::to_string(n));
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(perm[i], perm[bounded(rng, i + 1)]);
  }
  FoldPlan plan{k, std::vector<std::size_t>(n), seed};
  for (std::size_t pos = 0; pos < n; ++pos) plan.assignments[perm[pos]] = pos % k;
  return plan;
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] == fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] != fold) out.push_back(i);
  return out;
}

}  // namespace homi::data
