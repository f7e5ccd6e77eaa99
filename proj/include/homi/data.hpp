#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "homi/matrix.hpp"

namespace homi::data {

/// Feature entry that was '?' in the source file. The corresponding X entry
/// holds 0 until a Standardization imputes it.
struct MissingCell {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const MissingCell&, const MissingCell&) = default;
};

struct Dataset {
  std::string relation;
  Matrix X;  // n×m features
  Matrix Y;  // n×l, entries in {0, 1}
  std::vector<std::string> feature_names;
  std::vector<std::string> label_names;
  std::vector<MissingCell> missing;

  std::size_t num_instances() const noexcept { return X.rows(); }
  std::size_t num_features() const noexcept { return X.cols(); }
  std::size_t num_labels() const noexcept { return Y.cols(); }
};

/// Which ARFF attributes are labels.
class LabelSpec {
 public:
  enum class Kind { LastCount, FirstCount, Names };

  static LabelSpec last(std::size_t count) { return {Kind::LastCount, count, {}}; }
  static LabelSpec first(std::size_t count) { return {Kind::FirstCount, count, {}}; }
  static LabelSpec names(std::vector<std::string> names) { return {Kind::Names, 0, std::move(names)}; }

  Kind kind() const noexcept { return kind_; }
  std::size_t count() const noexcept { return count_; }
  const std::vector<std::string>& label_names() const noexcept { return names_; }

 private:
  LabelSpec(Kind kind, std::size_t count, std::vector<std::string> names)
      : kind_(kind), count_(count), names_(std::move(names)) {}

  Kind kind_;
  std::size_t count_;
  std::vector<std::string> names_;
};

/// Reads a dense or sparse ARFF document. Label attributes may be numeric
/// 0/1, numeric −1/1, or nominal over {0,1}, {−1,1} or {FALSE,TRUE}; they
/// are mapped to {0,1}. Nominal features are encoded by value index.
///
/// Errors: ParseError (with line number), UnknownLabelName,
/// NonBinaryLabelValue, EmptyDataset.
Dataset parse_arff(std::istream& in, const LabelSpec& labels);
Dataset read_arff(const std::filesystem::path& path, const LabelSpec& labels);

/// Label names from a MULAN label file (`<label name="..."/>` elements, in
/// document order).
std::vector<std::string> parse_label_xml(std::istream& in);
std::vector<std::string> read_label_xml(const std::filesystem::path& path);

/// Dense ARFF with numeric features and {0,1} nominal labels placed last.
void write_arff(std::ostream& out, const Dataset& d);

struct DatasetStats {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t l = 0;
  double lcard = 0.0;  // mean relevant labels per instance
  double lden = 0.0;   // lcard / l
  std::size_t dl = 0;  // distinct label sets
};

DatasetStats dataset_stats(const Dataset& d);

Dataset take_rows(const Dataset& d, std::span<const std::size_t> rows);

/// Rows of `b` appended below `a`. Attribute names must agree.
/// Throws Error(ShapeMismatch) otherwise.
Dataset concat_rows(const Dataset& a, const Dataset& b);

/// Per-feature z-scoring with statistics from a training matrix (population
/// deviation). Features with zero deviation keep divisor 1; missing entries
/// become the training mean, i.e. 0 after scaling.
struct Standardization {
  Vector mean;
  Vector scale;

  static Standardization fit(const Matrix& x, std::span<const MissingCell> missing = {});
  Matrix apply(const Matrix& x, std::span<const MissingCell> missing = {}) const;
  static Standardization identity(std::size_t features);
};

struct StandardizedPair {
  Matrix train;
  Matrix apply;
  Standardization stats;
};

StandardizedPair standardize(const Matrix& train_x, const Matrix& apply_x);

struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::size_t> assignments;  // fold id per instance
  std::uint64_t seed = 0;

  std::vector<std::size_t> test_indices(std::size_t fold) const;
  std::vector<std::size_t> train_indices(std::size_t fold) const;
};

/// Seeded random partition into k folds whose sizes differ by at most one.
/// The permutation uses only mt19937_64 raw output, so it is identical across
/// standard libraries. Throws Error(InvalidK) unless 2 ≤ k ≤ n.
FoldPlan kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace homi::data
