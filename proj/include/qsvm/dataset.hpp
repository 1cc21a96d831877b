#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace qsvm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using LabelVector = Eigen::VectorXi;

// Feature matrix (one row per point) with +1/-1 labels.
//
// The constructor enforces the invariants: at least one row and one column,
// one label per row, every label exactly +1 or -1, every feature finite.
class Dataset {
 public:
  Dataset(Matrix x, LabelVector y, std::vector<std::string> feature_names = {});

  const Matrix& x() const noexcept { return x_; }
  const LabelVector& y() const noexcept { return y_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }

  std::size_t size() const noexcept { return static_cast<std::size_t>(x_.rows()); }
  std::size_t dims() const noexcept { return static_cast<std::size_t>(x_.cols()); }

  std::size_t count(int label) const noexcept;
  bool has_both_classes() const noexcept { return count(+1) > 0 && count(-1) > 0; }

  // Rows in the given order.
  Dataset subset(const std::vector<std::size_t>& indices) const;

 private:
  Matrix x_;
  LabelVector y_;
  std::vector<std::string> feature_names_;
};

struct SplitSpec {
  std::size_t n_train = 0;
  std::uint64_t seed = 0;
  bool per_class_balance = true;
};

struct Split {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_indices;  // ascending
  std::vector<std::size_t> test_indices;   // ascending
};

enum class Normalization { min_max, z_score, none };

Normalization parse_normalization(const std::string& name);
std::string to_string(Normalization method);

// Per-column affine map x -> (x - offset) * scale. Fitted on one dataset
// and applicable to others (train statistics applied to the test split).
class Normalizer {
 public:
  Normalizer() = default;
  Normalizer(Normalization method, Vector offset, Vector scale);

  static Normalizer fit(const Dataset& data, Normalization method);

  Dataset apply(const Dataset& data) const;
  Vector apply(const Vector& x) const;

  Normalization method() const noexcept { return method_; }
  const Vector& offset() const noexcept { return offset_; }
  const Vector& scale() const noexcept { return scale_; }

 private:
  Normalization method_ = Normalization::none;
  Vector offset_;
  Vector scale_;
};

// Two isotropic unit-variance Gaussian clusters whose centres are
// `center_distance` apart along a random direction; n/2 points each,
// the first half labelled +1.
Dataset generate_blobs(std::size_t n, std::size_t d, std::uint64_t seed, double center_distance);

inline constexpr double kHyperplaneMarginEpsilon = 1e-6;

// Uniform points in [-1, 1]^d labelled by sign(w.x + b). Points with
// |w.x + b| < margin are redrawn. At most 1000*n draws.
Dataset generate_hyperplane(std::size_t n, std::size_t d, const Vector& w, double b,
                            std::uint64_t seed, double margin = kHyperplaneMarginEpsilon);

// A string reference names a header column; if no header column carries
// that name and the string is all digits it is read as a zero-based index.
using ColumnRef = std::variant<std::string, std::size_t>;

// Rows whose label is neither class literal are dropped. The positive class
// maps to +1, the negative class to -1, every other column is a feature.
Dataset load_csv(const std::filesystem::path& path, const ColumnRef& label_column,
                 const std::string& positive_class, const std::string& negative_class);

// Features followed by a "label" column holding +1/-1.
void write_csv(const Dataset& data, const std::filesystem::path& path);
std::string to_csv(const Dataset& data);

Dataset normalize(const Dataset& data, Normalization method);

Split split_stratified(const Dataset& data, const SplitSpec& spec);

}  // namespace qsvm
