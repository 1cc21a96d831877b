#include "qsvm/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "qsvm/error.hpp"
#include "qsvm/random.hpp"

namespace qsvm {

Dataset::Dataset(Matrix x, LabelVector y, std::vector<std::string> feature_names)
    : x_(std::move(x)), y_(std::move(y)), feature_names_(std::move(feature_names)) {
  if (x_.rows() < 1 || x_.cols() < 1) {
    throw InvalidArgument("dataset needs at least one row and one column");
  }
  if (x_.rows() != y_.size()) {
    throw InvalidArgument("dataset has " + std::to_string(x_.rows()) + " rows but " +
                          std::to_string(y_.size()) + " labels");
  }
  for (Eigen::Index i = 0; i < y_.size(); ++i) {
    if (y_[i] != 1 && y_[i] != -1) {
      throw InvalidArgument("label at row " + std::to_string(i) + " is not +1 or -1");
    }
  }
  if (!x_.allFinite()) throw InvalidArgument("dataset contains non-finite features");
  if (!feature_names_.empty() && feature_names_.size() != dims()) {
    throw InvalidArgument("feature name count does not match column count");
  }
}

std::size_t Dataset::count(int label) const noexcept {
  return static_cast<std::size_t>((y_.array() == label).count());
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Matrix x(static_cast<Eigen::Index>(indices.size()), x_.cols());
  LabelVector y(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= size()) throw InvalidArgument("subset index out of range");
    x.row(static_cast<Eigen::Index>(r)) = x_.row(static_cast<Eigen::Index>(indices[r]));
    y[static_cast<Eigen::Index>(r)] = y_[static_cast<Eigen::Index>(indices[r])];
  }
  return Dataset(std::move(x), std::move(y), feature_names_);
}

// ---------------------------------------------------------------------------
// Normalization

Normalization parse_normalization(const std::string& name) {
  if (name == "min_max") return Normalization::min_max;
  if (name == "z_score") return Normalization::z_score;
  if (name == "none") return Normalization::none;
  throw InvalidArgument("unknown normalization '" + name + "' (expected min_max, z_score or none)");
}

std::string to_string(Normalization method) {
  switch (method) {
    case Normalization::min_max: return "min_max";
    case Normalization::z_score: return "z_score";
    case Normalization::none: return "none";
  }
  return "none";
}

Normalizer::Normalizer(Normalization method, Vector offset, Vector scale)
    : method_(method), offset_(std::move(offset)), scale_(std::move(scale)) {
  if (offset_.size() != scale_.size()) {
    throw InvalidArgument("normalizer offset and scale differ in length");
  }
}

Normalizer Normalizer::fit(const Dataset& data, Normalization method) {
  const Matrix& x = data.x();
  const auto d = x.cols();
  Vector offset = Vector::Zero(d);
  Vector scale = Vector::Ones(d);
  for (Eigen::Index c = 0; c < d; ++c) {
    const auto col = x.col(c);
    switch (method) {
      case Normalization::min_max: {
        const double lo = col.minCoeff();
        const double hi = col.maxCoeff();
        offset[c] = lo;
        // Constant columns collapse to 0.
        scale[c] = hi > lo ? 1.0 / (hi - lo) : 0.0;
        break;
      }
      case Normalization::z_score: {
        const double mean = col.mean();
        const double var = (col.array() - mean).square().mean();
        offset[c] = mean;
        scale[c] = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
        break;
      }
      case Normalization::none:
        break;
    }
  }
  return Normalizer(method, std::move(offset), std::move(scale));
}

Dataset Normalizer::apply(const Dataset& data) const {
  if (method_ == Normalization::none && offset_.size() == 0) return data;
  if (static_cast<std::size_t>(offset_.size()) != data.dims()) {
    throw InvalidArgument("normalizer fitted on " + std::to_string(offset_.size()) +
                          " features, dataset has " + std::to_string(data.dims()));
  }
  Matrix x = (data.x().rowwise() - offset_.transpose()).array().rowwise() * scale_.transpose().array();
  return Dataset(std::move(x), data.y(), data.feature_names());
}

Vector Normalizer::apply(const Vector& x) const {
  if (method_ == Normalization::none && offset_.size() == 0) return x;
  if (x.size() != offset_.size()) throw InvalidArgument("normalizer dimension mismatch");
  return ((x - offset_).array() * scale_.array()).matrix();
}

Dataset normalize(const Dataset& data, Normalization method) {
  return Normalizer::fit(data, method).apply(data);
}

// ---------------------------------------------------------------------------
// Generators

Dataset generate_blobs(std::size_t n, std::size_t d, std::uint64_t seed, double center_distance) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("blob count must be even and at least 2");
  if (d < 1) throw InvalidArgument("blob dimension must be at least 1");
  if (!(center_distance > 0.0) || !std::isfinite(center_distance)) {
    throw InvalidArgument("center_distance must be positive");
  }
  Rng rng(derive_seed(seed, 0));
  std::normal_distribution<double> normal(0.0, 1.0);

  const auto dim = static_cast<Eigen::Index>(d);
  Vector direction(dim);
  do {
    for (Eigen::Index c = 0; c < dim; ++c) direction[c] = normal(rng);
  } while (direction.norm() == 0.0);
  direction.normalize();
  const Vector center = 0.5 * center_distance * direction;

  Matrix x(static_cast<Eigen::Index>(n), dim);
  LabelVector y(static_cast<Eigen::Index>(n));
  const std::size_t half = n / 2;
  for (std::size_t r = 0; r < n; ++r) {
    const int label = r < half ? 1 : -1;
    const auto row = static_cast<Eigen::Index>(r);
    for (Eigen::Index c = 0; c < dim; ++c) x(row, c) = normal(rng) + label * center[c];
    y[row] = label;
  }
  return Dataset(std::move(x), std::move(y));
}

Dataset generate_hyperplane(std::size_t n, std::size_t d, const Vector& w, double b,
                            std::uint64_t seed, double margin) {
  if (n < 2) throw InvalidArgument("hyperplane dataset needs at least 2 points");
  if (d < 1 || static_cast<std::size_t>(w.size()) != d) {
    throw InvalidArgument("weight vector length must equal the feature count");
  }
  if (w.isZero(0.0)) throw InvalidArgument("hyperplane weight vector must be nonzero");
  if (!(margin > 0.0) || !std::isfinite(margin)) throw InvalidArgument("margin must be positive");

  Rng rng(derive_seed(seed, 1));
  const auto dim = static_cast<Eigen::Index>(d);
  Matrix x(static_cast<Eigen::Index>(n), dim);
  LabelVector y(static_cast<Eigen::Index>(n));
  std::size_t placed = 0;
  std::size_t positives = 0;
  const std::size_t max_draws = 1000 * n;
  Vector point(dim);
  for (std::size_t draw = 0; draw < max_draws && placed < n; ++draw) {
    for (Eigen::Index c = 0; c < dim; ++c) point[c] = 2.0 * uniform01(rng) - 1.0;
    const double side = w.dot(point) + b;
    if (std::abs(side) < margin) continue;
    const int label = side > 0.0 ? 1 : -1;
    // The last slot is reserved for the missing class, if any.
    if (placed == n - 1) {
      const bool need_pos = positives == 0;
      const bool need_neg = positives == placed;
      if ((need_pos && label != 1) || (need_neg && label != -1)) continue;
    }
    x.row(static_cast<Eigen::Index>(placed)) = point.transpose();
    y[static_cast<Eigen::Index>(placed)] = label;
    positives += label == 1 ? 1 : 0;
    ++placed;
  }
  if (placed < n) {
    throw GenerationFailure("could not place both classes within " + std::to_string(max_draws) +
                            " draws");
  }
  return Dataset(std::move(x), std::move(y));
}

// ---------------------------------------------------------------------------
// CSV

namespace {

// RFC-4180 record splitter: quoted fields, doubled quotes, CRLF tolerant.
// Returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char ch;
  while (in.get(ch)) {
    any = true;
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      break;
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_real(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const ColumnRef& label_column,
                 const std::string& positive_class, const std::string& negative_class) {
  if (positive_class == negative_class) {
    throw InvalidArgument("positive and negative class literals must differ");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open '" + path.string() + "'");

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  while (read_record(in, fields)) {
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;  // blank line
    records.push_back(fields);
  }
  if (records.empty()) throw IngestError("'" + path.string() + "' is empty");

  const std::size_t width = records.front().size();
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (records[r].size() != width) {
      throw IngestError("row " + std::to_string(r + 1) + " of '" + path.string() + "' has " +
                        std::to_string(records[r].size()) + " cells, expected " +
                        std::to_string(width));
    }
  }
  if (width < 2) throw IngestError("need at least one feature column and a label column");

  const auto& first = records.front();
  auto header_index = [&](const std::string& name) -> std::optional<std::size_t> {
    // Numeric cells are data, never header names.
    for (std::size_t c = 0; c < first.size(); ++c) {
      if (trim(first[c]) == name && !parse_real(first[c])) return c;
    }
    return std::nullopt;
  };

  std::size_t label_idx = 0;
  bool named = false;
  if (const auto* name = std::get_if<std::string>(&label_column)) {
    if (auto idx = header_index(*name)) {
      label_idx = *idx;
      named = true;
    } else if (all_digits(*name)) {
      label_idx = std::stoul(*name);
    } else {
      throw IngestError("label column '" + *name + "' not found in header of '" +
                        path.string() + "'");
    }
  } else {
    label_idx = std::get<std::size_t>(label_column);
  }
  if (label_idx >= width) {
    throw IngestError("label column index " + std::to_string(label_idx) + " out of range");
  }

  // The first row is a header when it was used to resolve the label name or
  // when one of its feature cells is not a number.
  bool has_header = named;
  for (std::size_t c = 0; c < width && !has_header; ++c) {
    if (c != label_idx && !parse_real(first[c])) has_header = true;
  }

  std::vector<std::string> names;
  if (has_header) {
    for (std::size_t c = 0; c < width; ++c) {
      if (c != label_idx) names.push_back(trim(first[c]));
    }
  }

  const std::size_t begin = has_header ? 1 : 0;
  std::vector<std::size_t> kept;
  std::vector<int> labels;
  for (std::size_t r = begin; r < records.size(); ++r) {
    const std::string lit = trim(records[r][label_idx]);
    if (lit == positive_class) {
      kept.push_back(r);
      labels.push_back(1);
    } else if (lit == negative_class) {
      kept.push_back(r);
      labels.push_back(-1);
    }
  }
  const auto pos = std::count(labels.begin(), labels.end(), 1);
  const auto neg = static_cast<std::ptrdiff_t>(labels.size()) - pos;
  if (pos == 0) {
    throw IngestError("no rows of class '" + positive_class + "' in '" + path.string() + "'");
  }
  if (neg == 0) {
    throw IngestError("no rows of class '" + negative_class + "' in '" + path.string() + "'");
  }

  Matrix x(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(width - 1));
  LabelVector y(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const auto& rec = records[kept[k]];
    Eigen::Index col = 0;
    for (std::size_t c = 0; c < width; ++c) {
      if (c == label_idx) continue;
      auto value = parse_real(rec[c]);
      if (!value) {
        throw IngestError("unparsable cell '" + rec[c] + "' at row " + std::to_string(kept[k] + 1) +
                          ", column " + std::to_string(c + 1) + " of '" + path.string() + "'");
      }
      x(static_cast<Eigen::Index>(k), col++) = *value;
    }
    y[static_cast<Eigen::Index>(k)] = labels[k];
  }
  return Dataset(std::move(x), std::move(y), std::move(names));
}

std::string to_csv(const Dataset& data) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t c = 0; c < data.dims(); ++c) {
    out << (data.feature_names().empty() ? "x" + std::to_string(c) : data.feature_names()[c]) << ',';
  }
  out << "label\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    for (std::size_t c = 0; c < data.dims(); ++c) out << data.x()(row, static_cast<Eigen::Index>(c)) << ',';
    out << data.y()[row] << '\n';
  }
  return out.str();
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write '" + path.string() + "'");
  out << to_csv(data);
}

// ---------------------------------------------------------------------------
// Splitting

Split split_stratified(const Dataset& data, const SplitSpec& spec) {
  if (spec.n_train > data.size()) {
    throw InvalidArgument("n_train " + std::to_string(spec.n_train) + " exceeds dataset size " +
                          std::to_string(data.size()));
  }
  if (spec.per_class_balance && spec.n_train % 2 != 0) {
    throw InvalidArgument("balanced split needs an even n_train");
  }
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < data.size(); ++i) {
    (data.y()[static_cast<Eigen::Index>(i)] == 1 ? pos : neg).push_back(i);
  }
  std::size_t want_pos = spec.n_train - spec.n_train / 2;
  std::size_t want_neg = spec.n_train / 2;
  if (!spec.per_class_balance && want_pos > pos.size()) std::swap(want_pos, want_neg);
  if (want_pos > pos.size() || want_neg > neg.size()) {
    throw InvalidArgument("not enough members per class for a stratified split of " +
                          std::to_string(spec.n_train));
  }

  Rng rng_pos(derive_seed(spec.seed, 1));
  Rng rng_neg(derive_seed(spec.seed, 2));
  std::shuffle(pos.begin(), pos.end(), rng_pos);
  std::shuffle(neg.begin(), neg.end(), rng_neg);

  std::vector<std::size_t> train(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(want_pos));
  train.insert(train.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(want_neg));
  std::sort(train.begin(), train.end());

  std::vector<std::size_t> test;
  test.reserve(data.size() - train.size());
  std::size_t t = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (t < train.size() && train[t] == i) {
      ++t;
    } else {
      test.push_back(i);
    }
  }
  if (train.empty()) throw InvalidArgument("n_train must be at least 1");
  if (test.empty()) throw InvalidArgument("split leaves no test points");
  return Split{data.subset(train), data.subset(test), std::move(train), std::move(test)};
}

}  // namespace qsvm
