#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsvm/baseline.hpp"
#include "qsvm/dataset.hpp"
#include "qsvm/qubo.hpp"
#include "qsvm/serialize.hpp"
#include "qsvm/solver.hpp"

namespace qsvm {

struct DatasetSource {
  enum class Kind { blobs, hyperplane, csv };

  Kind kind = Kind::blobs;
  // Generators: total points drawn (train + test) and feature count.
  std::size_t n = 120;
  std::size_t d = 2;
  double center_distance = 10.0;
  std::vector<double> w;  // hyperplane normal; defaults to all ones
  double b = 0.0;
  double margin = kHyperplaneMarginEpsilon;
  // CSV
  std::filesystem::path path;
  std::string label_column;
  std::string positive_class;
  std::string negative_class;

  Dataset load(std::uint64_t seed) const;
  std::string describe() const;
};

struct ExperimentSpec {
  DatasetSource source;
  std::size_t n_train = 20;
  std::size_t repetitions = 10;
  PrecisionVector precision = PrecisionVector::standard();
  double equality_penalty = 0.0;
  SaParams sa;
  BaselineParams baseline;
  Normalization normalization = Normalization::min_max;
  std::uint64_t seed = 0;
  // Also solve exhaustively whenever N*K <= kMaxExhaustiveVariables.
  bool exhaustive = true;
  // Minimum wall time of one timing sample in the scaling studies.
  double min_sample_seconds = 0.005;

  void validate() const;

  // Relative CSV paths are resolved against `base_dir`.
  static ExperimentSpec from_json(const Json& doc, const std::filesystem::path& base_dir = {});
  Json to_json() const;
};

// One repetition (accuracy runs) or one grid cell (scaling runs). Columns
// whose name ends in "_ms" are wall-clock timings; `samples` holds the raw
// timing samples behind a median.
struct Record {
  std::string group;
  std::size_t repetition = 0;
  std::map<std::string, double> values;
  std::map<std::string, std::vector<double>> samples;
};

// Mean and population standard deviation of one column over the records of
// a group that carry it. Failed runs omit their accuracy columns and so
// never enter a mean.
struct Aggregate {
  std::string group;
  std::string column;
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

struct ReportFormat {
  bool timings = true;
};

class Report {
 public:
  std::string experiment;
  Json spec;
  std::vector<Record> records;
  std::vector<Aggregate> aggregates;

  void recompute_aggregates();
  // Recomputes aggregates from the records and compares with the stored ones.
  bool aggregates_consistent(double tolerance = 1e-12) const;

  const Aggregate* find(const std::string& group, const std::string& column) const;
  std::vector<std::string> groups() const;

  Json to_json(ReportFormat format = {}) const;
  std::string to_csv(ReportFormat format = {}) const;
};

bool is_timing_column(const std::string& column);

// Least-squares slope of log(y) against log(x) over points with
// lo <= x <= hi and y > 0.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y,
                    double lo = 0.0, double hi = 1e300);

// Slope of `column` against `axis` across the records of a scaling report.
double report_slope(const Report& report, const std::string& axis, const std::string& column,
                    double lo = 0.0, double hi = 1e300);

// Median-of-3 per-call wall time of `fn`; each sample repeats the call until
// at least `min_seconds` have elapsed. Raw per-call samples go to `samples`.
double time_median_ms(const std::function<void()>& fn, double min_seconds,
                      std::vector<double>* samples = nullptr);

Report run_accuracy_experiment(const ExperimentSpec& spec, unsigned threads = 0);
Report run_feature_scaling(const ExperimentSpec& spec, const std::vector<std::size_t>& feature_grid,
                           unsigned threads = 0);
Report run_point_scaling(const ExperimentSpec& spec, const std::vector<std::size_t>& point_grid,
                         unsigned threads = 0);
Report run_sweep_sensitivity(const ExperimentSpec& spec, const std::vector<std::size_t>& sweep_grid,
                             unsigned threads = 0);

}  // namespace qsvm
