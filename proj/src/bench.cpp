#include "qsvm/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <new>
#include <set>
#include <sstream>

#include "qsvm/error.hpp"
#include "qsvm/random.hpp"
#include "qsvm/svm.hpp"

namespace qsvm {

// ---------------------------------------------------------------------------
// Dataset sources and experiment specs

Dataset DatasetSource::load(std::uint64_t seed) const {
  switch (kind) {
    case Kind::blobs:
      return generate_blobs(n, d, seed, center_distance);
    case Kind::hyperplane: {
      Vector normal = Vector::Ones(static_cast<Eigen::Index>(d));
      if (!w.empty()) normal = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
      return generate_hyperplane(n, d, normal, b, seed, margin);
    }
    case Kind::csv:
      return load_csv(path, ColumnRef{label_column}, positive_class, negative_class);
  }
  throw InvalidArgument("unknown dataset source");
}

std::string DatasetSource::describe() const {
  switch (kind) {
    case Kind::blobs: return "blobs";
    case Kind::hyperplane: return "hyperplane";
    case Kind::csv: return path.filename().string() + ":" + positive_class + "|" + negative_class;
  }
  return "?";
}

void ExperimentSpec::validate() const {
  if (repetitions < 1) throw InvalidArgument("repetitions must be at least 1");
  if (n_train < 2) throw InvalidArgument("n_train must be at least 2");
  if (!(equality_penalty >= 0.0)) throw InvalidArgument("equality_penalty must be nonnegative");
  if (!(min_sample_seconds >= 0.0)) throw InvalidArgument("min_sample_seconds must be nonnegative");
  sa.validate();
  baseline.validate();
  if (source.kind == DatasetSource::Kind::csv && !std::filesystem::exists(source.path)) {
    throw IngestError("dataset file '" + source.path.string() + "' does not exist");
  }
}

ExperimentSpec ExperimentSpec::from_json(const Json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw InvalidArgument("experiment spec must be a JSON object");
  ExperimentSpec spec;
  try {
    if (doc.contains("dataset")) {
      const auto& ds = doc.at("dataset");
      DatasetSource& src = spec.source;
      if (ds.contains("csv")) {
        src.kind = DatasetSource::Kind::csv;
        std::filesystem::path p = ds.at("csv").get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        src.path = p;
        src.label_column = ds.at("label_column").is_number()
                               ? std::to_string(ds.at("label_column").get<std::size_t>())
                               : ds.at("label_column").get<std::string>();
        src.positive_class = ds.at("positive").get<std::string>();
        src.negative_class = ds.at("negative").get<std::string>();
      } else {
        const std::string gen = ds.value("generator", std::string("blobs"));
        if (gen == "blobs") {
          src.kind = DatasetSource::Kind::blobs;
        } else if (gen == "hyperplane") {
          src.kind = DatasetSource::Kind::hyperplane;
        } else {
          throw InvalidArgument("unknown generator '" + gen + "'");
        }
        src.n = ds.value("n", src.n);
        src.d = ds.value("d", src.d);
        src.center_distance = ds.value("center_distance", src.center_distance);
        src.w = ds.value("w", src.w);
        src.b = ds.value("b", src.b);
        src.margin = ds.value("margin", src.margin);
      }
    }
    spec.n_train = doc.value("n_train", spec.n_train);
    spec.repetitions = doc.value("repetitions", spec.repetitions);
    if (doc.contains("precision")) spec.precision = PrecisionVector(doc.at("precision").get<std::vector<double>>());
    spec.equality_penalty = doc.value("equality_penalty", spec.equality_penalty);
    if (doc.contains("sa")) spec.sa = sa_params_from_json(doc.at("sa"), spec.sa);
    if (doc.contains("baseline")) spec.baseline = baseline_params_from_json(doc.at("baseline"), spec.baseline);
    if (doc.contains("normalization")) spec.normalization = parse_normalization(doc.at("normalization").get<std::string>());
    spec.seed = doc.value("seed", spec.seed);
    spec.exhaustive = doc.value("exhaustive", spec.exhaustive);
    spec.min_sample_seconds = doc.value("min_sample_seconds", spec.min_sample_seconds);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad experiment spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

Json ExperimentSpec::to_json() const {
  Json ds;
  switch (source.kind) {
    case DatasetSource::Kind::csv:
      ds["csv"] = source.path.string();
      ds["label_column"] = source.label_column;
      ds["positive"] = source.positive_class;
      ds["negative"] = source.negative_class;
      break;
    case DatasetSource::Kind::blobs:
      ds["generator"] = "blobs";
      ds["n"] = source.n;
      ds["d"] = source.d;
      ds["center_distance"] = source.center_distance;
      break;
    case DatasetSource::Kind::hyperplane:
      ds["generator"] = "hyperplane";
      ds["n"] = source.n;
      ds["d"] = source.d;
      ds["w"] = source.w;
      ds["b"] = source.b;
      ds["margin"] = source.margin;
      break;
  }
  Json doc;
  doc["dataset"] = std::move(ds);
  doc["n_train"] = n_train;
  doc["repetitions"] = repetitions;
  doc["precision"] = precision.powers();
  doc["equality_penalty"] = equality_penalty;
  doc["sa"] = sa_params_to_json(sa);
  doc["baseline"] = baseline_params_to_json(baseline);
  doc["normalization"] = to_string(normalization);
  doc["seed"] = seed;
  doc["exhaustive"] = exhaustive;
  doc["min_sample_seconds"] = min_sample_seconds;
  return doc;
}

// ---------------------------------------------------------------------------
// Reports

bool is_timing_column(const std::string& column) {
  return column.size() >= 3 && column.compare(column.size() - 3, 3, "_ms") == 0;
}

std::vector<std::string> Report::groups() const {
  std::vector<std::string> out;
  for (const auto& r : records) {
    if (std::find(out.begin(), out.end(), r.group) == out.end()) out.push_back(r.group);
  }
  return out;
}

namespace {

std::vector<Aggregate> compute_aggregates(const Report& report) {
  std::vector<Aggregate> out;
  for (const auto& group : report.groups()) {
    std::set<std::string> columns;
    for (const auto& r : report.records) {
      if (r.group != group) continue;
      for (const auto& [k, v] : r.values) columns.insert(k);
    }
    for (const auto& column : columns) {
      Aggregate agg{group, column, 0, 0.0, 0.0};
      double sum = 0.0;
      for (const auto& r : report.records) {
        if (r.group != group) continue;
        if (auto it = r.values.find(column); it != r.values.end()) {
          sum += it->second;
          ++agg.count;
        }
      }
      agg.mean = sum / static_cast<double>(agg.count);
      double sq = 0.0;
      for (const auto& r : report.records) {
        if (r.group != group) continue;
        if (auto it = r.values.find(column); it != r.values.end()) {
          sq += (it->second - agg.mean) * (it->second - agg.mean);
        }
      }
      agg.stddev = std::sqrt(sq / static_cast<double>(agg.count));
      out.push_back(agg);
    }
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void Report::recompute_aggregates() { aggregates = compute_aggregates(*this); }

bool Report::aggregates_consistent(double tolerance) const {
  const auto fresh = compute_aggregates(*this);
  if (fresh.size() != aggregates.size()) return false;
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    const auto& a = fresh[i];
    const auto& b = aggregates[i];
    if (a.group != b.group || a.column != b.column || a.count != b.count) return false;
    if (std::abs(a.mean - b.mean) > tolerance * (1.0 + std::abs(a.mean))) return false;
    if (std::abs(a.stddev - b.stddev) > tolerance * (1.0 + std::abs(a.stddev))) return false;
  }
  return true;
}

const Aggregate* Report::find(const std::string& group, const std::string& column) const {
  for (const auto& a : aggregates) {
    if (a.group == group && a.column == column) return &a;
  }
  return nullptr;
}

Json Report::to_json(ReportFormat format) const {
  if (!aggregates_consistent()) throw Error("internal", "report aggregates do not match its records");
  Json doc;
  doc["experiment"] = experiment;
  doc["spec"] = spec;
  doc["timings_included"] = format.timings;
  Json recs = Json::array();
  for (const auto& r : records) {
    Json rec;
    rec["group"] = r.group;
    rec["repetition"] = r.repetition;
    Json values = Json::object();
    for (const auto& [k, v] : r.values) {
      if (format.timings || !is_timing_column(k)) values[k] = v;
    }
    rec["values"] = std::move(values);
    if (format.timings && !r.samples.empty()) rec["samples"] = r.samples;
    recs.push_back(std::move(rec));
  }
  doc["records"] = std::move(recs);
  Json aggs = Json::array();
  for (const auto& a : aggregates) {
    if (!format.timings && is_timing_column(a.column)) continue;
    aggs.push_back({{"group", a.group}, {"column", a.column}, {"count", a.count}, {"mean", a.mean},
                    {"std", a.stddev}});
  }
  doc["aggregates"] = std::move(aggs);
  return doc;
}

std::string Report::to_csv(ReportFormat format) const {
  if (!aggregates_consistent()) throw Error("internal", "report aggregates do not match its records");
  std::set<std::string> columns;
  std::set<std::string> sample_columns;
  for (const auto& r : records) {
    for (const auto& [k, v] : r.values) {
      if (format.timings || !is_timing_column(k)) columns.insert(k);
    }
    if (format.timings) {
      for (const auto& [k, v] : r.samples) sample_columns.insert(k);
    }
  }
  std::ostringstream out;
  out << "group,repetition";
  for (const auto& c : columns) out << ',' << csv_escape(c);
  for (const auto& c : sample_columns) out << ',' << csv_escape(c + "_samples");
  out << '\n';
  for (const auto& r : records) {
    out << csv_escape(r.group) << ',' << r.repetition;
    for (const auto& c : columns) {
      out << ',';
      if (auto it = r.values.find(c); it != r.values.end()) out << format_number(it->second);
    }
    for (const auto& c : sample_columns) {
      out << ',';
      if (auto it = r.samples.find(c); it != r.samples.end()) {
        for (std::size_t i = 0; i < it->second.size(); ++i) {
          out << (i ? ";" : "") << format_number(it->second[i]);
        }
      }
    }
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Timing and fits

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi) {
  if (x.size() != y.size()) throw InvalidArgument("slope fit needs equally long inputs");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= lo && x[i] <= hi && x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) throw InvalidArgument("slope fit needs at least two positive points in range");
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw InvalidArgument("slope fit needs distinct x values");
  return sxy / sxx;
}

double report_slope(const Report& report, const std::string& axis, const std::string& column,
                    double lo, double hi) {
  std::vector<double> x, y;
  for (const auto& r : report.records) {
    auto ix = r.values.find(axis);
    auto iy = r.values.find(column);
    if (ix != r.values.end() && iy != r.values.end()) {
      x.push_back(ix->second);
      y.push_back(iy->second);
    }
  }
  return loglog_slope(x, y, lo, hi);
}

double time_median_ms(const std::function<void()>& fn, double min_seconds, std::vector<double>* samples) {
  using Clock = std::chrono::steady_clock;
  std::vector<double> per_call;
  for (int s = 0; s < 3; ++s) {
    std::size_t calls = 0;
    const auto start = Clock::now();
    double elapsed = 0.0;
    do {
      fn();
      ++calls;
      elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    } while (elapsed < min_seconds);
    per_call.push_back(1e3 * elapsed / static_cast<double>(calls));
  }
  if (samples) *samples = per_call;
  std::vector<double> sorted = per_call;
  std::sort(sorted.begin(), sorted.end());
  return sorted[1];
}

// ---------------------------------------------------------------------------
// Experiments

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::size_t support_count(const Vector& lambdas) {
  return static_cast<std::size_t>((lambdas.array() > kSupportThreshold).count());
}

// Derived seeds for the independent random choices of one repetition.
struct RepSeeds {
  std::uint64_t split, sa, baseline;
};

RepSeeds rep_seeds(const ExperimentSpec& spec, std::size_t rep) {
  const std::uint64_t base = derive_seed(spec.seed, rep);
  return {derive_seed(base, 1), derive_seed(base, 2) ^ spec.sa.seed, derive_seed(base, 3) ^ spec.baseline.seed};
}

void record_qubo_path(Record& rec, const std::string& prefix, const BinarySolution& solution, const ExperimentSpec& spec, const Dataset& train,
                      const Dataset& test) {
  const Vector lambdas = decode_multipliers(solution.bits, spec.precision, train.size());
  rec.values[prefix + ".energy"] = solution.energy;
  rec.values[prefix + ".support_vectors"] = static_cast<double>(support_count(lambdas));
  rec.values[prefix + ".equality_residual"] = lambdas.dot(train.y().cast<double>());
  try {
    const SvmModel model = recover_model(train, lambdas);
    rec.values[prefix + ".train_acc"] = accuracy(model, train);
    rec.values[prefix + ".test_acc"] = accuracy(model, test);
    rec.values[prefix + ".failed"] = 0.0;
  } catch (const NoSupportVectors&) {
    rec.values[prefix + ".failed"] = 1.0;
  }
}

Record accuracy_repetition(const ExperimentSpec& spec, const Dataset& data, std::size_t rep,
                           const std::string& group, unsigned threads) {
  const RepSeeds seeds = rep_seeds(spec, rep);
  const Split split = split_stratified(data, SplitSpec{spec.n_train, seeds.split, true});
  const Normalizer norm = Normalizer::fit(split.train, spec.normalization);
  const Dataset train = norm.apply(split.train);
  const Dataset test = norm.apply(split.test);

  Record rec;
  rec.group = group;
  rec.repetition = rep;
  rec.values["n_train"] = static_cast<double>(train.size());
  rec.values["n_test"] = static_cast<double>(test.size());

  BaselineParams bp = spec.baseline;
  bp.seed = seeds.baseline;
  const BaselineResult base = train_classical(train, bp, true);
  rec.values["baseline.train_acc"] = accuracy(base.model, train);
  rec.values["baseline.test_acc"] = accuracy(base.model, test);
  rec.values["baseline.converged"] = base.converged ? 1.0 : 0.0;
  rec.values["baseline.iterations"] = static_cast<double>(base.iterations);
  rec.values["baseline.support_vectors"] = static_cast<double>(base.model.support_indices.size());
  rec.values["baseline.train_ms"] = 1e3 * base.train_seconds;
  // Feasibility and ascent diagnostics.
  const Vector& alpha = base.model.lambdas;
  rec.values["baseline.equality_residual"] = std::abs(alpha.dot(train.y().cast<double>()));
  rec.values["baseline.box_violation"] =
      std::max({0.0, -alpha.minCoeff(), alpha.maxCoeff() - bp.C});
  double worst_drop = 0.0;
  for (std::size_t t = 1; t < base.objective_trace.size(); ++t) {
    worst_drop = std::max(worst_drop, base.objective_trace[t - 1] - base.objective_trace[t]);
  }
  rec.values["baseline.max_objective_drop"] = worst_drop;

  auto start = Clock::now();
  const QuboProblem problem = build_qubo(train, spec.precision, spec.equality_penalty);
  rec.values["sa.preprocess_ms"] = ms_since(start);
  rec.values["qubo.variables"] = static_cast<double>(problem.size());

  SaParams sa = spec.sa;
  sa.seed = seeds.sa;
  start = Clock::now();
  const BinarySolution sa_solution = solve_sa(problem, sa, threads);
  rec.values["sa.sample_ms"] = ms_since(start);
  record_qubo_path(rec, "sa", sa_solution, spec, train, test);

  if (spec.exhaustive && problem.size() <= kMaxExhaustiveVariables) {
    start = Clock::now();
    const BinarySolution exact = solve_exhaustive(problem);
    rec.values["exhaustive.sample_ms"] = ms_since(start);
    record_qubo_path(rec, "exhaustive", exact, spec, train, test);
  }
  return rec;
}

void finish(Report& report, const std::string& name, const ExperimentSpec& spec) {
  report.experiment = name;
  report.spec = spec.to_json();
  report.recompute_aggregates();
}

}  // namespace

Report run_accuracy_experiment(const ExperimentSpec& spec, unsigned threads) {
  spec.validate();
  const Dataset data = spec.source.load(derive_seed(spec.seed, 0x5eed));
  Report report;
  for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
    report.records.push_back(accuracy_repetition(spec, data, rep, "all", threads));
  }
  finish(report, "accuracy", spec);
  return report;
}

Report run_sweep_sensitivity(const ExperimentSpec& spec, const std::vector<std::size_t>& sweep_grid,
                             unsigned threads) {
  if (sweep_grid.empty()) throw InvalidArgument("sweep grid is empty");
  spec.validate();
  const Dataset data = spec.source.load(derive_seed(spec.seed, 0x5eed));
  Report report;
  for (std::size_t sweeps : sweep_grid) {
    ExperimentSpec cell = spec;
    cell.sa.sweeps_per_read = sweeps;
    cell.sa.validate();
    const std::string group = "sweeps=" + std::to_string(sweeps);
    for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
      Record rec = accuracy_repetition(cell, data, rep, group, threads);
      rec.values["sweeps"] = static_cast<double>(sweeps);
      report.records.push_back(std::move(rec));
    }
  }
  finish(report, "sweep-sensitivity", spec);
  return report;
}

namespace {

// Times the three training phases on one generated blob dataset.
Record scaling_cell(const ExperimentSpec& spec, std::size_t n, std::size_t d, unsigned threads,
                    const std::string& group, std::size_t index) {
  Record rec;
  rec.group = group;
  rec.repetition = index;
  rec.values["N"] = static_cast<double>(n);
  rec.values["d"] = static_cast<double>(d);
  rec.values["M"] = static_cast<double>(n * spec.precision.size());
  try {
    const double distance =
        spec.source.kind == DatasetSource::Kind::blobs ? spec.source.center_distance : 10.0;
    const Dataset raw = generate_blobs(n, d, derive_seed(spec.seed, (n << 32) ^ d), distance);
    const Dataset data = normalize(raw, spec.normalization);

    BaselineParams bp = spec.baseline;
    bp.seed = derive_seed(spec.seed, 3);
    std::vector<double> samples;
    std::optional<BaselineResult> base;
    rec.values["baseline_ms"] = time_median_ms([&] { base = train_classical(data, bp); },
                                               spec.min_sample_seconds, &samples);
    rec.samples["baseline_ms"] = samples;
    rec.values["baseline.train_acc"] = accuracy(base->model, data);
    rec.values["baseline.iterations"] = static_cast<double>(base->iterations);

    std::optional<QuboProblem> problem;
    rec.values["preprocess_ms"] = time_median_ms(
        [&] { problem = build_qubo(data, spec.precision, spec.equality_penalty); },
        spec.min_sample_seconds, &samples);
    rec.samples["preprocess_ms"] = samples;

    SaParams sa = spec.sa;
    sa.seed = derive_seed(spec.seed, 2) ^ spec.sa.seed;
    std::optional<BinarySolution> solution;
    rec.values["sample_ms"] = time_median_ms([&] { solution = solve_sa(*problem, sa, threads); },
                                             spec.min_sample_seconds, &samples);
    rec.samples["sample_ms"] = samples;
    rec.values["total_quantum_analog_ms"] = rec.values["preprocess_ms"] + rec.values["sample_ms"];
    rec.values["sa.energy"] = solution->energy;
    const Vector lambdas = decode_multipliers(solution->bits, spec.precision, n);
    try {
      rec.values["sa.train_acc"] = accuracy(recover_model(data, lambdas), data);
      rec.values["sa.failed"] = 0.0;
    } catch (const NoSupportVectors&) {
      rec.values["sa.failed"] = 1.0;
    }
    rec.values["failed"] = 0.0;
  } catch (const std::bad_alloc&) {
    rec.values["failed"] = 1.0;
  }
  return rec;
}

}  // namespace

Report run_feature_scaling(const ExperimentSpec& spec, const std::vector<std::size_t>& feature_grid,
                           unsigned threads) {
  if (feature_grid.empty()) throw InvalidArgument("feature grid is empty");
  if (!std::is_sorted(feature_grid.begin(), feature_grid.end())) {
    throw InvalidArgument("feature grid must be ascending");
  }
  if (spec.n_train < 2 || spec.n_train % 2 != 0) throw InvalidArgument("n_train must be even");
  spec.validate();
  Report report;
  for (std::size_t c = 0; c < feature_grid.size(); ++c) {
    const std::size_t d = feature_grid[c];
    if (d < 1) throw InvalidArgument("feature counts must be positive");
    report.records.push_back(scaling_cell(spec, spec.n_train, d, threads, "d=" + std::to_string(d), c));
  }
  finish(report, "feature-scaling", spec);
  return report;
}

Report run_point_scaling(const ExperimentSpec& spec, const std::vector<std::size_t>& point_grid,
                         unsigned threads) {
  if (point_grid.empty()) throw InvalidArgument("point grid is empty");
  if (!std::is_sorted(point_grid.begin(), point_grid.end())) {
    throw InvalidArgument("point grid must be ascending");
  }
  for (std::size_t n : point_grid) {
    if (n < 2 || n % 2 != 0) throw InvalidArgument("point counts must be even and at least 2");
  }
  spec.validate();
  Report report;
  for (std::size_t c = 0; c < point_grid.size(); ++c) {
    const std::size_t n = point_grid[c];
    report.records.push_back(scaling_cell(spec, n, spec.source.d, threads, "N=" + std::to_string(n), c));
  }
  finish(report, "point-scaling", spec);
  return report;
}

}  // namespace qsvm
