// Command-line front end: dataset generation, training, evaluation, QUBO
// export and the benchmark experiments.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qsvm/baseline.hpp"
#include "qsvm/bench.hpp"
#include "qsvm/dataset.hpp"
#include "qsvm/error.hpp"
#include "qsvm/qubo.hpp"
#include "qsvm/serialize.hpp"
#include "qsvm/solver.hpp"
#include "qsvm/svm.hpp"

namespace {

using namespace qsvm;

struct DataArgs {
  std::string path;
  std::string label_column = "label";
  std::string positive = "1";
  std::string negative = "-1";

  void add(CLI::App* cmd) {
    cmd->add_option("--data", path, "CSV dataset")->required();
    cmd->add_option("--label-column", label_column, "Label column name or zero-based index");
    cmd->add_option("--positive", positive, "Label literal mapped to +1");
    cmd->add_option("--negative", negative, "Label literal mapped to -1");
  }

  Dataset load() const { return load_csv(path, ColumnRef{label_column}, positive, negative); }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write '" + path + "'");
  out << text;
}

std::vector<std::size_t> default_feature_grid(bool large) {
  std::vector<std::size_t> grid;
  for (int e = 1; e <= (large ? 23 : 14); ++e) grid.push_back(std::size_t{1} << e);
  return grid;
}

std::vector<std::size_t> default_point_grid() {
  std::vector<std::size_t> grid;
  for (std::size_t n = 4; n <= 54; n += 2) grid.push_back(n);
  return grid;
}

struct BenchArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> repetitions;
  std::optional<std::size_t> n_train;
  std::optional<std::size_t> d;
  std::optional<std::size_t> reads;
  std::optional<std::size_t> sweeps;
  std::optional<double> penalty;
  std::optional<std::string> normalization;
  std::string out_json;
  std::string out_csv;
  bool no_timings = false;
  std::vector<std::size_t> grid;

  void add(CLI::App* cmd, bool with_grid) {
    cmd->add_option("--config", config, "Experiment spec (JSON)");
    cmd->add_option("--seed", seed, "Override the experiment seed");
    cmd->add_option("--repetitions", repetitions, "Override the repetition count");
    cmd->add_option("--n-train", n_train, "Override the training-set size");
    cmd->add_option("--d", d, "Override the generator feature count");
    cmd->add_option("--reads", reads, "Override SA reads");
    cmd->add_option("--sweeps", sweeps, "Override SA sweeps per read");
    cmd->add_option("--penalty", penalty, "Override the equality penalty");
    cmd->add_option("--normalization", normalization, "min_max, z_score or none");
    cmd->add_option("--json", out_json, "Write the JSON report here ('-' for stdout)");
    cmd->add_option("--csv", out_csv, "Write the CSV report here ('-' for stdout)");
    cmd->add_flag("--no-timings", no_timings, "Omit wall-clock columns (byte-reproducible output)");
    if (with_grid) cmd->add_option("--grid", grid, "Grid values")->delimiter(',');
  }

  // Defaults apply before the config file and flags.
  ExperimentSpec spec(std::size_t default_d = 0, std::size_t default_n_train = 0) const {
    ExperimentSpec s;
    if (default_d) s.source.d = default_d;
    if (default_n_train) s.n_train = default_n_train;
    if (!config.empty()) {
      const std::filesystem::path path(config);
      s = ExperimentSpec::from_json(read_json_file(config), path.parent_path());
    }
    if (seed) s.seed = *seed;
    if (repetitions) s.repetitions = *repetitions;
    if (n_train) s.n_train = *n_train;
    if (d) s.source.d = *d;
    if (reads) s.sa.num_reads = *reads;
    if (sweeps) s.sa.sweeps_per_read = *sweeps;
    if (penalty) s.equality_penalty = *penalty;
    if (normalization) s.normalization = parse_normalization(*normalization);
    s.validate();
    return s;
  }

  void emit(const Report& report) const {
    const ReportFormat format{!no_timings};
    if (!out_csv.empty()) write_text(out_csv, report.to_csv(format));
    if (!out_json.empty() || out_csv.empty()) write_text(out_json, report.to_json(format).dump(2) + "\n");
  }
};

void print_error(const std::string& kind, const std::string& message) {
  Json doc;
  doc["error"] = {{"kind", kind}, {"message", message}};
  std::cerr << doc.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear SVM training through QUBO reformulation and simulated annealing"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset as CSV");
  std::string gen_kind = "blobs", gen_out;
  std::size_t gen_n = 120, gen_d = 2;
  std::uint64_t gen_seed = 0;
  double gen_distance = 10.0, gen_b = 0.0, gen_margin = kHyperplaneMarginEpsilon;
  std::vector<double> gen_w;
  gen->add_option("--kind", gen_kind, "blobs or hyperplane")->check(CLI::IsMember({"blobs", "hyperplane"}));
  gen->add_option("--n", gen_n, "Number of points");
  gen->add_option("--d", gen_d, "Number of features");
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--center-distance", gen_distance, "Blob centre separation");
  gen->add_option("--w", gen_w, "Hyperplane normal (comma separated)")->delimiter(',');
  gen->add_option("--b", gen_b, "Hyperplane offset");
  gen->add_option("--margin", gen_margin, "Hyperplane exclusion band half-width");
  gen->add_option("--out", gen_out, "Output CSV ('-' or empty for stdout)");

  // train
  auto* train = app.add_subcommand("train", "Train one model and write it as JSON");
  DataArgs train_data;
  train_data.add(train);
  std::string method = "sa", train_out, train_norm = "none";
  std::vector<double> precision = PrecisionVector::standard().powers();
  double penalty = 0.0;
  SaParams sa;
  BaselineParams bp;
  std::uint64_t train_seed = 0;
  train->add_option("--method", method, "sa, exhaustive or classical")
      ->check(CLI::IsMember({"sa", "exhaustive", "classical"}));
  train->add_option("--precision", precision, "Precision vector (comma separated powers of two)")->delimiter(',');
  train->add_option("--penalty", penalty, "Equality-constraint penalty");
  train->add_option("--reads", sa.num_reads, "SA reads");
  train->add_option("--sweeps", sa.sweeps_per_read, "SA sweeps per read");
  train->add_option("--seed", train_seed, "Random seed");
  train->add_option("--C", bp.C, "Classical box bound");
  train->add_option("--tolerance", bp.tolerance, "Classical KKT tolerance");
  train->add_option("--normalize", train_norm, "min_max, z_score or none (stored in the model)");
  train->add_option("--out", train_out, "Model JSON ('-' or empty for stdout)");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Accuracy of a model JSON on a dataset");
  DataArgs eval_data;
  eval_data.add(eval);
  std::string model_path;
  eval->add_option("--model", model_path, "Model JSON")->required();

  // qubo-export
  auto* exportq = app.add_subcommand("qubo-export", "Write the QUBO of a dataset as JSON");
  DataArgs export_data;
  export_data.add(exportq);
  std::vector<double> export_precision = PrecisionVector::standard().powers();
  double export_penalty = 0.0;
  std::string export_norm = "none", export_out;
  exportq->add_option("--precision", export_precision, "Precision vector")->delimiter(',');
  exportq->add_option("--penalty", export_penalty, "Equality-constraint penalty");
  exportq->add_option("--normalize", export_norm, "min_max, z_score or none");
  exportq->add_option("--out", export_out, "QUBO JSON ('-' or empty for stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve a QUBO JSON document");
  std::string qubo_path, solve_method = "sa", solve_out;
  SaParams solve_sa_params;
  solve->add_option("--qubo", qubo_path, "QUBO JSON")->required();
  solve->add_option("--method", solve_method, "sa or exhaustive")->check(CLI::IsMember({"sa", "exhaustive"}));
  solve->add_option("--reads", solve_sa_params.num_reads, "SA reads");
  solve->add_option("--sweeps", solve_sa_params.sweeps_per_read, "SA sweeps per read");
  solve->add_option("--seed", solve_sa_params.seed, "Random seed");
  solve->add_option("--out", solve_out, "Solution JSON ('-' or empty for stdout)");

  // benches
  BenchArgs acc_args, feat_args, point_args, sweep_args;
  bool large = false;
  auto* acc = app.add_subcommand("accuracy-bench", "Train/test accuracy over repeated splits");
  acc_args.add(acc, false);
  auto* feat = app.add_subcommand("feature-bench", "Phase timings against feature count");
  feat_args.add(feat, true);
  feat->add_flag("--large", large, "Extend the default grid to 2^23 features (tens of GB of memory)");
  auto* point = app.add_subcommand("point-bench", "Phase timings against training-set size");
  point_args.add(point, true);
  auto* sweep = app.add_subcommand("sweep-bench", "Accuracy against SA sweep budget");
  sweep_args.add(sweep, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (*gen) {
      Dataset data = gen_kind == "blobs"
                         ? generate_blobs(gen_n, gen_d, gen_seed, gen_distance)
                         : generate_hyperplane(gen_n, gen_d,
                                               gen_w.empty() ? Vector::Ones(static_cast<Eigen::Index>(gen_d))
                                                             : Vector(Eigen::Map<Vector>(gen_w.data(), static_cast<Eigen::Index>(gen_w.size()))),
                                               gen_b, gen_seed, gen_margin);
      write_text(gen_out, to_csv(data));
    } else if (*train) {
      const Dataset raw = train_data.load();
      const Normalizer norm = Normalizer::fit(raw, parse_normalization(train_norm));
      const Dataset data = norm.apply(raw);
      SvmModel model;
      if (method == "classical") {
        bp.seed = train_seed;
        model = train_classical(data, bp).model;
      } else {
        const PrecisionVector p(precision);
        const QuboProblem problem = build_qubo(data, p, penalty);
        sa.seed = train_seed;
        const BinarySolution s = method == "sa" ? solve_sa(problem, sa) : solve_exhaustive(problem);
        model = recover_model(data, decode_multipliers(s.bits, p, data.size()));
      }
      write_text(train_out, model_to_json(model, norm).dump(2) + "\n");
    } else if (*eval) {
      const Json doc = read_json_file(model_path);
      const SvmModel model = model_from_json(doc);
      Dataset data = eval_data.load();
      if (auto norm = normalizer_from_json(doc)) data = norm->apply(data);
      Json out;
      out["accuracy"] = accuracy(model, data);
      out["n"] = data.size();
      std::cout << out.dump() << std::endl;
    } else if (*exportq) {
      Dataset data = export_data.load();
      data = normalize(data, parse_normalization(export_norm));
      const QuboProblem problem = build_qubo(data, PrecisionVector(export_precision), export_penalty);
      write_text(export_out, qubo_to_json(problem).dump() + "\n");
    } else if (*solve) {
      const QuboProblem problem = qubo_from_json(read_json_file(qubo_path));
      const BinarySolution s =
          solve_method == "sa" ? solve_sa(problem, solve_sa_params) : solve_exhaustive(problem);
      write_text(solve_out, solution_to_json(s).dump() + "\n");
    } else if (*acc) {
      acc_args.emit(run_accuracy_experiment(acc_args.spec()));
    } else if (*feat) {
      auto grid = feat_args.grid.empty() ? default_feature_grid(large) : feat_args.grid;
      feat_args.emit(run_feature_scaling(feat_args.spec(0, 52), grid));
    } else if (*point) {
      auto grid = point_args.grid.empty() ? default_point_grid() : point_args.grid;
      point_args.emit(run_point_scaling(point_args.spec(64), grid));
    } else if (*sweep) {
      auto grid = sweep_args.grid.empty()
                      ? std::vector<std::size_t>{kSweepsLow, kSweepsMid, kSweepsHigh}
                      : sweep_args.grid;
      sweep_args.emit(run_sweep_sensitivity(sweep_args.spec(), grid));
    }
  } catch (const Error& e) {
    print_error(e.kind(), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
