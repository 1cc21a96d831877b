#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qsvm/baseline.hpp"
#include "qsvm/bench.hpp"
#include "qsvm/dataset.hpp"
#include "qsvm/error.hpp"
#include "qsvm/qubo.hpp"
#include "qsvm/serialize.hpp"
#include "qsvm/solver.hpp"
#include "qsvm/svm.hpp"

namespace py = pybind11;
using namespace qsvm;

namespace {

ColumnRef to_column(const py::object& column) {
  if (py::isinstance<py::int_>(column)) return ColumnRef{column.cast<std::size_t>()};
  return ColumnRef{column.cast<std::string>()};
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Linear SVM training through QUBO reformulation";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(e.kind(), e.what()).ptr());
    }
  });

  // dataset
  py::class_<Dataset>(m, "Dataset")
      .def(py::init<Matrix, LabelVector, std::vector<std::string>>(), py::arg("x"), py::arg("y"),
           py::arg("feature_names") = std::vector<std::string>{})
      .def_property_readonly("x", &Dataset::x)
      .def_property_readonly("y", &Dataset::y)
      .def_property_readonly("feature_names", &Dataset::feature_names)
      .def_property_readonly("size", &Dataset::size)
      .def_property_readonly("dims", &Dataset::dims)
      .def("count", &Dataset::count)
      .def("subset", &Dataset::subset)
      .def("__len__", &Dataset::size);

  py::enum_<Normalization>(m, "Normalization")
      .value("min_max", Normalization::min_max)
      .value("z_score", Normalization::z_score)
      .value("none", Normalization::none);

  py::class_<Normalizer>(m, "Normalizer")
      .def_static("fit", &Normalizer::fit)
      .def("apply", py::overload_cast<const Dataset&>(&Normalizer::apply, py::const_))
      .def_property_readonly("method", &Normalizer::method)
      .def_property_readonly("offset", &Normalizer::offset)
      .def_property_readonly("scale", &Normalizer::scale);

  m.attr("HYPERPLANE_MARGIN_EPSILON") = kHyperplaneMarginEpsilon;
  m.def("generate_blobs", &generate_blobs, py::arg("n"), py::arg("d"), py::arg("seed"),
        py::arg("center_distance") = 10.0);
  m.def("generate_hyperplane", &generate_hyperplane, py::arg("n"), py::arg("d"), py::arg("w"), py::arg("b"),
        py::arg("seed"), py::arg("margin") = kHyperplaneMarginEpsilon);
  m.def(
      "load_csv",
      [](const std::filesystem::path& path, const py::object& label_column, const std::string& positive,
         const std::string& negative) { return load_csv(path, to_column(label_column), positive, negative); },
      py::arg("path"), py::arg("label_column"), py::arg("positive_class"), py::arg("negative_class"));
  m.def("to_csv", py::overload_cast<const Dataset&>(&to_csv));
  m.def("normalize", &normalize, py::arg("data"), py::arg("method") = Normalization::min_max);
  m.def(
      "split_stratified",
      [](const Dataset& data, std::size_t n_train, std::uint64_t seed, bool balanced) {
        Split s = split_stratified(data, SplitSpec{n_train, seed, balanced});
        return py::make_tuple(s.train, s.test, s.train_indices, s.test_indices);
      },
      py::arg("data"), py::arg("n_train"), py::arg("seed"), py::arg("per_class_balance") = true);

  // qubo
  py::class_<PrecisionVector>(m, "PrecisionVector")
      .def(py::init<std::vector<double>>())
      .def_static("standard", &PrecisionVector::standard)
      .def_static("from_exponents", &PrecisionVector::from_exponents)
      .def_property_readonly("powers", &PrecisionVector::powers)
      .def("__len__", &PrecisionVector::size);

  py::class_<QuboProblem>(m, "QuboProblem")
      .def(py::init<Matrix, Vector, std::size_t, std::size_t>(), py::arg("quadratic"), py::arg("linear"),
           py::arg("n_points"), py::arg("k_bits"))
      .def_property_readonly("quadratic", &QuboProblem::quadratic)
      .def_property_readonly("linear", &QuboProblem::linear)
      .def_property_readonly("n_points", &QuboProblem::n_points)
      .def_property_readonly("k_bits", &QuboProblem::k_bits)
      .def_property_readonly("size", &QuboProblem::size)
      .def("to_json", [](const QuboProblem& q) { return qubo_to_json(q).dump(); })
      .def_static("from_json", [](const std::string& text) { return qubo_from_json(parse(text)); });

  py::class_<BinarySolution>(m, "BinarySolution")
      .def_readonly("bits", &BinarySolution::bits)
      .def_readonly("energy", &BinarySolution::energy)
      .def_readonly("read_index", &BinarySolution::read_index);

  m.def("build_qubo", &build_qubo, py::arg("train"), py::arg("precision") = PrecisionVector::standard(),
        py::arg("equality_penalty") = 0.0);
  m.def(
      "energy", [](const QuboProblem& q, const Bits& bits) { return energy(q, bits); }, py::arg("problem"),
      py::arg("bits"));
  m.def(
      "decode_multipliers",
      [](const Bits& bits, const PrecisionVector& p, std::size_t n) { return decode_multipliers(bits, p, n); },
      py::arg("bits"), py::arg("precision"), py::arg("n_points"));

  // solver
  py::enum_<Schedule>(m, "Schedule").value("geometric", Schedule::geometric).value("linear", Schedule::linear);

  py::class_<SaParams>(m, "SaParams")
      .def(py::init([](std::size_t reads, std::size_t sweeps, std::optional<double> b0, std::optional<double> b1,
                       Schedule schedule, std::uint64_t seed) {
             SaParams p{reads, sweeps, b0, b1, schedule, seed};
             p.validate();
             return p;
           }),
           py::arg("num_reads") = 10, py::arg("sweeps_per_read") = kSweepsHigh, py::arg("beta_initial") = py::none(),
           py::arg("beta_final") = py::none(), py::arg("schedule") = Schedule::geometric, py::arg("seed") = 0)
      .def_readwrite("num_reads", &SaParams::num_reads)
      .def_readwrite("sweeps_per_read", &SaParams::sweeps_per_read)
      .def_readwrite("beta_initial", &SaParams::beta_initial)
      .def_readwrite("beta_final", &SaParams::beta_final)
      .def_readwrite("schedule", &SaParams::schedule)
      .def_readwrite("seed", &SaParams::seed);

  m.def("solve_exhaustive", &solve_exhaustive, py::call_guard<py::gil_scoped_release>());
  m.def("solve_sa", &solve_sa, py::arg("problem"), py::arg("params") = SaParams{}, py::arg("threads") = 0u,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "incremental_delta",
      [](const QuboProblem& q, const Bits& bits, std::size_t i) { return incremental_delta(q, bits, i); },
      py::arg("problem"), py::arg("bits"), py::arg("flip_index"));

  // svm
  py::class_<SvmModel>(m, "SvmModel")
      .def_readonly("w", &SvmModel::w)
      .def_readonly("bias", &SvmModel::bias)
      .def_readonly("lambdas", &SvmModel::lambdas)
      .def_readonly("support_indices", &SvmModel::support_indices)
      .def("to_json", [](const SvmModel& model) { return model_to_json(model).dump(); });

  m.def("dual_objective", &dual_objective);
  m.def("recover_model", &recover_model, py::arg("train"), py::arg("lambdas"), py::arg("bias") = py::none());
  m.def("decision_value", &decision_value);
  m.def("predict", &predict);
  m.def("accuracy", &accuracy);

  // baseline
  py::class_<BaselineParams>(m, "BaselineParams")
      .def(py::init([](double c, double tol, std::size_t passes, std::uint64_t seed) {
             BaselineParams p{c, tol, passes, seed};
             p.validate();
             return p;
           }),
           py::arg("C") = 1e6, py::arg("tolerance") = 1e-3, py::arg("max_passes") = 1000, py::arg("seed") = 0)
      .def_readwrite("C", &BaselineParams::C)
      .def_readwrite("tolerance", &BaselineParams::tolerance)
      .def_readwrite("max_passes", &BaselineParams::max_passes)
      .def_readwrite("seed", &BaselineParams::seed);

  py::class_<BaselineResult>(m, "BaselineResult")
      .def_readonly("model", &BaselineResult::model)
      .def_readonly("converged", &BaselineResult::converged)
      .def_readonly("iterations", &BaselineResult::iterations)
      .def_readonly("max_violation", &BaselineResult::max_violation)
      .def_readonly("objective_trace", &BaselineResult::objective_trace)
      .def_readonly("train_seconds", &BaselineResult::train_seconds);

  m.def("train_classical", &train_classical, py::arg("train"), py::arg("params") = BaselineParams{},
        py::arg("keep_trace") = false, py::call_guard<py::gil_scoped_release>());

  // bench: specs and reports cross the boundary as JSON text
  m.def(
      "_run_experiment",
      [](const std::string& kind, const std::string& spec_json, const std::string& base_dir,
         const std::vector<std::size_t>& grid, bool timings, unsigned threads) {
        const ExperimentSpec spec = ExperimentSpec::from_json(parse(spec_json), base_dir);
        Report report;
        {
          py::gil_scoped_release release;
          if (kind == "accuracy") report = run_accuracy_experiment(spec, threads);
          else if (kind == "sweeps") report = run_sweep_sensitivity(spec, grid, threads);
          else if (kind == "features") report = run_feature_scaling(spec, grid, threads);
          else if (kind == "points") report = run_point_scaling(spec, grid, threads);
          else throw InvalidArgument("unknown experiment '" + kind + "'");
        }
        return report.to_json(ReportFormat{timings}).dump();
      },
      py::arg("kind"), py::arg("spec_json"), py::arg("base_dir") = "", py::arg("grid") = std::vector<std::size_t>{},
      py::arg("timings") = true, py::arg("threads") = 0u);
}
