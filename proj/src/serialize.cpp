#include "qsvm/serialize.hpp"

#include <fstream>

#include "qsvm/error.hpp"

namespace qsvm {

namespace {

template <typename T>
T require(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw InvalidArgument(std::string("missing JSON member '") + key + "'");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad JSON member '") + key + "': " + e.what());
  }
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

Json qubo_to_json(const QuboProblem& problem) {
  const Matrix upper = to_upper_triangular(problem.quadratic());
  Json quadratic = Json::array();
  for (Eigen::Index i = 0; i < upper.rows(); ++i) {
    for (Eigen::Index j = i; j < upper.cols(); ++j) {
      if (upper(i, j) != 0.0) quadratic.push_back(Json::array({i, j, upper(i, j)}));
    }
  }
  Json doc;
  doc["n_points"] = problem.n_points();
  doc["k_bits"] = problem.k_bits();
  doc["linear"] = to_std(problem.linear());
  doc["quadratic"] = std::move(quadratic);
  return doc;
}

QuboProblem qubo_from_json(const Json& doc) {
  const auto n = require<std::size_t>(doc, "n_points");
  const auto k = require<std::size_t>(doc, "k_bits");
  const auto linear = require<std::vector<double>>(doc, "linear");
  const auto m = static_cast<Eigen::Index>(linear.size());
  if (static_cast<std::size_t>(m) != n * k) {
    throw InvalidArgument("linear term length does not equal n_points * k_bits");
  }
  Matrix upper = Matrix::Zero(m, m);
  const auto& quadratic = doc.at("quadratic");
  if (!quadratic.is_array()) throw InvalidArgument("'quadratic' must be an array");
  for (const auto& entry : quadratic) {
    if (!entry.is_array() || entry.size() != 3) {
      throw InvalidArgument("quadratic entries must be [i, j, value]");
    }
    const auto i = entry[0].get<Eigen::Index>();
    const auto j = entry[1].get<Eigen::Index>();
    const auto v = entry[2].get<double>();
    if (i < 0 || j < 0 || i >= m || j >= m || i > j) {
      throw InvalidArgument("quadratic entry index out of range or below the diagonal");
    }
    upper(i, j) += v;
  }
  return QuboProblem(from_upper_triangular(upper), to_eigen(linear), n, k);
}

Json solution_to_json(const BinarySolution& solution) {
  Json doc;
  Json bits = Json::array();
  for (auto b : solution.bits) bits.push_back(static_cast<int>(b));
  doc["bits"] = std::move(bits);
  doc["energy"] = solution.energy;
  doc["read_index"] = solution.read_index;
  return doc;
}

BinarySolution solution_from_json(const Json& doc) {
  BinarySolution s;
  for (int b : require<std::vector<int>>(doc, "bits")) {
    if (b != 0 && b != 1) throw InvalidArgument("bits must be 0 or 1");
    s.bits.push_back(static_cast<std::uint8_t>(b));
  }
  s.energy = require<double>(doc, "energy");
  s.read_index = doc.value("read_index", std::size_t{0});
  return s;
}

Json model_to_json(const SvmModel& model, const std::optional<Normalizer>& normalizer) {
  Json doc;
  doc["w"] = to_std(model.w);
  doc["bias"] = model.bias;
  doc["lambdas"] = to_std(model.lambdas);
  doc["support_indices"] = model.support_indices;
  if (normalizer && normalizer->method() != Normalization::none) {
    doc["normalizer"] = {{"method", to_string(normalizer->method())},
                         {"offset", to_std(normalizer->offset())},
                         {"scale", to_std(normalizer->scale())}};
  }
  return doc;
}

SvmModel model_from_json(const Json& doc) {
  SvmModel model;
  model.w = to_eigen(require<std::vector<double>>(doc, "w"));
  model.bias = require<double>(doc, "bias");
  model.lambdas = to_eigen(doc.value("lambdas", std::vector<double>{}));
  model.support_indices = doc.value("support_indices", std::vector<std::size_t>{});
  if (model.w.size() == 0) throw InvalidArgument("model has an empty weight vector");
  return model;
}

std::optional<Normalizer> normalizer_from_json(const Json& doc) {
  if (!doc.contains("normalizer")) return std::nullopt;
  const auto& n = doc.at("normalizer");
  return Normalizer(parse_normalization(require<std::string>(n, "method")),
                    to_eigen(require<std::vector<double>>(n, "offset")),
                    to_eigen(require<std::vector<double>>(n, "scale")));
}

Json sa_params_to_json(const SaParams& params) {
  Json doc;
  doc["num_reads"] = params.num_reads;
  doc["sweeps_per_read"] = params.sweeps_per_read;
  doc["beta_initial"] = params.beta_initial ? Json(*params.beta_initial) : Json(nullptr);
  doc["beta_final"] = params.beta_final ? Json(*params.beta_final) : Json(nullptr);
  doc["schedule"] = to_string(params.schedule);
  doc["seed"] = params.seed;
  return doc;
}

SaParams sa_params_from_json(const Json& doc, SaParams p) {
  if (doc.contains("num_reads")) p.num_reads = require<std::size_t>(doc, "num_reads");
  if (doc.contains("sweeps_per_read")) p.sweeps_per_read = require<std::size_t>(doc, "sweeps_per_read");
  if (doc.contains("beta_initial") && !doc.at("beta_initial").is_null()) {
    p.beta_initial = require<double>(doc, "beta_initial");
  }
  if (doc.contains("beta_final") && !doc.at("beta_final").is_null()) {
    p.beta_final = require<double>(doc, "beta_final");
  }
  if (doc.contains("schedule")) p.schedule = parse_schedule(require<std::string>(doc, "schedule"));
  if (doc.contains("seed")) p.seed = require<std::uint64_t>(doc, "seed");
  p.validate();
  return p;
}

Json baseline_params_to_json(const BaselineParams& params) {
  Json doc;
  doc["C"] = params.C;
  doc["tolerance"] = params.tolerance;
  doc["max_passes"] = params.max_passes;
  doc["seed"] = params.seed;
  return doc;
}

BaselineParams baseline_params_from_json(const Json& doc, BaselineParams p) {
  if (doc.contains("C")) p.C = require<double>(doc, "C");
  if (doc.contains("tolerance")) p.tolerance = require<double>(doc, "tolerance");
  if (doc.contains("max_passes")) p.max_passes = require<std::size_t>(doc, "max_passes");
  if (doc.contains("seed")) p.seed = require<std::uint64_t>(doc, "seed");
  p.validate();
  return p;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IngestError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace qsvm
