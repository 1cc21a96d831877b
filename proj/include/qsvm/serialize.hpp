#pragma once

#include <optional>

#include "json.hpp"

#include "qsvm/baseline.hpp"
#include "qsvm/dataset.hpp"
#include "qsvm/qubo.hpp"
#include "qsvm/solver.hpp"
#include "qsvm/svm.hpp"

namespace qsvm {

using Json = nlohmann::ordered_json;

// {"n_points", "k_bits", "linear": [...], "quadratic": [[i, j, v], ...]}
// Quadratic entries are upper-triangular coefficients (i <= j, off-diagonal
// terms doubled) so that energy = sum v z_i z_j + sum linear_i z_i. Zero
// coefficients are omitted.
Json qubo_to_json(const QuboProblem& problem);
QuboProblem qubo_from_json(const Json& doc);

// {"bits": [...], "energy": x, "read_index": r}
Json solution_to_json(const BinarySolution& solution);
BinarySolution solution_from_json(const Json& doc);

// {"w": [...], "bias": x, "lambdas": [...], "support_indices": [...]}, with
// an optional "normalizer" {"method", "offset", "scale"} member.
Json model_to_json(const SvmModel& model, const std::optional<Normalizer>& normalizer = std::nullopt);
SvmModel model_from_json(const Json& doc);
std::optional<Normalizer> normalizer_from_json(const Json& doc);

Json sa_params_to_json(const SaParams& params);
SaParams sa_params_from_json(const Json& doc, SaParams defaults = {});

Json baseline_params_to_json(const BaselineParams& params);
BaselineParams baseline_params_from_json(const Json& doc, BaselineParams defaults = {});

Json read_json_file(const std::string& path);

}  // namespace qsvm
