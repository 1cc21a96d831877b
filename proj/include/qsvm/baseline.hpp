#pragma once

#include <cstdint>
#include <vector>

#include "qsvm/svm.hpp"

namespace qsvm {

struct BaselineParams {
  double C = 1e6;
  double tolerance = 1e-3;
  // Iteration cap is max_passes * N pair updates.
  std::size_t max_passes = 1000;
  // Orders the scan used to break ties between equally violating indices.
  std::uint64_t seed = 0;

  void validate() const;
};

struct BaselineResult {
  SvmModel model;
  bool converged = false;
  std::size_t iterations = 0;
  double max_violation = 0.0;
  // Dual objective sum(l) - 1/2 l'Ql after each pair update (maximised).
  std::vector<double> objective_trace;
  double train_seconds = 0.0;
  double gram_seconds = 0.0;
};

// Pairwise dual coordinate ascent with maximal-violating-pair selection.
// Keeps sum_i l_i y_i = 0 and 0 <= l_i <= C throughout. On hitting the
// iteration cap the last iterate is returned with converged = false.
BaselineResult train_classical(const Dataset& train, const BaselineParams& params = {},
                               bool keep_trace = false);

}  // namespace qsvm
