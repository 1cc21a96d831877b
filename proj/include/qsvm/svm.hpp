#pragma once

#include <optional>
#include <vector>

#include "qsvm/dataset.hpp"

namespace qsvm {

// Multipliers above this count as support vectors.
inline constexpr double kSupportThreshold = 1e-8;

// Linear classifier sign(w.x + bias) with the multipliers it came from.
struct SvmModel {
  Vector w;
  double bias = 0.0;
  Vector lambdas;
  std::vector<std::size_t> support_indices;
};

// 1/2 l'(XX' o YY')l - l'1
double dual_objective(const Dataset& train, const Vector& lambdas);
double dual_objective_from_gram(const Matrix& gram, const LabelVector& y, const Vector& lambdas);

// w = sum_i l_i y_i x_i; bias is the mean of y_i - w.x_i over the support
// vectors unless `bias` is supplied.
SvmModel recover_model(const Dataset& train, const Vector& lambdas,
                       std::optional<double> bias = std::nullopt);

double decision_value(const SvmModel& model, const Vector& x);

// +1 on the boundary.
int predict(const SvmModel& model, const Vector& x);

double accuracy(const SvmModel& model, const Dataset& data);

}  // namespace qsvm
