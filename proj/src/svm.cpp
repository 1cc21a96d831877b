#include "qsvm/svm.hpp"

#include <string>

#include "qsvm/error.hpp"

namespace qsvm {

namespace {

void check_lambdas(std::size_t n, const Vector& lambdas) {
  if (static_cast<std::size_t>(lambdas.size()) != n) {
    throw InvalidArgument("expected " + std::to_string(n) + " multipliers, got " +
                          std::to_string(lambdas.size()));
  }
  if (!lambdas.allFinite()) throw InvalidArgument("multipliers must be finite");
  if ((lambdas.array() < 0.0).any()) throw InvalidArgument("multipliers must be nonnegative");
}

}  // namespace

double dual_objective_from_gram(const Matrix& gram, const LabelVector& y, const Vector& lambdas) {
  check_lambdas(static_cast<std::size_t>(y.size()), lambdas);
  const Vector ly = lambdas.cwiseProduct(y.cast<double>());
  return 0.5 * ly.dot(gram * ly) - lambdas.sum();
}

double dual_objective(const Dataset& train, const Vector& lambdas) {
  check_lambdas(train.size(), lambdas);
  // l'(XX' o YY')l = |X'(l o y)|^2
  const Vector w = train.x().transpose() * lambdas.cwiseProduct(train.y().cast<double>());
  return 0.5 * w.squaredNorm() - lambdas.sum();
}

SvmModel recover_model(const Dataset& train, const Vector& lambdas, std::optional<double> bias) {
  check_lambdas(train.size(), lambdas);
  SvmModel model;
  model.lambdas = lambdas;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (lambdas[static_cast<Eigen::Index>(i)] > kSupportThreshold) model.support_indices.push_back(i);
  }
  if (model.support_indices.empty()) {
    throw NoSupportVectors("no multiplier exceeds the support threshold");
  }
  model.w = train.x().transpose() * lambdas.cwiseProduct(train.y().cast<double>());
  if (bias) {
    model.bias = *bias;
  } else {
    double total = 0.0;
    for (auto i : model.support_indices) {
      const auto r = static_cast<Eigen::Index>(i);
      total += train.y()[r] - model.w.dot(train.x().row(r).transpose());
    }
    model.bias = total / static_cast<double>(model.support_indices.size());
  }
  return model;
}

double decision_value(const SvmModel& model, const Vector& x) {
  if (x.size() != model.w.size()) {
    throw InvalidArgument("point has " + std::to_string(x.size()) + " features, model expects " +
                          std::to_string(model.w.size()));
  }
  return model.w.dot(x) + model.bias;
}

int predict(const SvmModel& model, const Vector& x) { return decision_value(model, x) >= 0.0 ? 1 : -1; }

double accuracy(const SvmModel& model, const Dataset& data) {
  if (static_cast<std::size_t>(model.w.size()) != data.dims()) {
    throw InvalidArgument("dataset has " + std::to_string(data.dims()) + " features, model expects " +
                          std::to_string(model.w.size()));
  }
  const Vector scores = (data.x() * model.w).array() + model.bias;
  std::size_t correct = 0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    correct += ((scores[i] >= 0.0 ? 1 : -1) == data.y()[i]) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace qsvm
