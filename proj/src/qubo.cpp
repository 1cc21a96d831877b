#include "qsvm/qubo.hpp"

#include <cmath>
#include <string>

#include "qsvm/error.hpp"

namespace qsvm {

PrecisionVector::PrecisionVector(std::vector<double> powers) : powers_(std::move(powers)) {
  if (powers_.empty()) throw InvalidArgument("precision vector needs at least one entry");
  for (std::size_t k = 0; k < powers_.size(); ++k) {
    const double p = powers_[k];
    int exponent = 0;
    if (!(p > 0.0) || !std::isfinite(p) || std::frexp(p, &exponent) != 0.5) {
      throw InvalidArgument("precision entry " + std::to_string(p) + " is not a power of two");
    }
    if (k > 0 && !(powers_[k - 1] < p)) {
      throw InvalidArgument("precision vector must be strictly increasing");
    }
  }
}

PrecisionVector PrecisionVector::from_exponents(int lo, int hi) {
  if (hi < lo) throw InvalidArgument("precision exponent range is empty");
  std::vector<double> powers;
  for (int e = lo; e <= hi; ++e) powers.push_back(std::ldexp(1.0, e));
  return PrecisionVector(std::move(powers));
}

PrecisionVector PrecisionVector::standard() { return from_exponents(-2, 1); }

double PrecisionVector::max_value() const noexcept {
  double total = 0.0;
  for (double p : powers_) total += p;
  return total;
}

QuboProblem::QuboProblem(Matrix quadratic, Vector linear, std::size_t n_points, std::size_t k_bits)
    : a_(std::move(quadratic)), b_(std::move(linear)), n_points_(n_points), k_bits_(k_bits) {
  const auto m = b_.size();
  if (m < 1) throw InvalidArgument("QUBO needs at least one variable");
  if (a_.rows() != m || a_.cols() != m) {
    throw InvalidArgument("QUBO matrix must be " + std::to_string(m) + "x" + std::to_string(m));
  }
  if (n_points_ * k_bits_ != static_cast<std::size_t>(m)) {
    throw InvalidArgument("QUBO size must equal n_points * k_bits");
  }
  if (!a_.allFinite() || !b_.allFinite()) throw InvalidArgument("QUBO has non-finite coefficients");
  const double scale = 1.0 + a_.cwiseAbs().maxCoeff();
  if ((a_ - a_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidArgument("QUBO matrix is not symmetric");
  }
}

QuboProblem build_qubo_from_gram(const Matrix& gram, const LabelVector& y,
                                 const PrecisionVector& precision, double equality_penalty) {
  const auto n = y.size();
  if (gram.rows() != n || gram.cols() != n) throw InvalidArgument("Gram matrix shape mismatch");
  if ((y.array() == 1).count() == 0 || (y.array() == -1).count() == 0) {
    throw InvalidArgument("QUBO training data must contain both classes");
  }
  if (!(equality_penalty >= 0.0) || !std::isfinite(equality_penalty)) {
    throw InvalidArgument("equality penalty must be a finite nonnegative number");
  }
  const auto k = static_cast<Eigen::Index>(precision.size());
  Eigen::Map<const Vector> p(precision.powers().data(), k);
  const Matrix outer = p * p.transpose();

  // Block (i, j) is (1/2 y_i y_j G_ij + mu y_i y_j) * p p'.
  Matrix a(n * k, n * k);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double yy = static_cast<double>(y[i] * y[j]);
      const double coeff = 0.5 * yy * gram(i, j) + equality_penalty * yy;
      a.block(i * k, j * k, k, k) = coeff * outer;
    }
  }
  Vector b(n * k);
  for (Eigen::Index i = 0; i < n; ++i) b.segment(i * k, k) = -p;
  return QuboProblem(std::move(a), std::move(b), static_cast<std::size_t>(n), precision.size());
}

QuboProblem build_qubo(const Dataset& train, const PrecisionVector& precision,
                       double equality_penalty) {
  if (!train.has_both_classes()) throw InvalidArgument("QUBO training data must contain both classes");
  Matrix gram = train.x() * train.x().transpose();
  // Exact symmetry regardless of the product kernel's summation order.
  gram.triangularView<Eigen::StrictlyLower>() = gram.transpose();
  return build_qubo_from_gram(gram, train.y(), precision, equality_penalty);
}

double energy(const QuboProblem& problem, BitView bits) {
  const std::size_t m = problem.size();
  if (bits.size() != m) {
    throw InvalidArgument("bit vector has length " + std::to_string(bits.size()) + ", expected " +
                          std::to_string(m));
  }
  std::vector<Eigen::Index> on;
  on.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (bits[i] > 1) throw InvalidArgument("bit vector entries must be 0 or 1");
    if (bits[i]) on.push_back(static_cast<Eigen::Index>(i));
  }
  const Matrix& a = problem.quadratic();
  double total = 0.0;
  for (auto i : on) {
    double row = problem.linear()[i];
    for (auto j : on) row += a(i, j);
    total += row;
  }
  return total;
}

Vector decode_multipliers(BitView bits, const PrecisionVector& precision, std::size_t n_points) {
  const std::size_t k = precision.size();
  if (bits.size() != n_points * k) {
    throw InvalidArgument("bit vector has length " + std::to_string(bits.size()) + ", expected " +
                          std::to_string(n_points * k));
  }
  Vector lambdas = Vector::Zero(static_cast<Eigen::Index>(n_points));
  for (std::size_t i = 0; i < n_points; ++i) {
    for (std::size_t b = 0; b < k; ++b) {
      if (bits[i * k + b]) lambdas[static_cast<Eigen::Index>(i)] += precision[b];
    }
  }
  return lambdas;
}

Matrix to_upper_triangular(const Matrix& symmetric) {
  Matrix upper = 2.0 * symmetric;
  upper.diagonal() = symmetric.diagonal();
  upper.triangularView<Eigen::StrictlyLower>().setZero();
  return upper;
}

Matrix from_upper_triangular(const Matrix& upper) {
  Matrix sym = 0.5 * (upper + upper.transpose());
  sym.diagonal() = upper.diagonal();
  return sym;
}

}  // namespace qsvm
