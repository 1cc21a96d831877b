#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qsvm/dataset.hpp"

namespace qsvm {

using Bits = std::vector<std::uint8_t>;
using BitView = std::span<const std::uint8_t>;

// Sorted, strictly increasing powers of two. Each Lagrange multiplier is
// encoded as sum_k powers[k] * bit_k.
class PrecisionVector {
 public:
  explicit PrecisionVector(std::vector<double> powers);

  // 2^lo, 2^(lo+1), ..., 2^hi.
  static PrecisionVector from_exponents(int lo, int hi);
  // (1/4, 1/2, 1, 2)
  static PrecisionVector standard();

  const std::vector<double>& powers() const noexcept { return powers_; }
  std::size_t size() const noexcept { return powers_.size(); }
  double operator[](std::size_t k) const { return powers_[k]; }

  double max_value() const noexcept;  // sum of all powers
  double resolution() const noexcept { return powers_.front(); }

 private:
  std::vector<double> powers_;
};

// min z'Az + b'z over z in {0,1}^M, with A stored as a full symmetric matrix.
// Variables are grouped point-major: variable i*K + k is bit k of point i.
class QuboProblem {
 public:
  QuboProblem(Matrix quadratic, Vector linear, std::size_t n_points, std::size_t k_bits);

  const Matrix& quadratic() const noexcept { return a_; }
  const Vector& linear() const noexcept { return b_; }
  std::size_t n_points() const noexcept { return n_points_; }
  std::size_t k_bits() const noexcept { return k_bits_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(b_.size()); }

 private:
  Matrix a_;
  Vector b_;
  std::size_t n_points_;
  std::size_t k_bits_;
};

struct BinarySolution {
  Bits bits;
  double energy = 0.0;
  std::size_t read_index = 0;
};

// A = 1/2 P'(XX' o YY')P + penalty * P'(YY')P and b = -P'1, where
// P = I_N (x) precision'. The penalty term adds penalty * (sum_i lambda_i y_i)^2
// to every energy; penalty = 0 drops the equality constraint entirely.
QuboProblem build_qubo(const Dataset& train, const PrecisionVector& precision,
                       double equality_penalty = 0.0);

// Same, from a precomputed Gram matrix XX'.
QuboProblem build_qubo_from_gram(const Matrix& gram, const LabelVector& y,
                                 const PrecisionVector& precision, double equality_penalty = 0.0);

double energy(const QuboProblem& problem, BitView bits);

// lambda_i = sum_k precision[k] * bits[i*K + k]
Vector decode_multipliers(BitView bits, const PrecisionVector& precision, std::size_t n_points);

// Upper-triangular form U with z'Uz = z'Az: U_ii = A_ii, U_ij = 2 A_ij for i < j.
Matrix to_upper_triangular(const Matrix& symmetric);
Matrix from_upper_triangular(const Matrix& upper);

}  // namespace qsvm
