#pragma once

// Reference implementations used as independent oracles by the tests.
// Everything here is written the slow, obvious way on purpose.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qsvm/dataset.hpp"
#include "qsvm/qubo.hpp"

namespace oracle {

using qsvm::Bits;
using qsvm::Dataset;
using qsvm::Matrix;
using qsvm::PrecisionVector;
using qsvm::Vector;

// Dense N x NK matrix I_N (x) P'.
inline Matrix precision_matrix(const PrecisionVector& p, std::size_t n) {
  const std::size_t k = p.size();
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n * k));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i * k + j)) = p[j];
  return m;
}

// 1/2 l'(XX' o YY')l - sum(l), by explicit double loops.
inline double dual(const Dataset& d, const Vector& l) {
  const auto& x = d.x();
  const auto& y = d.y();
  double quad = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.rows(); ++j) {
      double dot = 0.0;
      for (Eigen::Index c = 0; c < x.cols(); ++c) dot += x(i, c) * x(j, c);
      quad += l[i] * l[j] * y[i] * y[j] * dot;
    }
  }
  return 0.5 * quad - l.sum();
}

inline double qubo_energy(const Matrix& a, const Vector& b, const Bits& z) {
  double e = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!z[i]) continue;
    e += b[static_cast<Eigen::Index>(i)];
    for (std::size_t j = 0; j < z.size(); ++j)
      if (z[j]) e += a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return e;
}

inline Vector decode(const Bits& z, const PrecisionVector& p, std::size_t n) {
  Vector z_vec(static_cast<Eigen::Index>(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i) z_vec[static_cast<Eigen::Index>(i)] = z[i];
  return precision_matrix(p, n) * z_vec;
}

inline Bits random_bits(std::size_t m, std::mt19937_64& rng) {
  Bits z(m);
  for (auto& v : z) v = static_cast<std::uint8_t>(rng() & 1u);
  return z;
}

// Random data with both classes present.
inline Dataset random_dataset(std::size_t n, std::size_t d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index c = 0; c < x.cols(); ++c) x(i, c) = g(rng);
  Eigen::VectorXi y(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = (rng() & 1u) ? 1 : -1;
  y[0] = 1;
  y[y.size() - 1] = -1;
  return Dataset(std::move(x), std::move(y));
}

// Random precision vector: K consecutive-or-gapped powers of two in [2^-3, 2^3].
inline PrecisionVector random_precision(std::size_t k, std::mt19937_64& rng) {
  std::vector<int> exps;
  for (int e = -3; e <= 3; ++e) exps.push_back(e);
  std::shuffle(exps.begin(), exps.end(), rng);
  exps.resize(k);
  std::sort(exps.begin(), exps.end());
  std::vector<double> p;
  for (int e : exps) p.push_back(std::ldexp(1.0, e));
  return PrecisionVector(p);
}

inline Dataset two_point() {
  Matrix x(2, 1);
  x << 1.0, -1.0;
  Eigen::VectorXi y(2);
  y << 1, -1;
  return Dataset(x, y);
}

inline Dataset four_point() {
  Matrix x(4, 1);
  x << 1.0, 2.0, -1.0, -2.0;
  Eigen::VectorXi y(4);
  y << 1, 1, -1, -1;
  return Dataset(x, y);
}

inline Bits all_bits(std::size_t m, std::uint64_t pattern) {
  Bits z(m);
  for (std::size_t i = 0; i < m; ++i) z[i] = static_cast<std::uint8_t>((pattern >> i) & 1u);
  return z;
}

// Brute-force minimum; ties to the lexicographically smallest pattern with
// bit 0 most significant.
inline std::pair<Bits, double> brute_force(const Matrix& a, const Vector& b) {
  const std::size_t m = static_cast<std::size_t>(b.size());
  Bits best;
  double best_e = 0.0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s) {
    Bits z(m);
    for (std::size_t i = 0; i < m; ++i) z[i] = static_cast<std::uint8_t>((s >> (m - 1 - i)) & 1u);
    const double e = qubo_energy(a, b, z);
    if (best.empty() || e < best_e - 1e-12) {
      best = z;
      best_e = e;
    }
  }
  return {best, best_e};
}

}  // namespace oracle
