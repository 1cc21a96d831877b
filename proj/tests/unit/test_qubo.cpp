#include <numeric>

#include "doctest.h"
#include "qsvm/error.hpp"
#include "qsvm/qubo.hpp"
#include "qsvm/svm.hpp"
#include "support.hpp"

using namespace qsvm;

TEST_CASE("precision vector validation") {
  CHECK_NOTHROW(PrecisionVector({0.25, 0.5, 1, 2}));
  CHECK_NOTHROW(PrecisionVector({0.125, 8}));
  CHECK_THROWS_AS(PrecisionVector({}), InvalidArgument);
  CHECK_THROWS_AS(PrecisionVector({0.3}), InvalidArgument);
  CHECK_THROWS_AS(PrecisionVector({1, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(PrecisionVector({1, 1}), InvalidArgument);
  CHECK_THROWS_AS(PrecisionVector({-1}), InvalidArgument);
  CHECK_THROWS_AS(PrecisionVector({0}), InvalidArgument);
  CHECK(PrecisionVector::standard().powers() == std::vector<double>{0.25, 0.5, 1, 2});
  CHECK(PrecisionVector::from_exponents(-2, 1).powers() == PrecisionVector::standard().powers());
  CHECK(PrecisionVector::standard().max_value() == 3.75);
  CHECK(PrecisionVector::standard().resolution() == 0.25);
}

TEST_CASE("hand instance QUBO") {
  const QuboProblem q = build_qubo(oracle::two_point(), PrecisionVector({0.5}));
  CHECK(q.size() == 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(q.quadratic()(i, j) == 0.125);
  CHECK(q.linear()[0] == -0.5);
  CHECK(q.linear()[1] == -0.5);

  const Bits zero{0, 0}, both{1, 1}, first{1, 0};
  CHECK(energy(q, zero) == 0.0);
  CHECK(energy(q, both) == -0.5);
  CHECK(energy(q, first) == -0.375);
  CHECK_THROWS_AS(energy(q, Bits{1}), InvalidArgument);
  CHECK_THROWS_AS(energy(q, Bits{1, 2}), InvalidArgument);
}

TEST_CASE("unit precision gives the plain dual") {
  std::mt19937_64 rng(3);
  const Dataset d = oracle::random_dataset(5, 3, rng);
  const QuboProblem q = build_qubo(d, PrecisionVector({1.0}));
  const Matrix yy = d.y().cast<double>() * d.y().cast<double>().transpose();
  const Matrix expect = 0.5 * (d.x() * d.x().transpose()).cwiseProduct(yy);
  CHECK((q.quadratic() - expect).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(q.linear() == -Vector::Ones(5));
}

TEST_CASE("standard precision size") {
  std::mt19937_64 rng(4);
  const QuboProblem q = build_qubo(oracle::random_dataset(3, 2, rng), PrecisionVector::standard());
  CHECK(q.size() == 12);
  CHECK(q.quadratic().rows() == 12);
  CHECK(q.n_points() == 3);
  CHECK(q.k_bits() == 4);
}

TEST_CASE("build_qubo matches the dense Kronecker construction") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng() % 7, k = 1 + rng() % 4, d = 1 + rng() % 5;
    const Dataset ds = oracle::random_dataset(n, d, rng);
    const PrecisionVector p = oracle::random_precision(k, rng);
    const double mu = (t % 2) ? 0.7 : 0.0;
    const QuboProblem q = build_qubo(ds, p, mu);
    const Matrix pm = oracle::precision_matrix(p, n);
    const Vector y = ds.y().cast<double>();
    const Matrix yy = y * y.transpose();
    const Matrix a = 0.5 * pm.transpose() * (ds.x() * ds.x().transpose()).cwiseProduct(yy) * pm +
                     mu * pm.transpose() * yy * pm;
    const Vector b = -pm.transpose() * Vector::Ones(static_cast<Eigen::Index>(n));
    CHECK((q.quadratic() - a).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + a.cwiseAbs().maxCoeff()));
    CHECK((q.linear() - b).cwiseAbs().maxCoeff() == 0.0);
    CHECK(q.quadratic() == q.quadratic().transpose());
  }
}

TEST_CASE("energy equals the dual at the decoded multipliers") {
  std::mt19937_64 rng(6);
  int checked = 0;
  for (int t = 0; t < 1200; ++t) {
    const std::size_t n = 2 + rng() % 7, k = 1 + rng() % 4, d = 1 + rng() % 5;
    const Dataset ds = oracle::random_dataset(n, d, rng);
    const PrecisionVector p = oracle::random_precision(k, rng);
    const QuboProblem q = build_qubo(ds, p);
    const Bits z = oracle::random_bits(n * k, rng);
    const double e = energy(q, z);
    const double dual = oracle::dual(ds, oracle::decode(z, p, n));
    CHECK(std::abs(e - dual) <= 1e-9 * (1.0 + std::abs(e)));
    ++checked;
  }
  CHECK(checked >= 1000);
}

TEST_CASE("penalty adds mu (sum l y)^2 pointwise") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng() % 6, k = 1 + rng() % 4;
    const Dataset ds = oracle::random_dataset(n, 2, rng);
    const PrecisionVector p = oracle::random_precision(k, rng);
    const double mu = 0.1 + static_cast<double>(rng() % 100) / 10.0;
    const QuboProblem q0 = build_qubo(ds, p, 0.0);
    const QuboProblem q1 = build_qubo(ds, p, mu);
    const Bits z = oracle::random_bits(n * k, rng);
    const double r = oracle::decode(z, p, n).dot(ds.y().cast<double>());
    const double gain = energy(q1, z) - energy(q0, z);
    CHECK(std::abs(gain - mu * r * r) <= 1e-9 * (1.0 + std::abs(gain)));
  }
  CHECK_THROWS_AS(build_qubo(oracle::two_point(), PrecisionVector({1.0}), -1.0), InvalidArgument);
}

TEST_CASE("permuting training points permutes blocks") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const Dataset ds = oracle::random_dataset(3, 2, rng);
    const PrecisionVector p = PrecisionVector::standard();
    const std::size_t k = p.size();
    std::vector<std::size_t> perm{0, 1, 2};
    std::shuffle(perm.begin(), perm.end(), rng);
    const QuboProblem q = build_qubo(ds, p, 0.5);
    const QuboProblem qp = build_qubo(ds.subset(perm), p, 0.5);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        const auto blk = qp.quadratic().block(static_cast<Eigen::Index>(i * k), static_cast<Eigen::Index>(j * k), k, k);
        const auto src = q.quadratic().block(static_cast<Eigen::Index>(perm[i] * k),
                                             static_cast<Eigen::Index>(perm[j] * k), k, k);
        CHECK((blk - src).cwiseAbs().maxCoeff() <= 1e-14);
      }
      CHECK(qp.linear().segment(static_cast<Eigen::Index>(i * k), k) ==
            q.linear().segment(static_cast<Eigen::Index>(perm[i] * k), k));
    }
  }
}

TEST_CASE("build_qubo is deterministic and rejects single-class data") {
  std::mt19937_64 rng(9);
  const Dataset ds = oracle::random_dataset(6, 3, rng);
  CHECK(build_qubo(ds, PrecisionVector::standard()).quadratic() ==
        build_qubo(ds, PrecisionVector::standard()).quadratic());
  Eigen::VectorXi y = Eigen::VectorXi::Ones(6);
  CHECK_THROWS_AS(build_qubo(Dataset(ds.x(), y), PrecisionVector::standard()), InvalidArgument);
}

TEST_CASE("decode examples and linearity") {
  CHECK(decode_multipliers(Bits{1, 1}, PrecisionVector({0.5}), 2) == Vector::Constant(2, 0.5));
  CHECK(decode_multipliers(Bits{0, 1, 0, 1}, PrecisionVector({0.25, 0.5}), 2) == Vector::Constant(2, 0.5));
  CHECK(decode_multipliers(Bits{1, 1, 1, 1}, PrecisionVector({0.25, 0.5}), 2) == Vector::Constant(2, 0.75));
  CHECK_THROWS_AS(decode_multipliers(Bits{1, 1, 1}, PrecisionVector({0.25, 0.5}), 2), InvalidArgument);

  std::mt19937_64 rng(10);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 6, k = 1 + rng() % 4;
    const PrecisionVector p = oracle::random_precision(k, rng);
    const Bits z = oracle::random_bits(n * k, rng);
    Bits a(z.size()), b(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      const bool left = rng() & 1u;
      a[i] = left ? z[i] : 0;
      b[i] = left ? 0 : z[i];
    }
    const Vector sum = decode_multipliers(a, p, n) + decode_multipliers(b, p, n);
    CHECK((decode_multipliers(z, p, n) - sum).cwiseAbs().maxCoeff() == 0.0);
    CHECK(decode_multipliers(z, p, n) == oracle::decode(z, p, n));
    CHECK(decode_multipliers(z, p, n).minCoeff() >= 0.0);
  }
}

TEST_CASE("upper-triangular conversion preserves energies") {
  std::mt19937_64 rng(12);
  const Dataset ds = oracle::random_dataset(4, 2, rng);
  const QuboProblem q = build_qubo(ds, PrecisionVector::standard(), 0.3);
  const Matrix u = to_upper_triangular(q.quadratic());
  CHECK(u.triangularView<Eigen::StrictlyLower>().toDenseMatrix().isZero(0.0));
  CHECK((from_upper_triangular(u) - q.quadratic()).cwiseAbs().maxCoeff() < 1e-15);
  for (int t = 0; t < 50; ++t) {
    const Bits z = oracle::random_bits(q.size(), rng);
    CHECK(oracle::qubo_energy(u, q.linear(), z) == doctest::Approx(energy(q, z)).epsilon(1e-12));
  }
}

TEST_CASE("QuboProblem validation") {
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  CHECK_THROWS_AS(QuboProblem(a, Vector::Zero(2), 2, 1), InvalidArgument);
  CHECK_THROWS_AS(QuboProblem(Matrix::Zero(2, 2), Vector::Zero(2), 3, 1), InvalidArgument);
  CHECK_THROWS_AS(QuboProblem(Matrix::Zero(2, 2), Vector::Zero(3), 3, 1), InvalidArgument);
}
