#include <cstdlib>

#include "doctest.h"
#include "qsvm/error.hpp"
#include "qsvm/qubo.hpp"
#include "qsvm/solver.hpp"
#include "support.hpp"

using namespace qsvm;

namespace {

QuboProblem linear_only(std::vector<double> b) {
  const auto m = static_cast<Eigen::Index>(b.size());
  return QuboProblem(Matrix::Zero(m, m), Eigen::Map<Vector>(b.data(), m), b.size(), 1);
}

QuboProblem random_problem(std::size_t m, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng);
  Vector b(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = g(rng);
  return QuboProblem(a, b, m, 1);
}

}  // namespace

TEST_CASE("exhaustive examples") {
  const QuboProblem hand = build_qubo(oracle::two_point(), PrecisionVector({0.5}));
  const BinarySolution s = solve_exhaustive(hand);
  CHECK(s.bits == Bits{1, 1});
  CHECK(s.energy == -0.5);

  const BinarySolution pos = solve_exhaustive(linear_only({1, 1, 1}));
  CHECK(pos.bits == Bits{0, 0, 0});
  CHECK(pos.energy == 0.0);
  const BinarySolution neg = solve_exhaustive(linear_only({-1, -1}));
  CHECK(neg.bits == Bits{1, 1});
  CHECK(neg.energy == -2.0);
}

TEST_CASE("exhaustive ties go to the lexicographically smallest pattern") {
  // every state with exactly one bit set has energy -1
  Matrix a = Matrix::Constant(3, 3, 1.0);
  const QuboProblem q(a, Vector::Constant(3, -2.0), 3, 1);
  const BinarySolution s = solve_exhaustive(q);
  CHECK(s.energy == -1.0);
  CHECK(s.bits == Bits{0, 0, 1});
  // all states tie at 0
  CHECK(solve_exhaustive(linear_only({0, 0, 0, 0})).bits == Bits{0, 0, 0, 0});
}

TEST_CASE("exhaustive agrees with brute force") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    const QuboProblem q = random_problem(1 + rng() % 12, rng);
    const auto [bits, e] = oracle::brute_force(q.quadratic(), q.linear());
    const BinarySolution s = solve_exhaustive(q);
    CHECK(s.energy == doctest::Approx(e).epsilon(1e-12));
    CHECK(s.bits == bits);
    CHECK(s.energy == energy(q, s.bits));
  }
}

TEST_CASE("exhaustive refuses oversized problems") {
  const QuboProblem big = linear_only(std::vector<double>(kMaxExhaustiveVariables + 1, 1.0));
  CHECK_THROWS_AS(solve_exhaustive(big), ProblemTooLarge);
  try {
    solve_exhaustive(big);
  } catch (const Error& e) {
    CHECK(e.kind() == "problem-too-large");
  }
}

TEST_CASE("incremental delta examples") {
  const QuboProblem hand = build_qubo(oracle::two_point(), PrecisionVector({0.5}));
  CHECK(incremental_delta(hand, Bits{0, 0}, 0) == -0.375);
  const QuboProblem lin = linear_only({0.5, -2, 3});
  for (std::size_t i = 0; i < 3; ++i) CHECK(incremental_delta(lin, Bits{0, 0, 0}, i) == lin.linear()[static_cast<Eigen::Index>(i)]);
  CHECK_THROWS_AS(incremental_delta(lin, Bits{0, 0, 0}, 3), InvalidArgument);
  CHECK_THROWS_AS(incremental_delta(lin, Bits{0, 0}, 0), InvalidArgument);
}

TEST_CASE("incremental delta matches full re-evaluation") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 500; ++t) {
    const std::size_t m = 1 + rng() % 30;
    const QuboProblem q = random_problem(m, rng);
    Bits z = oracle::random_bits(m, rng);
    const std::size_t i = rng() % m;
    const double before = oracle::qubo_energy(q.quadratic(), q.linear(), z);
    const double d1 = incremental_delta(q, z, i);
    z[i] ^= 1u;
    const double after = oracle::qubo_energy(q.quadratic(), q.linear(), z);
    CHECK(std::abs(d1 - (after - before)) <= 1e-10);
    const double d2 = incremental_delta(q, z, i);
    CHECK(std::abs(d1 + d2) <= 1e-12);
  }
}

TEST_CASE("SA examples") {
  const QuboProblem hand = build_qubo(oracle::two_point(), PrecisionVector({0.5}));
  SaParams p;
  p.num_reads = 10;
  p.sweeps_per_read = 1000;
  p.seed = 5;
  const BinarySolution s = solve_sa(hand, p);
  CHECK(s.energy == -0.5);
  CHECK(s.bits == Bits{1, 1});

  const QuboProblem lin = linear_only({1, -1, 2, -0.5, -3});
  SaParams one;
  one.num_reads = 1;
  one.sweeps_per_read = 200;
  const BinarySolution l = solve_sa(lin, one);
  CHECK(l.bits == Bits{0, 1, 0, 1, 1});
}

TEST_CASE("SA is deterministic and independent of thread count") {
  std::mt19937_64 rng(23);
  const QuboProblem q = build_qubo(oracle::random_dataset(12, 3, rng), PrecisionVector::standard(), 0.5);
  SaParams p;
  p.num_reads = 8;
  p.sweeps_per_read = 50;
  p.seed = 77;
  const BinarySolution a = solve_sa(q, p, 1);
  const BinarySolution b = solve_sa(q, p, 1);
  const BinarySolution c = solve_sa(q, p, 4);
  CHECK(a.bits == b.bits);
  CHECK(a.energy == b.energy);
  CHECK(a.read_index == b.read_index);
  CHECK(a.bits == c.bits);
  CHECK(a.energy == c.energy);
  CHECK(a.read_index == c.read_index);
  CHECK(a.energy == doctest::Approx(energy(q, a.bits)).epsilon(1e-12));
}

TEST_CASE("SA energy never increases with more reads") {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 5; ++t) {
    const QuboProblem q = random_problem(24, rng);
    SaParams p;
    p.sweeps_per_read = 5;
    p.seed = static_cast<std::uint64_t>(t);
    double prev = 1e300;
    for (std::size_t reads = 1; reads <= 16; reads *= 2) {
      p.num_reads = reads;
      const double e = solve_sa(q, p, 1).energy;
      CHECK(e <= prev);
      prev = e;
    }
  }
}

TEST_CASE("SA never beats the exhaustive optimum") {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 20; ++t) {
    const QuboProblem q = random_problem(4 + rng() % 10, rng);
    SaParams p;
    p.num_reads = 4;
    p.sweeps_per_read = 20;
    p.seed = static_cast<std::uint64_t>(t);
    CHECK(solve_sa(q, p, 1).energy >= solve_exhaustive(q).energy - 1e-12);
  }
}

TEST_CASE("SA parameter validation and explicit schedules") {
  SaParams p;
  p.num_reads = 0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = SaParams{};
  p.sweeps_per_read = 0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = SaParams{};
  p.beta_initial = 2.0;
  p.beta_final = 1.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p.beta_initial = -1.0;
  p.beta_final = 1.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  CHECK_THROWS_AS(parse_schedule("cubic"), InvalidArgument);

  const QuboProblem hand = build_qubo(oracle::two_point(), PrecisionVector({0.5}));
  p = SaParams{};
  p.schedule = Schedule::linear;
  p.beta_initial = 0.1;
  p.beta_final = 50.0;
  CHECK(solve_sa(hand, p).energy == -0.5);
  const BetaRange r = default_beta_range(hand, 3);
  CHECK(r.initial > 0.0);
  CHECK(r.final >= r.initial);
}

TEST_CASE("worker count honours the environment") {
  setenv("QSVM_NUM_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  setenv("QSVM_NUM_THREADS", "junk", 1);
  CHECK(worker_count() >= 1);
  unsetenv("QSVM_NUM_THREADS");
  CHECK(worker_count() >= 1);
}
