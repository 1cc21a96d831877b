#include "qsvm/solver.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>
#include <vector>

#include "qsvm/error.hpp"
#include "qsvm/random.hpp"

namespace qsvm {

Schedule parse_schedule(const std::string& name) {
  if (name == "geometric") return Schedule::geometric;
  if (name == "linear") return Schedule::linear;
  throw InvalidArgument("unknown schedule '" + name + "' (expected geometric or linear)");
}

std::string to_string(Schedule schedule) {
  return schedule == Schedule::geometric ? "geometric" : "linear";
}

void SaParams::validate() const {
  if (num_reads < 1) throw InvalidArgument("num_reads must be at least 1");
  if (sweeps_per_read < 1) throw InvalidArgument("sweeps_per_read must be at least 1");
  if (beta_initial && !(*beta_initial > 0.0)) throw InvalidArgument("beta_initial must be positive");
  if (beta_final && !(*beta_final > 0.0)) throw InvalidArgument("beta_final must be positive");
  if (beta_initial && beta_final && *beta_final < *beta_initial) {
    throw InvalidArgument("beta_final must not be smaller than beta_initial");
  }
}

unsigned worker_count() {
  if (const char* env = std::getenv("QSVM_NUM_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<unsigned>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Single-flip energy change given the local field h = A z.
inline double flip_delta(const Matrix& a, const Vector& b, const Vector& field,
                         const std::uint8_t* z, Eigen::Index i) {
  const double diag = a(i, i);
  const double off = field[i] - (z[i] ? diag : 0.0);
  const double on_delta = diag + b[i] + 2.0 * off;
  return z[i] ? -on_delta : on_delta;
}

void random_state(Rng& rng, Bits& z) {
  for (auto& bit : z) bit = static_cast<std::uint8_t>(rng() >> 63);
}

Vector local_field(const Matrix& a, const Bits& z) {
  Vector h = Vector::Zero(a.rows());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (z[static_cast<std::size_t>(j)]) h += a.col(j);
  }
  return h;
}

bool lexicographically_less(const Bits& lhs, const Bits& rhs) {
  return std::lexicographical_compare(lhs.begin(), lhs.end(), rhs.begin(), rhs.end());
}

}  // namespace

double incremental_delta(const QuboProblem& problem, BitView bits, std::size_t flip_index) {
  const std::size_t m = problem.size();
  if (bits.size() != m) throw InvalidArgument("bit vector length does not match the problem");
  if (flip_index >= m) throw InvalidArgument("flip index " + std::to_string(flip_index) + " out of range");
  const Matrix& a = problem.quadratic();
  const auto i = static_cast<Eigen::Index>(flip_index);
  double off = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (bits[j] && j != flip_index) off += a(i, static_cast<Eigen::Index>(j));
  }
  const double on_delta = a(i, i) + problem.linear()[i] + 2.0 * off;
  return bits[flip_index] ? -on_delta : on_delta;
}

BetaRange default_beta_range(const QuboProblem& problem, std::uint64_t seed) {
  Rng rng(derive_seed(seed, std::numeric_limits<std::uint64_t>::max()));
  Bits z(problem.size());
  random_state(rng, z);
  const Vector h = local_field(problem.quadratic(), z);
  double max_delta = 0.0;
  double min_delta = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(z.size()); ++i) {
    const double mag = std::abs(flip_delta(problem.quadratic(), problem.linear(), h, z.data(), i));
    if (mag > 0.0) {
      max_delta = std::max(max_delta, mag);
      min_delta = std::min(min_delta, mag);
    }
  }
  if (max_delta == 0.0) return {1.0, 1.0};
  return {1.0 / max_delta, 10.0 / min_delta};
}

BinarySolution solve_exhaustive(const QuboProblem& problem) {
  const std::size_t m = problem.size();
  if (m > kMaxExhaustiveVariables) {
    throw ProblemTooLarge("exhaustive search supports at most " +
                          std::to_string(kMaxExhaustiveVariables) + " variables, got " +
                          std::to_string(m));
  }
  const Matrix& a = problem.quadratic();
  const Vector& b = problem.linear();

  Bits z(m, 0);
  Vector h = Vector::Zero(static_cast<Eigen::Index>(m));
  double current = 0.0;

  BinarySolution best{z, 0.0, 0};
  auto consider = [&](double approx) {
    const double slack = 1e-9 * (1.0 + std::abs(best.energy));
    if (approx > best.energy + slack) return;
    const double exact = energy(problem, z);
    const double tie = 1e-12 * (1.0 + std::abs(best.energy));
    if (exact < best.energy - tie || (exact <= best.energy + tie && lexicographically_less(z, best.bits))) {
      best.bits = z;
      best.energy = exact;
    }
  };

  // Gray-code walk: step s flips the bit at position ctz(s), so every state
  // is visited once with O(M) work per step.
  const std::uint64_t states = std::uint64_t{1} << m;
  for (std::uint64_t step = 1; step < states; ++step) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(step));
    const auto i = static_cast<Eigen::Index>(m - 1 - bit);
    const double delta = flip_delta(a, b, h, z.data(), i);
    const double sign = z[static_cast<std::size_t>(i)] ? -1.0 : 1.0;
    z[static_cast<std::size_t>(i)] ^= 1;
    h.noalias() += sign * a.col(i);
    current += delta;
    if ((step & 0xffff) == 0) {
      // Resynchronise to keep rounding drift bounded.
      h = local_field(a, z);
      current = energy(problem, z);
    }
    consider(current);
  }
  return best;
}

namespace {

BinarySolution anneal_once(const QuboProblem& problem, const SaParams& params, BetaRange range,
                           std::size_t read) {
  const Matrix& a = problem.quadratic();
  const Vector& b = problem.linear();
  const auto m = static_cast<Eigen::Index>(problem.size());

  Rng rng(derive_seed(params.seed, read));
  Bits z(problem.size());
  random_state(rng, z);
  Vector h = local_field(a, z);

  const std::size_t sweeps = params.sweeps_per_read;
  const double ratio = range.final / range.initial;
  for (std::size_t s = 0; s < sweeps; ++s) {
    const double t = sweeps > 1 ? static_cast<double>(s) / static_cast<double>(sweeps - 1) : 1.0;
    const double beta = params.schedule == Schedule::geometric
                            ? range.initial * std::pow(ratio, t)
                            : range.initial + (range.final - range.initial) * t;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double delta = flip_delta(a, b, h, z.data(), i);
      const double x = beta * delta;
      if (x > 0.0 && (x > 40.0 || uniform01(rng) >= std::exp(-x))) continue;
      const double sign = z[static_cast<std::size_t>(i)] ? -1.0 : 1.0;
      z[static_cast<std::size_t>(i)] ^= 1;
      h.noalias() += sign * a.col(i);
    }
  }
  const double e = energy(problem, z);
  return BinarySolution{std::move(z), e, read};
}

}  // namespace

BinarySolution solve_sa(const QuboProblem& problem, const SaParams& params, unsigned threads) {
  params.validate();
  BetaRange range = default_beta_range(problem, params.seed);
  if (params.beta_initial) range.initial = *params.beta_initial;
  if (params.beta_final) range.final = *params.beta_final;
  if (range.final < range.initial) range.final = range.initial;

  std::vector<BinarySolution> reads(params.num_reads);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(threads ? threads : worker_count(), params.num_reads));
  if (workers <= 1) {
    for (std::size_t r = 0; r < params.num_reads; ++r) reads[r] = anneal_once(problem, params, range, r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < params.num_reads; r = next++) {
          reads[r] = anneal_once(problem, params, range, r);
        }
      });
    }
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < reads.size(); ++r) {
    if (reads[r].energy < reads[best].energy) best = r;
  }
  return std::move(reads[best]);
}

}  // namespace qsvm
