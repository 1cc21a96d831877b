#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qsvm/qubo.hpp"

namespace qsvm {

enum class Schedule { geometric, linear };

Schedule parse_schedule(const std::string& name);
std::string to_string(Schedule schedule);

// Sweep budgets standing in for short, medium and long anneals.
inline constexpr std::size_t kSweepsLow = 20;
inline constexpr std::size_t kSweepsMid = 100;
inline constexpr std::size_t kSweepsHigh = 1000;

struct SaParams {
  std::size_t num_reads = 10;
  std::size_t sweeps_per_read = kSweepsHigh;
  // Unset bounds are derived from the problem (see default_beta_range).
  std::optional<double> beta_initial;
  std::optional<double> beta_final;
  Schedule schedule = Schedule::geometric;
  std::uint64_t seed = 0;

  void validate() const;
};

struct BetaRange {
  double initial = 1.0;
  double final = 1.0;
};

// 1/max|dE| to 10/min|dE| over the nonzero single-flip deltas at a random
// state drawn from `seed`.
BetaRange default_beta_range(const QuboProblem& problem, std::uint64_t seed);

// Largest exhaustively searchable problem.
inline constexpr std::size_t kMaxExhaustiveVariables = 26;

// Global minimum by enumeration. Ties go to the lexicographically smallest
// bit pattern (bit 0 most significant).
BinarySolution solve_exhaustive(const QuboProblem& problem);

// Best of `num_reads` independent single-flip Metropolis anneals. Read r is
// seeded from derive_seed(seed, r) and ties go to the lowest read index, so
// the result does not depend on `threads` (0 = worker_count()).
BinarySolution solve_sa(const QuboProblem& problem, const SaParams& params, unsigned threads = 0);

// energy(bits with `flip_index` flipped) - energy(bits), in O(M).
double incremental_delta(const QuboProblem& problem, BitView bits, std::size_t flip_index);

// QSVM_NUM_THREADS if set and positive, else the hardware concurrency.
unsigned worker_count();

}  // namespace qsvm
