#include "qsvm/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "qsvm/error.hpp"
#include "qsvm/random.hpp"

namespace qsvm {

void BaselineParams::validate() const {
  if (!(C > 0.0)) throw InvalidArgument("C must be positive");
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (max_passes < 1) throw InvalidArgument("max_passes must be at least 1");
}

namespace {

constexpr double kTau = 1e-12;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double dual_value(const Vector& alpha, const Vector& grad) {
  // sum(a) - 1/2 a'Qa with grad = Qa - 1
  return 0.5 * alpha.sum() - 0.5 * alpha.dot(grad);
}

// Nudge one free multiplier so that sum_i a_i y_i vanishes to within an ulp
// of that multiplier; sums are carried in extended precision.
void restore_equality(Vector& alpha, const LabelVector& y, double c) {
  long double residual = 0.0L;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    residual += static_cast<long double>(alpha[i]) * y[i];
  }
  if (residual == 0.0L) return;
  Eigen::Index pick = -1;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    const long double moved = alpha[i] - y[i] * residual;
    if (alpha[i] > 0.0 && alpha[i] < c && moved >= 0.0L && moved <= c) {
      if (pick < 0 || alpha[i] > alpha[pick]) pick = i;
    }
  }
  if (pick >= 0) alpha[pick] = static_cast<double>(alpha[pick] - y[pick] * residual);
}

}  // namespace

BaselineResult train_classical(const Dataset& train, const BaselineParams& params, bool keep_trace) {
  params.validate();
  if (!train.has_both_classes()) throw InvalidArgument("classical training needs both classes");
  const auto start = Clock::now();

  const Matrix& x = train.x();
  const LabelVector& y = train.y();
  const auto n = static_cast<Eigen::Index>(train.size());
  const double c = params.C;

  Matrix kernel = x * x.transpose();
  kernel.triangularView<Eigen::StrictlyLower>() = kernel.transpose();
  BaselineResult result;
  result.gram_seconds = seconds_since(start);

  const Vector yd = y.cast<double>();
  const Matrix q = (yd * yd.transpose()).cwiseProduct(kernel);

  Vector alpha = Vector::Zero(n);
  Vector grad = Vector::Constant(n, -1.0);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng rng(derive_seed(params.seed, 0));
  std::shuffle(order.begin(), order.end(), rng);

  auto in_up = [&](Eigen::Index t) { return y[t] == 1 ? alpha[t] < c : alpha[t] > 0.0; };
  auto in_low = [&](Eigen::Index t) { return y[t] == 1 ? alpha[t] > 0.0 : alpha[t] < c; };

  const std::size_t max_iter = params.max_passes * static_cast<std::size_t>(n);
  if (keep_trace) result.objective_trace.push_back(0.0);

  while (true) {
    Eigen::Index i = -1, j = -1;
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    for (auto t : order) {
      const double v = -y[t] * grad[t];
      if (in_up(t) && v > gmax) {
        gmax = v;
        i = t;
      }
      if (in_low(t) && v < gmin) {
        gmin = v;
        j = t;
      }
    }
    result.max_violation = (i < 0 || j < 0) ? 0.0 : gmax - gmin;
    if (i < 0 || j < 0 || result.max_violation < params.tolerance) {
      result.converged = true;
      break;
    }
    if (result.iterations >= max_iter) break;
    ++result.iterations;

    const double old_i = alpha[i];
    const double old_j = alpha[j];
    if (y[i] != y[j]) {
      double quad = q(i, i) + q(j, j) + 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    grad.noalias() += di * q.col(i) + dj * q.col(j);
    if (keep_trace) result.objective_trace.push_back(dual_value(alpha, grad));
  }

  restore_equality(alpha, y, c);

  // Bias from the free multipliers' gradients, or the midpoint of the
  // feasible interval when none is free.
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= c) {
      if (y[t] == -1) upper = std::min(upper, yg); else lower = std::max(lower, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] == 1) upper = std::min(upper, yg); else lower = std::max(lower, yg);
    } else {
      free_sum += yg;
      ++free_count;
    }
  }
  double rho = 0.0;
  if (free_count > 0) {
    rho = free_sum / static_cast<double>(free_count);
  } else if (std::isfinite(upper) && std::isfinite(lower)) {
    rho = 0.5 * (upper + lower);
  } else if (std::isfinite(upper) || std::isfinite(lower)) {
    rho = std::isfinite(upper) ? upper : lower;
  }

  result.model = recover_model(train, alpha, -rho);
  result.train_seconds = seconds_since(start);
  return result;
}

}  // namespace qsvm
