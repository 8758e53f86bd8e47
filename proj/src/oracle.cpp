#include "pmm/oracle.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pmm/bellman.hpp"

namespace pmm {

namespace {

void check_limits(const ProblemInstance& inst, const OracleLimits& limits) {
  const long bits = static_cast<long>(inst.m() + inst.l());
  if (bits > limits.max_sign_bits)
    throw OracleLimitError("oracle: m + l = " + std::to_string(bits) +
                           " exceeds the enumeration limit of " +
                           std::to_string(limits.max_sign_bits) + " sign bits");
}

}  // namespace

StageResult stage_minimax(
    const Vector& x, const std::function<double(const Vector&)>& next_value,
    const ProblemInstance& inst, const OracleLimits& limits) {
  if (x.size() != inst.n())
    throw DimensionError("stage_minimax: x length does not match n");
  check_limits(inst, limits);

  const Eigen::Index m = inst.m();
  const Eigen::Index l = inst.l();
  const Vector u_bound = inst.E * x;  // row i gives |u_i| <= (Ex)_i
  const Vector w_bound = inst.G * x;

  StageResult best;
  best.value = std::numeric_limits<double>::infinity();

  Vector u(m), w(l);
  for (unsigned long ui = 0; ui < (1ul << m); ++ui) {
    for (Eigen::Index i = 0; i < m; ++i)
      u(i) = ((ui >> i) & 1ul) ? -u_bound(i) : u_bound(i);

    double inner_best = -std::numeric_limits<double>::infinity();
    Vector inner_w(l);
    for (unsigned long wi = 0; wi < (1ul << l); ++wi) {
      for (Eigen::Index j = 0; j < l; ++j)
        w(j) = ((wi >> j) & 1ul) ? -w_bound(j) : w_bound(j);
      const double stage =
          inst.s.dot(x) + inst.r.dot(u) - inst.gamma.dot(w);
      const Vector x_next = inst.A * x + inst.B * u + inst.F * w;
      const double total = stage + next_value(x_next);
      if (total > inner_best) {
        inner_best = total;
        inner_w = w;
      }
    }
    if (inner_best < best.value) {
      best.value = inner_best;
      best.u = u;
      best.w = inner_w;
    }
  }
  return best;
}

namespace {

double dp_value(const ProblemInstance& inst, long horizon, const Vector& x,
                const OracleLimits& limits) {
  if (horizon == 0) return 0.0;
  auto tail = [&](const Vector& x_next) {
    return dp_value(inst, horizon - 1, x_next, limits);
  };
  return stage_minimax(x, tail, inst, limits).value;
}

}  // namespace

DpResult finite_horizon_dp(const ProblemInstance& inst, long horizon,
                           const Vector& x, const OracleLimits& limits) {
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  if (horizon > limits.max_horizon)
    throw OracleLimitError("oracle: horizon " + std::to_string(horizon) +
                           " exceeds the recursion limit of " +
                           std::to_string(limits.max_horizon));
  if (x.size() != inst.n())
    throw DimensionError("finite_horizon_dp: x length does not match n");
  check_limits(inst, limits);

  DpResult res;
  res.horizon = horizon;
  if (horizon == 0) {
    res.value = 0.0;
    res.minimizer = Vector::Zero(inst.m());
    res.maximizer = Vector::Zero(inst.l());
    return res;
  }
  auto tail = [&](const Vector& x_next) {
    return dp_value(inst, horizon - 1, x_next, limits);
  };
  StageResult root = stage_minimax(x, tail, inst, limits);
  res.value = root.value;
  res.minimizer = std::move(root.u);
  res.maximizer = std::move(root.w);
  return res;
}

LinearValueCheck verify_linear_value(const ProblemInstance& inst, long horizon,
                                     const std::vector<Vector>& samples,
                                     double tol, const OracleLimits& limits) {
  if (tol <= 0.0) throw std::invalid_argument("tol must be positive");
  Vector p = Vector::Zero(inst.n());
  for (long k = 0; k < horizon; ++k) p = bellman_step(p, inst);

  LinearValueCheck check;
  for (const Vector& x : samples) {
    const double dp = finite_horizon_dp(inst, horizon, x, limits).value;
    const double linear = p.dot(x);
    const double dev = std::abs(dp - linear);
    check.max_deviation = std::max(check.max_deviation, dev);
    if (dev > tol * (1.0 + std::abs(dp))) check.ok = false;
  }
  return check;
}

}  // namespace pmm
