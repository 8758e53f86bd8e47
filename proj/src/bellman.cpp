#include "pmm/bellman.hpp"

#include <cmath>
#include <stdexcept>

namespace pmm {

namespace {

int sign_of(double v) { return v < 0.0 ? -1 : +1; }  // sign(0) := +1

}  // namespace

Vector bellman_step(const Vector& p, const ProblemInstance& inst) {
  if (p.size() != inst.n())
    throw DimensionError("bellman_step: p length does not match n");
  const Vector next = inst.s + inst.A.transpose() * p -
                      inst.E.transpose() * (inst.r + inst.B.transpose() * p).cwiseAbs() +
                      inst.G.transpose() *
                          (-inst.gamma + inst.F.transpose() * p).cwiseAbs();
  if ((next.array() < 0.0).any())
    throw std::logic_error(
        "bellman_step produced a negative entry; instance does not satisfy "
        "the feasibility conditions");
  return next;
}

IterationResult value_iterate(const ProblemInstance& inst,
                              const IterationOptions& opts) {
  if (opts.tol <= 0.0) throw std::invalid_argument("tol must be positive");
  if (opts.cap <= 0.0) throw std::invalid_argument("cap must be positive");
  if (opts.max_iter < 1)
    throw std::invalid_argument("max_iter must be at least 1");

  IterationResult res;
  if (opts.record_history) res.history.emplace();

  Vector p = Vector::Zero(inst.n());
  for (long k = 1; k <= opts.max_iter; ++k) {
    Vector next = bellman_step(p, inst);
    const double change = (next - p).lpNorm<Eigen::Infinity>();
    if (res.history) res.history->push_back(change);
    p = std::move(next);
    res.value.iterations = k;
    res.value.residual_inf_norm = change;
    if (p.lpNorm<Eigen::Infinity>() > opts.cap) {
      res.status = IterationStatus::Diverged;
      res.value.p = std::move(p);
      return res;
    }
    if (change <= opts.tol) {
      res.status = IterationStatus::Converged;
      res.value.p = std::move(p);
      return res;
    }
  }
  res.status = IterationStatus::MaxIterationsReached;
  res.value.p = std::move(p);
  return res;
}

Vector bellman_residual(const Vector& p, const ProblemInstance& inst) {
  if (p.size() != inst.n())
    throw DimensionError("bellman_residual: p length does not match n");
  const Vector tp = inst.s + inst.A.transpose() * p -
                    inst.E.transpose() * (inst.r + inst.B.transpose() * p).cwiseAbs() +
                    inst.G.transpose() *
                        (-inst.gamma + inst.F.transpose() * p).cwiseAbs();
  return p - tp;
}

GainMatrix synthesize_gain(const ValueVector& value,
                           const ProblemInstance& inst) {
  const Vector& p = value.p;
  if (p.size() != inst.n())
    throw DimensionError("synthesize_gain: p length does not match n");
  GainMatrix gain;
  gain.K.resize(inst.m(), inst.n());
  gain.signs.resize(static_cast<size_t>(inst.m()));
  for (Eigen::Index i = 0; i < inst.m(); ++i) {
    const int sgn = sign_of(inst.r(i) + p.dot(inst.B.col(i)));
    gain.signs[static_cast<size_t>(i)] = sgn;
    gain.K.row(i) = sgn * inst.E.row(i);
  }
  return gain;
}

GainMatrix adversary_gain(const ValueVector& value,
                          const ProblemInstance& inst) {
  const Vector& p = value.p;
  if (p.size() != inst.n())
    throw DimensionError("adversary_gain: p length does not match n");
  GainMatrix gain;
  gain.K.resize(inst.l(), inst.n());
  gain.signs.resize(static_cast<size_t>(inst.l()));
  for (Eigen::Index j = 0; j < inst.l(); ++j) {
    const int sgn = sign_of(-inst.gamma(j) + p.dot(inst.F.col(j)));
    gain.signs[static_cast<size_t>(j)] = sgn;
    gain.K.row(j) = sgn * inst.G.row(j);
  }
  return gain;
}

double optimal_cost(const ValueVector& value, const Vector& x0) {
  if (value.p.size() != x0.size())
    throw DimensionError("optimal_cost: p and x0 lengths differ");
  if ((x0.array() < 0.0).any())
    throw std::domain_error("optimal_cost: x0 must be in the positive orthant");
  return value.p.dot(x0);
}

}  // namespace pmm
