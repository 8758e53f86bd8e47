#include "pmm/simulate.hpp"

#include <charconv>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace pmm {

namespace {

// Shortest round-trip decimal form, locale-independent.
std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

void check_admissible(const Vector& signal, const Vector& bound,
                      const char* name) {
  // tiny slack for the products K*x vs E*x evaluated in different orders
  const double slack = 1e-12 * (1.0 + bound.lpNorm<Eigen::Infinity>());
  if ((signal.cwiseAbs().array() > bound.array() + slack).any())
    throw std::logic_error(std::string("closed_loop_step: inadmissible ") +
                           name + " (invariant violation)");
}

Vector random_in_box(const Vector& bound, std::mt19937_64& rng) {
  Vector v(bound.size());
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (Eigen::Index i = 0; i < bound.size(); ++i) v(i) = unit(rng) * bound(i);
  return v;
}

}  // namespace

DisturbancePolicy DisturbancePolicy::worst_case(Matrix L) {
  DisturbancePolicy p;
  p.kind = DisturbanceKind::WorstCase;
  p.L = std::move(L);
  return p;
}

DisturbancePolicy DisturbancePolicy::zero() { return DisturbancePolicy{}; }

DisturbancePolicy DisturbancePolicy::random_admissible(std::uint64_t seed) {
  DisturbancePolicy p;
  p.kind = DisturbanceKind::RandomAdmissible;
  p.seed = seed;
  return p;
}

namespace {

StepResult step_impl(const Vector& x, const GainMatrix& gain,
                     const DisturbancePolicy& w_policy,
                     const ProblemInstance& inst, std::mt19937_64* rng) {
  if (x.size() != inst.n())
    throw DimensionError("closed_loop_step: x length does not match n");
  if (gain.K.rows() != inst.m() || gain.K.cols() != inst.n())
    throw DimensionError("closed_loop_step: K must be m x n");

  StepResult res;
  res.u = -(gain.K * x);
  check_admissible(res.u, inst.E * x, "u");

  const Vector w_bound = inst.G * x;
  switch (w_policy.kind) {
    case DisturbanceKind::WorstCase:
      if (w_policy.L.rows() != inst.l() || w_policy.L.cols() != inst.n())
        throw DimensionError("closed_loop_step: L must be l x n");
      res.w = w_policy.L * x;
      break;
    case DisturbanceKind::Zero:
      res.w = Vector::Zero(inst.l());
      break;
    case DisturbanceKind::RandomAdmissible:
      res.w = random_in_box(w_bound, *rng);
      break;
  }
  check_admissible(res.w, w_bound, "w");

  res.stage_cost = inst.s.dot(x) + inst.r.dot(res.u) - inst.gamma.dot(res.w);
  res.x_next = inst.A * x + inst.B * res.u + inst.F * res.w;
  return res;
}

}  // namespace

StepResult closed_loop_step(const Vector& x, const GainMatrix& gain,
                            const DisturbancePolicy& w_policy,
                            const ProblemInstance& inst) {
  std::mt19937_64 rng(w_policy.seed);
  return step_impl(x, gain, w_policy, inst, &rng);
}

Trajectory simulate(const ProblemInstance& inst, const GainMatrix& gain,
                    const DisturbancePolicy& w_policy, const Vector& x0,
                    long horizon) {
  if (horizon < 1) throw std::invalid_argument("simulate: horizon must be >= 1");
  if ((x0.array() < 0.0).any())
    throw std::domain_error("simulate: x0 must be in the positive orthant");

  std::mt19937_64 rng(w_policy.seed);
  Trajectory traj;
  traj.states.reserve(static_cast<size_t>(horizon) + 1);
  traj.states.push_back(x0);
  for (long t = 0; t < horizon; ++t) {
    StepResult step = step_impl(traj.states.back(), gain, w_policy, inst, &rng);
    traj.inputs.push_back(std::move(step.u));
    traj.disturbances.push_back(std::move(step.w));
    traj.stage_costs.push_back(step.stage_cost);
    traj.states.push_back(std::move(step.x_next));
  }
  return traj;
}

double accumulated_cost(const Trajectory& traj) {
  double total = 0.0;
  for (double g : traj.stage_costs) total += g;
  return total;
}

InvarianceReport check_positive_invariance(const ProblemInstance& inst,
                                           const Vector& x0, long horizon,
                                           long trials, std::uint64_t seed,
                                           double threshold) {
  if ((x0.array() < 0.0).any())
    throw std::domain_error("check_positive_invariance: x0 must be >= 0");
  std::mt19937_64 rng(seed);
  InvarianceReport rep;
  rep.trials = trials;
  rep.min_state_entry = x0.size() > 0 ? x0.minCoeff() : 0.0;
  for (long trial = 0; trial < trials; ++trial) {
    Vector x = x0;
    for (long t = 0; t < horizon; ++t) {
      const Vector u = random_in_box(inst.E * x.cwiseMax(0.0), rng);
      const Vector w = random_in_box(inst.G * x.cwiseMax(0.0), rng);
      x = inst.A * x + inst.B * u + inst.F * w;
      rep.min_state_entry = std::min(rep.min_state_entry, x.minCoeff());
    }
  }
  rep.ok = rep.min_state_entry >= threshold;
  return rep;
}

std::string trajectory_to_csv(const Trajectory& traj) {
  const size_t T = traj.stage_costs.size();
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
  const Eigen::Index m = traj.inputs.empty() ? 0 : traj.inputs.front().size();
  const Eigen::Index l =
      traj.disturbances.empty() ? 0 : traj.disturbances.front().size();

  std::ostringstream os;
  os << "t";
  for (Eigen::Index i = 1; i <= n; ++i) os << ",x_" << i;
  for (Eigen::Index i = 1; i <= m; ++i) os << ",u_" << i;
  for (Eigen::Index i = 1; i <= l; ++i) os << ",w_" << i;
  os << ",stage_cost\n";

  for (size_t t = 0; t < traj.states.size(); ++t) {
    os << t;
    for (Eigen::Index i = 0; i < n; ++i)
      os << "," << format_double(traj.states[t](i));
    if (t < T) {
      for (Eigen::Index i = 0; i < m; ++i)
        os << "," << format_double(traj.inputs[t](i));
      for (Eigen::Index i = 0; i < l; ++i)
        os << "," << format_double(traj.disturbances[t](i));
      os << "," << format_double(traj.stage_costs[t]);
    } else {
      for (Eigen::Index i = 0; i < m + l; ++i) os << ",";
      os << ",";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace pmm
