#ifndef PMM_SIMULATE_HPP
#define PMM_SIMULATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pmm/bellman.hpp"
#include "pmm/problem.hpp"

namespace pmm {

/// Disturbance strategies are named (not arbitrary callbacks) so a rollout
/// is reproducible from (instance, policy, seed, T).
enum class DisturbanceKind { WorstCase, Zero, RandomAdmissible };

struct DisturbancePolicy {
  DisturbanceKind kind = DisturbanceKind::Zero;
  Matrix L;               // required for WorstCase
  std::uint64_t seed = 0; // required for RandomAdmissible

  static DisturbancePolicy worst_case(Matrix L);
  static DisturbancePolicy zero();
  static DisturbancePolicy random_admissible(std::uint64_t seed);
};

struct Trajectory {
  std::vector<Vector> states;        // x(0..T)
  std::vector<Vector> inputs;        // u(0..T-1)
  std::vector<Vector> disturbances;  // w(0..T-1)
  std::vector<double> stage_costs;   // g(x(t),u(t),w(t))
};

struct StepResult {
  Vector x_next;
  Vector u;
  Vector w;
  double stage_cost = 0.0;
};

/// One step of x' = Ax + Bu + Fw with u = -Kx and w from the policy.
/// Admissibility |u| <= Ex, |w| <= Gx is re-checked every step; a
/// violation throws, it indicates a bug rather than user error.
StepResult closed_loop_step(const Vector& x, const GainMatrix& gain,
                            const DisturbancePolicy& w_policy,
                            const ProblemInstance& inst);

Trajectory simulate(const ProblemInstance& inst, const GainMatrix& gain,
                    const DisturbancePolicy& w_policy, const Vector& x0,
                    long horizon);

double accumulated_cost(const Trajectory& traj);

struct InvarianceReport {
  bool ok = true;
  double min_state_entry = 0.0;
  long trials = 0;
};

/// Runs random rollouts with admissible u of arbitrary sign and admissible
/// random w; reports the smallest state entry seen. Passes iff >= threshold.
InvarianceReport check_positive_invariance(const ProblemInstance& inst,
                                           const Vector& x0, long horizon,
                                           long trials, std::uint64_t seed,
                                           double threshold = 0.0);

/// CSV with header t,x_1..x_n,u_1..u_m,w_1..w_l,stage_cost; input,
/// disturbance and cost columns are empty on the final row.
std::string trajectory_to_csv(const Trajectory& traj);

}  // namespace pmm

#endif  // PMM_SIMULATE_HPP
