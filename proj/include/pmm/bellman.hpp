#ifndef PMM_BELLMAN_HPP
#define PMM_BELLMAN_HPP

#include <optional>
#include <vector>

#include "pmm/problem.hpp"

namespace pmm {

/// Candidate or converged fixed point of the Bellman recursion, with
/// iteration metadata. p >= 0 elementwise for validated instances.
struct ValueVector {
  Vector p;
  long iterations = 0;
  double residual_inf_norm = 0.0;
};

enum class IterationStatus { Converged, Diverged, MaxIterationsReached };

struct IterationResult {
  IterationStatus status = IterationStatus::MaxIterationsReached;
  ValueVector value;  // last iterate
  std::optional<std::vector<double>> history;  // per-step inf-norm changes
};

struct IterationOptions {
  double tol = 1e-10;       // inf-norm step-change tolerance
  long max_iter = 100000;
  double cap = 1e12;        // inf-norm divergence cap
  bool record_history = false;
};

/// Feedback gain with |K| = E and row signs sign(r_i + p'B_i); the
/// adversary variant holds L with |L| = G and signs sign(-gamma_j + p'F_j).
struct GainMatrix {
  Matrix K;                  // m x n (or l x n for the adversary)
  std::vector<int> signs;    // entries in {-1, +1}
};

/// One application of the Bellman operator:
///   T(p) = s + A'p - E'|r + B'p| + G'|-gamma + F'p|.
/// Throws if the result has a negative entry, which signals an instance
/// that does not satisfy the feasibility conditions.
Vector bellman_step(const Vector& p, const ProblemInstance& inst);

/// Value iteration from p_0 = 0. Stops on step change <= tol (Converged),
/// inf-norm above cap (Diverged), or max_iter. Divergence is a status, not
/// an error. The iterate sequence is elementwise nondecreasing.
IterationResult value_iterate(const ProblemInstance& inst,
                              const IterationOptions& opts = {});

/// p - T(p); all zeros iff p is a fixed point.
Vector bellman_residual(const Vector& p, const ProblemInstance& inst);

/// Optimal feedback gain, row i of K = sign(r_i + p'B_i) * E_i.
/// sign(0) := +1 so ties resolve deterministically.
GainMatrix synthesize_gain(const ValueVector& value,
                           const ProblemInstance& inst);

/// Worst-case disturbance gain, row j of L = sign(-gamma_j + p'F_j) * G_j.
GainMatrix adversary_gain(const ValueVector& value,
                          const ProblemInstance& inst);

/// p'x0. Throws std::domain_error for x0 with a negative entry.
double optimal_cost(const ValueVector& value, const Vector& x0);

}  // namespace pmm

#endif  // PMM_BELLMAN_HPP
