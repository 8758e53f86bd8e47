#ifndef PMM_ORACLE_HPP
#define PMM_ORACLE_HPP

#include <functional>
#include <vector>

#include "pmm/problem.hpp"

namespace pmm {

// Brute-force finite-horizon minimax dynamic programming. Exhaustive
// vertex enumeration, exponential on purpose: this module exists to
// certify small instances independently of the value-iteration code and
// must not call into it.

/// Thrown when m, l or the horizon exceed the enumeration limits.
class OracleLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleLimits {
  int max_sign_bits = 12;  // m + l
  int max_horizon = 8;
};

struct StageResult {
  Vector u;  // minimizer at the root stage
  Vector w;  // maximizer at the root stage
  double value = 0.0;
};

struct DpResult {
  long horizon = 0;
  double value = 0.0;
  Vector minimizer;
  Vector maximizer;
};

struct LinearValueCheck {
  bool ok = true;
  double max_deviation = 0.0;
};

/// min over u in the vertex set {u_i = +-(E_i x)} of max over w in
/// {w_j = +-(G_j x)} of g(x,u,w) + next_value(Ax+Bu+Fw). Constraining the
/// search to vertices is exact when next_value is linear, since the
/// objective is then affine in each u_i and w_j over its interval.
StageResult stage_minimax(const Vector& x,
                          const std::function<double(const Vector&)>& next_value,
                          const ProblemInstance& inst,
                          const OracleLimits& limits = {});

/// J_0 = 0; J_k(x) by backward recursion through stage_minimax, evaluated
/// as a pure recursion tree with no closed-form shortcut.
DpResult finite_horizon_dp(const ProblemInstance& inst, long horizon,
                           const Vector& x, const OracleLimits& limits = {});

/// Checks |J_k(x) - p_k'x| <= tol*(1+|J_k(x)|) at every sample, where p_k
/// comes from k applications of the value-iteration step. This is the
/// bridge between the two routes; the DP side stays independent.
LinearValueCheck verify_linear_value(const ProblemInstance& inst, long horizon,
                                     const std::vector<Vector>& samples,
                                     double tol,
                                     const OracleLimits& limits = {});

}  // namespace pmm

#endif  // PMM_ORACLE_HPP
