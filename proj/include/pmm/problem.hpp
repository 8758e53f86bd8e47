#ifndef PMM_PROBLEM_HPP
#define PMM_PROBLEM_HPP

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when operand shapes do not line up. Message names both operands.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a problem file cannot be parsed or fails schema checks.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Data of the minimax control problem
///
///   inf_mu max_w  sum_t [ s'x(t) + r'u(t) - gamma'w(t) ]
///   x(t+1) = A x + B u + F w,   |u| <= E x,   |w| <= G x.
///
/// Construction checks shapes and E,G >= 0 only; the feasibility
/// conditions are checked explicitly via check_positivity_condition /
/// check_cost_condition so that infeasible instances can still be built.
struct ProblemInstance {
  Matrix A;  // n x n state transition
  Matrix B;  // n x m input map, column i is B_i
  Matrix F;  // n x l disturbance map
  Matrix E;  // m x n control-bound structure, nonnegative
  Matrix G;  // l x n disturbance-bound structure, nonnegative
  Vector s;      // n state weights
  Vector r;      // m control weights
  Vector gamma;  // l disturbance weights

  ProblemInstance(Matrix A, Matrix B, Matrix F, Matrix E, Matrix G,
                  Vector s, Vector r, Vector gamma);

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index m() const { return B.cols(); }
  Eigen::Index l() const { return F.cols(); }
};

/// One failed elementwise inequality entry.
struct Violation {
  std::string condition;  // "positivity" or "cost"
  Eigen::Index row = 0;
  Eigen::Index col = 0;   // always 0 for the (vector-valued) cost condition
  double margin = 0.0;    // lhs value; negative means violated
};

struct ConditionReport {
  bool ok = true;
  double min_margin = 0.0;
  std::vector<Violation> violations;
};

struct ValidationReport {
  bool dim_ok = true;
  ConditionReport positivity;  // A - |B|E - |F|G >= 0
  ConditionReport cost;        // s - E'|r| + G'|gamma| >= 0
  bool all_ok() const { return dim_ok && positivity.ok && cost.ok; }
};

/// Elementwise check of A - |B|E - |F|G >= -slack. Lists every violating
/// entry with its margin.
ConditionReport check_positivity_condition(const ProblemInstance& inst,
                                           double slack = 0.0);

/// Elementwise check of s - E'|r| + G'|gamma| >= -slack.
ConditionReport check_cost_condition(const ProblemInstance& inst,
                                     double slack = 0.0);

/// Runs both condition checks.
ValidationReport validate(const ProblemInstance& inst, double slack = 0.0);

/// Parses a problem file (JSON with keys A,B,F,E,G,s,r,gamma; matrices as
/// arrays of row arrays, vectors as flat arrays). Does not validate the
/// feasibility conditions. Unknown keys are collected into `warnings` when
/// the pointer is non-null.
ProblemInstance load_problem(const std::string& text,
                             std::vector<std::string>* warnings = nullptr);

/// Serializes back to the problem file format. Round-trips exactly for
/// decimal-representable values.
std::string serialize_problem(const ProblemInstance& inst);

}  // namespace pmm

#endif  // PMM_PROBLEM_HPP
