#ifndef PMM_DCNET_HPP
#define PMM_DCNET_HPP

#include <string>
#include <vector>

#include "pmm/problem.hpp"

namespace pmm {

/// Resistive line between two buses. Node indices are 0-based in code;
/// the network file format uses 1-based indices.
struct Line {
  int i = 0;
  int j = 0;
  double resistance = 0.0;  // ohms, > 0
};

/// DC power network: first-order capacitive buses joined by resistive
/// lines. At most one line per bus pair; parallel lines are rejected at
/// construction rather than merged.
struct DcNetwork {
  Vector capacitances;  // farads, > 0
  std::vector<Line> lines;

  DcNetwork(Vector capacitances, std::vector<Line> lines);

  Eigen::Index n() const { return capacitances.size(); }
};

/// Explicit-Euler discretization of C dV/dt = -L_R V + u + w.
struct DiscretizedSystem {
  Matrix A;   // I - h C^-1 L_R; rows sum to 1 exactly
  Matrix B;   // h C^-1, diagonal
  Matrix F;   // equal to B
  double h = 0.0;
};

struct StepSizeResult {
  double h_max = 0.0;  // +inf when no diagonal constraint binds
  bool unbounded = false;
  // Off-diagonal feasibility is independent of h and reported here:
  // entries where e_ij + g_ij exceeds 1/R_ij, or is nonzero with no line.
  std::vector<Violation> structural_violations;
};

/// Thrown by assemble_problem when either feasibility condition fails.
class AssemblyError : public std::runtime_error {
 public:
  AssemblyError(const std::string& msg, ValidationReport report)
      : std::runtime_error(msg), report(std::move(report)) {}
  ValidationReport report;
};

/// Weighted graph Laplacian: off-diagonal (i,j) = -1/R_ij, diagonal the
/// conductance sum. Symmetric, zero row sums.
Matrix build_laplacian(const DcNetwork& net);

DiscretizedSystem discretize(const DcNetwork& net, double h);

/// Largest step keeping the diagonal of the positivity condition feasible:
///   h_max = min_i  C_i / (e_ii + g_ii + sum_j 1/R_ij).
/// E and G must be n x n (per-bus controls and disturbances).
StepSizeResult max_step_size(const DcNetwork& net, const Matrix& E,
                             const Matrix& G);

/// Elementwise check of I - h C^-1 L_R >= h C^-1 E + h C^-1 G. Agrees with
/// check_positivity_condition on the assembled instance.
ConditionReport check_network_condition(const DcNetwork& net, double h,
                                        const Matrix& E, const Matrix& G,
                                        double slack = 0.0);

/// Builds a validated ProblemInstance with A = I - h C^-1 L_R and
/// B = F = h C^-1. Throws AssemblyError with the embedded report when the
/// positivity or cost condition fails.
ProblemInstance assemble_problem(const DcNetwork& net, double h,
                                 const Matrix& E, const Matrix& G,
                                 const Vector& s, const Vector& r,
                                 const Vector& gamma, double slack = 0.0);

/// Parses the network file format: JSON with "capacitances" (array) and
/// "lines" (array of {"i": 1-based int, "j": int, "R": number}).
DcNetwork load_network(const std::string& text);

}  // namespace pmm

#endif  // PMM_DCNET_HPP
