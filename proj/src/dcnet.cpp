#include "pmm/dcnet.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace pmm {

DcNetwork::DcNetwork(Vector capacitances_, std::vector<Line> lines_)
    : capacitances(std::move(capacitances_)), lines(std::move(lines_)) {
  const Eigen::Index nn = capacitances.size();
  if (nn < 1) throw std::invalid_argument("network needs at least one bus");
  if ((capacitances.array() <= 0.0).any())
    throw std::invalid_argument("bus capacitances must be positive");
  std::set<std::pair<int, int>> seen;
  for (const Line& line : lines) {
    if (line.i < 0 || line.j < 0 || line.i >= nn || line.j >= nn)
      throw std::invalid_argument("line endpoint out of range");
    if (line.i == line.j)
      throw std::invalid_argument("self-loop line at bus " +
                                  std::to_string(line.i + 1));
    if (line.resistance <= 0.0)
      throw std::invalid_argument("line resistance must be positive");
    auto key = std::minmax(line.i, line.j);
    if (!seen.insert(key).second)
      throw std::invalid_argument(
          "parallel lines between buses " + std::to_string(key.first + 1) +
          " and " + std::to_string(key.second + 1) +
          "; combine their conductances first");
  }
}

Matrix build_laplacian(const DcNetwork& net) {
  Matrix L = Matrix::Zero(net.n(), net.n());
  for (const Line& line : net.lines) {
    const double cond = 1.0 / line.resistance;
    L(line.i, line.j) -= cond;
    L(line.j, line.i) -= cond;
    L(line.i, line.i) += cond;
    L(line.j, line.j) += cond;
  }
  return L;
}

DiscretizedSystem discretize(const DcNetwork& net, double h) {
  if (h <= 0.0) throw std::invalid_argument("step size h must be positive");
  DiscretizedSystem sys;
  sys.h = h;
  const Vector hCinv = h * net.capacitances.cwiseInverse();
  sys.A = Matrix::Identity(net.n(), net.n()) -
          hCinv.asDiagonal() * build_laplacian(net);
  sys.B = Matrix(hCinv.asDiagonal());
  sys.F = sys.B;
  return sys;
}

namespace {

void require_square(const Matrix& M, Eigen::Index n, const char* name) {
  if (M.rows() != n || M.cols() != n)
    throw DimensionError(std::string(name) +
                         " must be n x n for network assembly (n = " +
                         std::to_string(n) + ")");
}

}  // namespace

StepSizeResult max_step_size(const DcNetwork& net, const Matrix& E,
                             const Matrix& G) {
  const Eigen::Index n = net.n();
  require_square(E, n, "E");
  require_square(G, n, "G");

  const Matrix L = build_laplacian(net);
  StepSizeResult res;

  // Off-diagonal constraints carry no h: e_ij + g_ij <= 1/R_ij, and the
  // bound structure must inherit the zero pattern of the Laplacian.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double budget = -L(i, j);  // 1/R_ij, or 0 with no line
      const double used = E(i, j) + G(i, j);
      if (used > budget)
        res.structural_violations.push_back(
            {"structural", i, j, budget - used});
    }
  }

  double h_max = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double denom = E(i, i) + G(i, i) + L(i, i);
    if (denom > 0.0) h_max = std::min(h_max, net.capacitances(i) / denom);
  }
  res.h_max = h_max;
  res.unbounded = std::isinf(h_max);
  return res;
}

ConditionReport check_network_condition(const DcNetwork& net, double h,
                                        const Matrix& E, const Matrix& G,
                                        double slack) {
  const Eigen::Index n = net.n();
  require_square(E, n, "E");
  require_square(G, n, "G");
  if (h <= 0.0) throw std::invalid_argument("step size h must be positive");

  const Vector hCinv = h * net.capacitances.cwiseInverse();
  const Matrix lhs = Matrix::Identity(n, n) -
                     hCinv.asDiagonal() * build_laplacian(net) -
                     hCinv.asDiagonal() * (E + G);
  ConditionReport rep;
  rep.min_margin = lhs.minCoeff();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (lhs(i, j) < -slack)
        rep.violations.push_back({"positivity", i, j, lhs(i, j)});
  rep.ok = rep.violations.empty();
  return rep;
}

ProblemInstance assemble_problem(const DcNetwork& net, double h,
                                 const Matrix& E, const Matrix& G,
                                 const Vector& s, const Vector& r,
                                 const Vector& gamma, double slack) {
  DiscretizedSystem sys = discretize(net, h);
  ProblemInstance inst(std::move(sys.A), std::move(sys.B), std::move(sys.F),
                       E, G, s, r, gamma);
  ValidationReport report = validate(inst, slack);
  if (!report.all_ok()) {
    std::string msg = "network problem assembly refused:";
    if (!report.positivity.ok)
      msg += " positivity condition fails (" +
             std::to_string(report.positivity.violations.size()) + " entries)";
    if (!report.cost.ok)
      msg += " cost condition fails (" +
             std::to_string(report.cost.violations.size()) + " entries)";
    throw AssemblyError(msg, std::move(report));
  }
  return inst;
}

DcNetwork load_network(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("network file is not valid JSON: ") +
                     e.what());
  }
  if (!doc.is_object() || !doc.contains("capacitances"))
    throw ParseError("network file must contain \"capacitances\"");

  const json& caps = doc["capacitances"];
  if (!caps.is_array() || caps.empty())
    throw ParseError("\"capacitances\" must be a non-empty array");
  Vector C(caps.size());
  for (size_t i = 0; i < caps.size(); ++i) {
    if (!caps[i].is_number())
      throw ParseError("\"capacitances\" entry " + std::to_string(i + 1) +
                       " is not a number");
    C(static_cast<Eigen::Index>(i)) = caps[i].get<double>();
  }

  std::vector<Line> lines;
  if (doc.contains("lines")) {
    const json& jlines = doc["lines"];
    if (!jlines.is_array()) throw ParseError("\"lines\" must be an array");
    for (const json& jl : jlines) {
      if (!jl.is_object() || !jl.contains("i") || !jl.contains("j") ||
          !jl.contains("R"))
        throw ParseError("each line needs fields \"i\", \"j\", \"R\"");
      Line line;
      line.i = jl["i"].get<int>() - 1;  // file is 1-based
      line.j = jl["j"].get<int>() - 1;
      line.resistance = jl["R"].get<double>();
      lines.push_back(line);
    }
  }

  try {
    return DcNetwork(std::move(C), std::move(lines));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace pmm
