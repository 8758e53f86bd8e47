#include "pmm/problem.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

namespace pmm {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw DimensionError(msg);
}

std::string shape(const Matrix& M) {
  std::ostringstream os;
  os << M.rows() << "x" << M.cols();
  return os.str();
}

}  // namespace

ProblemInstance::ProblemInstance(Matrix A_, Matrix B_, Matrix F_, Matrix E_,
                                 Matrix G_, Vector s_, Vector r_,
                                 Vector gamma_)
    : A(std::move(A_)),
      B(std::move(B_)),
      F(std::move(F_)),
      E(std::move(E_)),
      G(std::move(G_)),
      s(std::move(s_)),
      r(std::move(r_)),
      gamma(std::move(gamma_)) {
  const Eigen::Index nn = A.rows();
  require(nn >= 1 && A.cols() == nn, "A must be square n x n, got " + shape(A));
  require(B.rows() == nn,
          "B rows (" + shape(B) + ") must match A (" + shape(A) + ")");
  require(F.rows() == nn,
          "F rows (" + shape(F) + ") must match A (" + shape(A) + ")");
  const Eigen::Index mm = B.cols();
  const Eigen::Index ll = F.cols();
  require(mm >= 1, "B must have at least one column");
  require(ll >= 1, "F must have at least one column");
  require(E.rows() == mm && E.cols() == nn,
          "E (" + shape(E) + ") must be m x n to match B (" + shape(B) + ")");
  require(G.rows() == ll && G.cols() == nn,
          "G (" + shape(G) + ") must be l x n to match F (" + shape(F) + ")");
  require(s.size() == nn, "s length must equal n");
  require(r.size() == mm, "r length must equal m");
  require(gamma.size() == ll, "gamma length must equal l");
  if ((E.array() < 0.0).any())
    throw std::invalid_argument("E must be elementwise nonnegative");
  if ((G.array() < 0.0).any())
    throw std::invalid_argument("G must be elementwise nonnegative");
}

ConditionReport check_positivity_condition(const ProblemInstance& inst,
                                           double slack) {
  ConditionReport rep;
  const Matrix lhs =
      inst.A - inst.B.cwiseAbs() * inst.E - inst.F.cwiseAbs() * inst.G;
  rep.min_margin = lhs.minCoeff();
  for (Eigen::Index i = 0; i < lhs.rows(); ++i) {
    for (Eigen::Index j = 0; j < lhs.cols(); ++j) {
      if (lhs(i, j) < -slack)
        rep.violations.push_back({"positivity", i, j, lhs(i, j)});
    }
  }
  rep.ok = rep.violations.empty();
  return rep;
}

ConditionReport check_cost_condition(const ProblemInstance& inst,
                                     double slack) {
  ConditionReport rep;
  const Vector lhs = inst.s - inst.E.transpose() * inst.r.cwiseAbs() +
                     inst.G.transpose() * inst.gamma.cwiseAbs();
  rep.min_margin = lhs.minCoeff();
  for (Eigen::Index i = 0; i < lhs.size(); ++i) {
    if (lhs(i) < -slack) rep.violations.push_back({"cost", i, 0, lhs(i)});
  }
  rep.ok = rep.violations.empty();
  return rep;
}

ValidationReport validate(const ProblemInstance& inst, double slack) {
  ValidationReport rep;
  rep.positivity = check_positivity_condition(inst, slack);
  rep.cost = check_cost_condition(inst, slack);
  return rep;
}

namespace {

using nlohmann::json;

Matrix parse_matrix(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    throw ParseError("field \"" + name + "\" must be an array of row arrays");
  const size_t rows = j.size();
  const size_t cols = j.front().size();
  Matrix M(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.size() != cols)
      throw ParseError("field \"" + name + "\": row " + std::to_string(i + 1) +
                       " has inconsistent length");
    for (size_t k = 0; k < cols; ++k) {
      if (!row[k].is_number())
        throw ParseError("field \"" + name + "\": non-numeric entry at (" +
                         std::to_string(i + 1) + "," + std::to_string(k + 1) +
                         ")");
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          row[k].get<double>();
    }
  }
  return M;
}

Vector parse_vector(const json& j, const std::string& name) {
  if (!j.is_array())
    throw ParseError("field \"" + name + "\" must be a flat array");
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw ParseError("field \"" + name + "\": non-numeric entry at index " +
                       std::to_string(i + 1));
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

json matrix_to_json(const Matrix& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

}  // namespace

ProblemInstance load_problem(const std::string& text,
                             std::vector<std::string>* warnings) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("problem file is not valid JSON: ") +
                     e.what());
  }
  if (!doc.is_object()) throw ParseError("problem file must be a JSON object");

  static const char* kMatrices[] = {"A", "B", "F", "E", "G"};
  static const char* kVectors[] = {"s", "r", "gamma"};
  for (const char* key : kMatrices)
    if (!doc.contains(key))
      throw ParseError(std::string("missing field \"") + key + "\"");
  for (const char* key : kVectors)
    if (!doc.contains(key))
      throw ParseError(std::string("missing field \"") + key + "\"");

  if (warnings) {
    for (const auto& [key, val] : doc.items()) {
      (void)val;
      bool known = false;
      for (const char* k : kMatrices) known = known || key == k;
      for (const char* k : kVectors) known = known || key == k;
      if (!known) warnings->push_back("ignoring unknown key \"" + key + "\"");
    }
  }

  Matrix A = parse_matrix(doc["A"], "A");
  Matrix B = parse_matrix(doc["B"], "B");
  Matrix F = parse_matrix(doc["F"], "F");
  Matrix E = parse_matrix(doc["E"], "E");
  Matrix G = parse_matrix(doc["G"], "G");
  Vector s = parse_vector(doc["s"], "s");
  Vector r = parse_vector(doc["r"], "r");
  Vector gamma = parse_vector(doc["gamma"], "gamma");

  if ((E.array() < 0.0).any())
    throw ParseError("field \"E\" must be elementwise nonnegative");
  if ((G.array() < 0.0).any())
    throw ParseError("field \"G\" must be elementwise nonnegative");

  try {
    return ProblemInstance(std::move(A), std::move(B), std::move(F),
                           std::move(E), std::move(G), std::move(s),
                           std::move(r), std::move(gamma));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

std::string serialize_problem(const ProblemInstance& inst) {
  json doc;
  doc["A"] = matrix_to_json(inst.A);
  doc["B"] = matrix_to_json(inst.B);
  doc["F"] = matrix_to_json(inst.F);
  doc["E"] = matrix_to_json(inst.E);
  doc["G"] = matrix_to_json(inst.G);
  doc["s"] = vector_to_json(inst.s);
  doc["r"] = vector_to_json(inst.r);
  doc["gamma"] = vector_to_json(inst.gamma);
  return doc.dump(2) + "\n";
}

}  // namespace pmm
