#ifndef PMM_TESTS_SUPPORT_HPP
#define PMM_TESTS_SUPPORT_HPP

#include <random>

#include "pmm/problem.hpp"

namespace pmm::testing {

inline ProblemInstance scalar_instance(double a, double b, double f, double e,
                                       double g, double s, double r,
                                       double gamma) {
  Matrix A(1, 1), B(1, 1), F(1, 1), E(1, 1), G(1, 1);
  A << a; B << b; F << f; E << e; G << g;
  Vector sv(1), rv(1), gv(1);
  sv << s; rv << r; gv << gamma;
  return ProblemInstance(A, B, F, E, G, sv, rv, gv);
}

// Reference scalar instances used throughout the suites.
inline ProblemInstance s1() {
  return scalar_instance(0.9, 0.2, 0.1, 1.0, 1.0, 1.0, 0.1, 0.05);
}
inline ProblemInstance s0() {
  return scalar_instance(0.5, 0.3, 0.4, 0.0, 0.0, 1.0, 0.0, 0.0);
}
inline ProblemInstance sd() {
  return scalar_instance(1.1, 0.3, 0.4, 0.0, 0.0, 1.0, 0.0, 0.0);
}

// Random instance satisfying both feasibility conditions with the map
// contractive enough that value iteration converges. A is built on top of
// |B|E + |F|G and every term is scaled so that the column sums of
// A + |F|G stay below 0.9, which bounds the Bellman operator by a
// convergent affine map.
inline ProblemInstance random_validated_instance(std::mt19937_64& rng,
                                                 Eigen::Index n,
                                                 Eigen::Index m,
                                                 Eigen::Index l) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);

  auto rand_matrix = [&](Eigen::Index rows, Eigen::Index cols, bool nonneg) {
    Matrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j)
        M(i, j) = nonneg ? unit(rng) : sym(rng);
    return M;
  };

  Matrix B = rand_matrix(n, m, false) / static_cast<double>(n);
  Matrix F = rand_matrix(n, l, false) / static_cast<double>(n);
  Matrix E = rand_matrix(m, n, true) / static_cast<double>(m);
  Matrix G = rand_matrix(l, n, true) / static_cast<double>(l);

  // sparsify E and G so gain-structure checks see genuine zero patterns
  for (Eigen::Index i = 0; i < E.rows(); ++i)
    for (Eigen::Index j = 0; j < E.cols(); ++j)
      if (unit(rng) < 0.3) E(i, j) = 0.0;
  for (Eigen::Index i = 0; i < G.rows(); ++i)
    for (Eigen::Index j = 0; j < G.cols(); ++j)
      if (unit(rng) < 0.3) G(i, j) = 0.0;

  const Matrix base = B.cwiseAbs() * E + F.cwiseAbs() * G;
  const double base_cols =
      (base + F.cwiseAbs() * G).colwise().sum().maxCoeff();
  if (base_cols > 0.4) {
    const double scale = std::sqrt(0.4 / base_cols);
    B *= scale; F *= scale; E *= scale; G *= scale;
  }

  Matrix slack = rand_matrix(n, n, true);
  const double slack_cols = slack.colwise().sum().maxCoeff();
  if (slack_cols > 0.0) slack *= 0.45 / slack_cols;

  const Matrix A = B.cwiseAbs() * E + F.cwiseAbs() * G + slack;

  Vector r(m), gamma(l);
  for (Eigen::Index i = 0; i < m; ++i) r(i) = sym(rng);
  for (Eigen::Index j = 0; j < l; ++j) gamma(j) = sym(rng);

  Vector s = E.transpose() * r.cwiseAbs() - G.transpose() * gamma.cwiseAbs();
  for (Eigen::Index i = 0; i < n; ++i) s(i) = std::max(s(i), 0.0) + unit(rng);

  return ProblemInstance(A, B, F, E, G, s, r, gamma);
}

inline Vector random_nonneg_state(std::mt19937_64& rng, Eigen::Index n,
                                  double hi = 10.0) {
  std::uniform_real_distribution<double> coord(0.0, hi);
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = coord(rng);
  return x;
}

}  // namespace pmm::testing

#endif  // PMM_TESTS_SUPPORT_HPP
