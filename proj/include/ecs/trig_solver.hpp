// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ECS_TRIG_SOLVER_HPP
#define ECS_TRIG_SOLVER_HPP

#include <map>
#include <vector>

#include "ecs/correlation.hpp"
#include "ecs/scalar.hpp"
#include "ecs/spectrum.hpp"

namespace ecs {

/// Eigenvector in the hatF basis: alpha_n(m) for every m in the raise window.
template <class T>
struct CoefficientTable {
  MomentumVector base;
  T lambda{};
  int budget = 0;
  std::map<MomentumVector, T> entries;

  T at(const MomentumVector& m) const {
    auto it = entries.find(m);
    return it == entries.end() ? T(0) : it->second;
  }
};

/// States m = n + d with sum d = 0, every partial sum P_l(d) >= lower and
/// sum_l P_l <= budget, sorted by raise weight and then lexicographically.
std::vector<MomentumVector> raise_window(const MomentumVector& n, int lower, int budget);

/// Triangular recursion
///   [E0(m) - E0(n)] alpha(m) = gamma sum_{j<k} sum_{nu>=1} nu alpha(m - nu E_jk).
template <class T>
CoefficientTable<T> alpha_recursive(const MomentumVector& n, const T& lambda, int budget);

/// Explicit sum over raising paths n -> m with at most s_max steps.
template <class T>
CoefficientTable<T> alpha_explicit(const MomentumVector& n, const T& lambda, int s_max,
                                   int budget);

template <class T>
struct OracleEigenpair {
  /// Leading partition of the eigenvector.
  MomentumVector label;
  T eigenvalue;
  /// Coefficients on the monomial basis of the same degree, label entry 1.
  std::vector<T> vector;
};

template <class T>
struct OracleBlock {
  int degree = 0;
  /// Partitions with at most N parts, decreasing lex order.
  std::vector<MomentumVector> basis;
  /// matrix[row][col]: coefficient of m_row in H m_col.
  std::vector<std::vector<T>> matrix;
  std::vector<OracleEigenpair<T>> pairs;
};

template <class T>
struct OracleResult {
  int N = 0;
  T lambda{};
  std::vector<OracleBlock<T>> blocks;
  /// Full spectrum: the triangular diagonal in exact mode, a dense
  /// eigensolver in float mode. Sorted ascending.
  std::vector<T> eigenvalues;
};

/// The Sutherland Hamiltonian conjugated by Psi0, acting on symmetric
/// monomials m_kappa(e^{ix}) with |kappa| <= degree and at most N parts.
template <class T>
OracleResult<T> oracle_diagonalize(int N, const T& lambda, int degree);

/// P(x; m) Psi0(x) at q = 0.
Complex hatF_trig(const std::vector<double>& x, const MomentumVector& m, double lambda,
                  const QuadratureSpec& quad);

/// sum_m alpha_n(m) hatF(x; m) with analytic derivatives.
Jet eigenfunction_trig(const std::vector<double>& x, const CoefficientTable<double>& table,
                       const QuadratureSpec& quad);
Jet eigenfunction_trig(const std::vector<double>& x, const MomentumVector& n, double lambda,
                       int budget, const QuadratureSpec& quad);

/// sum_m alpha_n(m) P(x; m) at q = 0, i.e. Psi/Psi0.
Complex eigenfunction_trig_ratio(const std::vector<double>& x, const CoefficientTable<double>& table,
                                 const QuadratureSpec& quad);

template <class U, class T>
CoefficientTable<U> convert_table(const CoefficientTable<T>& t) {
  CoefficientTable<U> r;
  r.base = t.base;
  r.lambda = U(to_double(t.lambda));
  r.budget = t.budget;
  for (const auto& [m, v] : t.entries) r.entries.emplace(m, U(to_double(v)));
  return r;
}

}  // namespace ecs

#endif  // ECS_TRIG_SOLVER_HPP
