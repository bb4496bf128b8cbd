// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ECS_ELLIPTIC_SOLVER_HPP
#define ECS_ELLIPTIC_SOLVER_HPP

#include <map>
#include <vector>

#include "ecs/correlation.hpp"
#include "ecs/power_series.hpp"
#include "ecs/spectrum.hpp"

namespace ecs {

/// A zero denominator E0(m) = E0(n), m != n, met with an exactly vanishing
/// right-hand side; the coefficient is set to zero at that order.
struct BenignResonance {
  MomentumVector m;
  int order;
};

template <class T>
struct EllipticEigenpair {
  MomentumVector n;
  T lambda{};
  int K = 0;
  int budget = 0;
  /// Lowest allowed partial sum of m - n (always -K).
  int lower = 0;
  QSeries<T> energy;
  std::map<MomentumVector, QSeries<T>> coeffs;
  std::vector<BenignResonance> benign_resonances;
  /// True when budget >= (N-1) K, which makes the energy series exact
  /// through order K.
  bool energy_exact = false;

  QSeries<T> coeff(const MomentumVector& m) const {
    auto it = coeffs.find(m);
    return it == coeffs.end() ? QSeries<T>(K) : it->second;
  }
};

/// 1/[[delta0]]: zero when m == n, the series reciprocal otherwise. A zero
/// constant term (|c0| < resonance_tol in float mode) raises a resonance error.
template <class T>
QSeries<T> regularized_reciprocal(const QSeries<T>& delta0, bool m_equals_n,
                                  double resonance_tol = 1e-12);

/// Joint order-by-order solution of
///   [E0(m) - E_n] alpha(m) = gamma sum_{j<k} sum_nu S_nu alpha(m - nu E_jk)
/// on the window P_l(m - n) >= -K, sum_l P_l <= budget.
template <class T>
EllipticEigenpair<T> alpha_elliptic(const MomentumVector& n, const T& lambda, int K, int budget);

/// The implicit loop equation for E_n, solved by fixed-point iteration.
template <class T>
QSeries<T> eigenvalue_implicit(const MomentumVector& n, const T& lambda, int K,
                               int max_iterations = 64);

/// G_0 .. G_{kmax} as q^2 series of order K.
template <class T>
std::vector<QSeries<T>> g_helper_all(const MomentumVector& n, const T& lambda, int K, int kmax);

template <class T>
QSeries<T> g_helper(int k, const MomentumVector& n, const T& lambda, int K) {
  return g_helper_all(n, lambda, K, k)[k];
}

/// E0(n) + sum_{p>=1} (-1)^p sum (p-1)!/prod k_j! prod G_j^{k_j}, with
/// sum k_j = p and sum j k_j = p - 1.
template <class T>
QSeries<T> eigenvalue_explicit(const MomentumVector& n, const T& lambda, int K);

/// Explicit path sums for alpha_n(m): every path n -> m inside the window
/// that does not revisit n, with factors gamma S_nu / (E0(m_r) - E_n).
template <class T>
std::map<MomentumVector, QSeries<T>> alpha_elliptic_paths(const MomentumVector& n,
                                                          const T& lambda, int K, int budget,
                                                          const QSeries<T>& energy);

/// Largest change of the energy or of any coefficient with raise weight at
/// most budget - (N-1) K when the budget is raised by 2 (float evaluation at
/// q). Coefficients closer to the window edge are fed by states outside it.
double budget_stability(const MomentumVector& n, double lambda, int K, int budget, double q);

struct EllipticEvaluation {
  Jet psi;
  double energy = 0.0;
  /// max |c_K q^{2K}| over the energy and every coefficient series.
  double tail_proxy = 0.0;
};

double tail_proxy(const EllipticEigenpair<double>& pair, double q);

/// sum_m alpha_n(m)(q) P(x; m) Psi0(x) with analytic derivatives. Throws a
/// convergence error when the tail proxy exceeds tail_tol.
EllipticEvaluation eigenfunction_elliptic(const std::vector<double>& x,
                                          const EllipticEigenpair<double>& pair, double q,
                                          const QuadratureSpec& quad, double tail_tol = 1.0);

/// |H psi - E psi| / |psi|
double eigen_residual(const Jet& psi, const std::vector<double>& x, double lambda,
                      const ThetaContext& ctx, double energy);

}  // namespace ecs

#endif  // ECS_ELLIPTIC_SOLVER_HPP
