// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ECS_THETA_HPP
#define ECS_THETA_HPP

#include <complex>
#include <limits>

namespace ecs {

using Complex = std::complex<double>;

/// Evaluation context for the elliptic special functions: the nome q with
/// q = exp(-beta/2), and the truncation depth of every q-product or lattice
/// sum. q == 0 is the trigonometric limit (beta = +inf, empty products).
class ThetaContext {
 public:
  static constexpr int kMaxDepth = 10000;
  static constexpr double kDefaultTol = 1e-17;

  ThetaContext() = default;

  static ThetaContext trigonometric();
  /// Depth chosen so that q^(2*m_max) < tol, capped at kMaxDepth.
  static ThetaContext from_q(double q, double tol = kDefaultTol);
  static ThetaContext from_beta(double beta, double tol = kDefaultTol);

  /// Manual override of the product depth.
  ThetaContext with_depth(int m_max) const;

  double q() const { return q_; }
  double beta() const { return beta_; }
  int m_max() const { return m_max_; }
  double tol() const { return tol_; }
  bool is_trigonometric() const { return q_ == 0.0; }

  /// Number of lattice images M on each side used by potential_elliptic so
  /// that exp(-beta*M) < tol.
  int lattice_depth() const;

 private:
  double q_ = 0.0;
  double beta_ = std::numeric_limits<double>::infinity();
  int m_max_ = 0;
  double tol_ = kDefaultTol;
};

/// sin(r/2)
double theta_trig(double r);

/// sin(r/2) * prod_{n<=m_max} (1 - 2 q^{2n} cos r + q^{4n})
double theta_elliptic(double r, const ThetaContext& ctx);

/// (1 - xi) * prod_{m<=m_max} (1 - q^{2m} xi)(1 - q^{2m}/xi). Throws a domain
/// error for xi == 0. On the unit circle Theta(e^{ir}) = -2i e^{ir/2} theta(r).
Complex big_theta(Complex xi, const ThetaContext& ctx);

/// d/dr log theta (order 1) or d^2/dr^2 log theta (order 2), summed term by
/// term: the cot part plus the derivative of each product factor.
double log_theta_derivs(double r, const ThetaContext& ctx, int order);

/// 1 / (4 sin^2(r/2))
double potential_trig(double r);

/// sum_{|m|<=M} 1/(4 sin^2((r + i beta m)/2)), real part.
double potential_elliptic(double r, const ThetaContext& ctx);

/// The same lattice sum before taking the real part; its imaginary part is a
/// round-off measure of the m <-> -m cancellation.
Complex potential_elliptic_sum(double r, const ThetaContext& ctx);

/// Logarithmic u-derivatives of Theta used by the contour kernel:
///   first  = u d/du log Theta(u)
///   second = (u d/du)^2 log Theta(u)
/// With u = e^{ix}/xi these give d/dx log Theta = i*first and
/// d^2/dx^2 log Theta = -second.
struct ThetaLogDerivs {
  Complex first;
  Complex second;
};
ThetaLogDerivs big_theta_log_derivs(Complex u, const ThetaContext& ctx);

/// Principal-branch log Theta(u) = log(1-u) + sum_m [log(1-q^{2m}u) + log(1-q^{2m}/u)].
/// Requires every |q^{2m} u|, |q^{2m}/u| and |u| below one.
Complex log_big_theta(Complex u, const ThetaContext& ctx);

/// r reduced to (-pi, pi]; used by singularity checks.
double wrap_angle(double r);

}  // namespace ecs

#endif  // ECS_THETA_HPP
