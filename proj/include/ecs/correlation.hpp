// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ECS_CORRELATION_HPP
#define ECS_CORRELATION_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "ecs/spectrum.hpp"
#include "ecs/theta.hpp"

namespace ecs {

/// Trapezoidal rule on N nested circles |xi_j| = e^{epsilon (j+1)}.
struct QuadratureSpec {
  int points_per_circle = 32;
  /// 0 selects min(1, beta/(N+1)).
  double epsilon = 0.0;

  double resolved_epsilon(const ThetaContext& ctx, int N) const;
  /// Throws invalid_argument unless M >= 16 is a power of two and
  /// 0 < epsilon N < beta.
  void validate(const ThetaContext& ctx, int N) const;
  QuadratureSpec doubled() const { return {points_per_circle * 2, epsilon}; }
};

/// How a real theta^lambda is formed for non-integer lambda when theta < 0.
enum class BranchPolicy {
  strict,      ///< branch error
  floor_sign,  ///< sign^floor(lambda) |theta|^lambda
};

/// Value with analytic first and diagonal second partial derivatives.
struct Jet {
  Complex value{};
  std::vector<Complex> d1;
  std::vector<Complex> d2;

  explicit Jet(int N = 0) : d1(N), d2(N) {}
  Jet& operator+=(const Jet& o);
  Jet& operator*=(Complex c);
};

/// Product rule for value, d/dx_j and d^2/dx_j^2.
Jet jet_product(const Jet& a, const Jet& b);

Complex theta_power(double theta, double lambda, BranchPolicy policy);

/// prod_{j<k} theta(x_j-x_k)^l prod_{j<k} theta(y_k-y_j)^l / prod_{j,k} theta(x_j-y_k)^l
Complex F_NM(const std::vector<double>& x, const std::vector<double>& y, double lambda,
             const ThetaContext& ctx, BranchPolicy policy = BranchPolicy::strict);

/// e^{i lambda (N-M)(X+Y)/2} with X, Y the coordinate sums; kept apart from F_NM.
Complex vev_phase(const std::vector<double>& x, const std::vector<double>& y, double lambda);

/// e^{i N lambda sum x/2} prod_{j<k} theta(x_j-x_k)^lambda
Complex psi0(const std::vector<double>& x, double lambda, const ThetaContext& ctx,
             BranchPolicy policy = BranchPolicy::strict);
Jet psi0_jet(const std::vector<double>& x, double lambda, const ThetaContext& ctx,
             BranchPolicy policy = BranchPolicy::strict);

/// Nested contour integral P(x; n), averaged over the trapezoid grid.
Complex cP_kernel(const std::vector<double>& x, const MomentumVector& n, double lambda,
                  const ThetaContext& ctx, const QuadratureSpec& quad);

/// P(x; m) with x-derivatives for every m in `ms`, sharing one grid pass.
std::vector<Jet> cP_kernel_jets(const std::vector<double>& x, const std::vector<MomentumVector>& ms,
                                double lambda, const ThetaContext& ctx,
                                const QuadratureSpec& quad);

struct KernelEstimate {
  Complex value;
  /// |P_M - P_2M|
  double change;
  int points_per_circle;
};

/// Evaluates at M and 2M and throws a convergence error if they differ by
/// more than tol (relative to max(1, |P|)). Returns the 2M value.
KernelEstimate cP_kernel_checked(const std::vector<double>& x, const MomentumVector& n,
                                 double lambda, const ThetaContext& ctx,
                                 const QuadratureSpec& quad, double tol = 1e-10);

/// P(x; m) Psi0(x) with derivatives.
std::vector<Jet> hatF_jets(const std::vector<double>& x, const std::vector<MomentumVector>& ms,
                           double lambda, const ThetaContext& ctx, const QuadratureSpec& quad);

/// (-sum_j d_j^2 + gamma sum_{j<k} V(x_j - x_k)) psi at x.
Complex apply_hamiltonian(const Jet& psi, const std::vector<double>& x, double lambda,
                          const ThetaContext& ctx);

/// |e(x;y) - e(y;x)| where e = (H F)/F with F = F_{N,N}, computed from
/// log-derivatives of theta.
double functional_identity_residual(const std::vector<double>& x, const std::vector<double>& y,
                                    double lambda, const ThetaContext& ctx);

/// Minimal circular distance between any two of the values.
double min_circular_separation(const std::vector<double>& pts);

/// `count` uniform angles in (-pi, pi] with pairwise circular distance >= min_sep.
std::vector<double> sample_collision_free(int count, std::mt19937_64& rng, double min_sep = 0.1);

/// Singularity error if two coordinates coincide mod 2 pi.
void require_collision_free(const std::vector<double>& x);

}  // namespace ecs

#endif  // ECS_CORRELATION_HPP
