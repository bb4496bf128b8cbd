// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#include "ecs/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ecs/error.hpp"
#include "ecs/spectrum.hpp"

namespace ecs {

namespace {

constexpr Complex kI(0.0, 1.0);

bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

bool lambda_is_integer(double lambda) { return std::floor(lambda) == lambda; }

}  // namespace

double QuadratureSpec::resolved_epsilon(const ThetaContext& ctx, int N) const {
  if (epsilon > 0.0) return epsilon;
  if (ctx.is_trigonometric()) return 1.0;
  return std::min(1.0, ctx.beta() / (N + 1));
}

void QuadratureSpec::validate(const ThetaContext& ctx, int N) const {
  if (points_per_circle < 16 || !is_power_of_two(points_per_circle)) {
    throw Error(ErrorKind::invalid_argument,
                "points per circle must be a power of two >= 16, got " +
                    std::to_string(points_per_circle));
  }
  const double eps = resolved_epsilon(ctx, N);
  if (!(eps > 0.0) || !(eps * N < ctx.beta())) {
    throw Error(ErrorKind::invalid_argument, "contour spacing must satisfy 0 < epsilon N < beta");
  }
}

Jet& Jet::operator+=(const Jet& o) {
  value += o.value;
  for (std::size_t j = 0; j < d1.size(); ++j) {
    d1[j] += o.d1[j];
    d2[j] += o.d2[j];
  }
  return *this;
}

Jet& Jet::operator*=(Complex c) {
  value *= c;
  for (std::size_t j = 0; j < d1.size(); ++j) {
    d1[j] *= c;
    d2[j] *= c;
  }
  return *this;
}

Jet jet_product(const Jet& a, const Jet& b) {
  Jet r(static_cast<int>(a.d1.size()));
  r.value = a.value * b.value;
  for (std::size_t j = 0; j < a.d1.size(); ++j) {
    r.d1[j] = a.d1[j] * b.value + a.value * b.d1[j];
    r.d2[j] = a.d2[j] * b.value + 2.0 * a.d1[j] * b.d1[j] + a.value * b.d2[j];
  }
  return r;
}

Complex theta_power(double theta, double lambda, BranchPolicy policy) {
  if (lambda_is_integer(lambda)) return std::pow(theta, static_cast<int>(lambda));
  if (theta >= 0.0) return std::pow(theta, lambda);
  if (policy == BranchPolicy::strict) {
    throw Error(ErrorKind::branch, "negative theta raised to non-integer lambda");
  }
  const double sign = static_cast<long long>(std::floor(lambda)) % 2 == 0 ? 1.0 : -1.0;
  return sign * std::pow(-theta, lambda);
}

void require_collision_free(const std::vector<double>& x) {
  if (x.size() > 1 && min_circular_separation(x) < 1e-12) {
    throw Error(ErrorKind::singularity, "coincident coordinates");
  }
}

double min_circular_separation(const std::vector<double>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      best = std::min(best, std::abs(wrap_angle(pts[i] - pts[j])));
    }
  }
  return best;
}

std::vector<double> sample_collision_free(int count, std::mt19937_64& rng, double min_sep) {
  std::uniform_real_distribution<double> dist(-std::numbers::pi, std::numbers::pi);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::vector<double> pts(count);
    for (double& p : pts) p = dist(rng);
    if (min_circular_separation(pts) >= min_sep) return pts;
  }
  throw Error(ErrorKind::invalid_argument, "could not sample collision-free points");
}

Complex F_NM(const std::vector<double>& x, const std::vector<double>& y, double lambda,
             const ThetaContext& ctx, BranchPolicy policy) {
  const std::size_t N = x.size();
  const std::size_t M = y.size();
  for (double a : x) {
    for (double b : y) {
      if (std::abs(wrap_angle(a - b)) < 1e-12) {
        throw Error(ErrorKind::singularity, "F_NM: x_j coincides with y_k");
      }
    }
  }
  Complex v = 1.0;
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t k = j + 1; k < N; ++k) {
      v *= theta_power(theta_elliptic(x[j] - x[k], ctx), lambda, policy);
    }
  }
  for (std::size_t j = 0; j < M; ++j) {
    for (std::size_t k = j + 1; k < M; ++k) {
      v *= theta_power(theta_elliptic(y[k] - y[j], ctx), lambda, policy);
    }
  }
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t k = 0; k < M; ++k) {
      v /= theta_power(theta_elliptic(x[j] - y[k], ctx), lambda, policy);
    }
  }
  return v;
}

Complex vev_phase(const std::vector<double>& x, const std::vector<double>& y, double lambda) {
  double s = 0.0;
  for (double a : x) s += a;
  for (double b : y) s += b;
  const double charge = static_cast<double>(x.size()) - static_cast<double>(y.size());
  return std::exp(kI * (0.5 * lambda * charge * s));
}

Complex psi0(const std::vector<double>& x, double lambda, const ThetaContext& ctx,
             BranchPolicy policy) {
  require_collision_free(x);
  const std::size_t N = x.size();
  double s = 0.0;
  for (double a : x) s += a;
  Complex v = std::exp(kI * (0.5 * static_cast<double>(N) * lambda * s));
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t k = j + 1; k < N; ++k) {
      v *= theta_power(theta_elliptic(x[j] - x[k], ctx), lambda, policy);
    }
  }
  return v;
}

Jet psi0_jet(const std::vector<double>& x, double lambda, const ThetaContext& ctx,
             BranchPolicy policy) {
  const int N = static_cast<int>(x.size());
  Jet jet(N);
  jet.value = psi0(x, lambda, ctx, policy);
  for (int j = 0; j < N; ++j) {
    Complex l1 = kI * (0.5 * N * lambda);
    double l2 = 0.0;
    for (int k = 0; k < N; ++k) {
      if (k == j) continue;
      l1 += lambda * log_theta_derivs(x[j] - x[k], ctx, 1);
      l2 += lambda * log_theta_derivs(x[j] - x[k], ctx, 2);
    }
    jet.d1[j] = jet.value * l1;
    jet.d2[j] = jet.value * (l1 * l1 + l2);
  }
  return jet;
}

std::vector<Jet> cP_kernel_jets(const std::vector<double>& x, const std::vector<MomentumVector>& ms,
                                double lambda, const ThetaContext& ctx,
                                const QuadratureSpec& quad) {
  const int N = static_cast<int>(x.size());
  if (N < 1 || N > 4) {
    throw Error(ErrorKind::size_overflow, "contour kernel supports 1 <= N <= 4");
  }
  for (const auto& m : ms) {
    if (m.size() != N) throw Error(ErrorKind::invalid_argument, "momentum length differs from N");
  }
  quad.validate(ctx, N);
  const int M = quad.points_per_circle;
  const double eps = quad.resolved_epsilon(ctx, N);

  // log xi_j on each circle
  std::vector<std::vector<Complex>> log_xi(N, std::vector<Complex>(M));
  for (int j = 0; j < N; ++j) {
    for (int g = 0; g < M; ++g) {
      log_xi[j][g] = Complex(eps * (j + 1), 2.0 * std::numbers::pi * g / M);
    }
  }

  // Theta(z_j/xi_k)^{-lambda} pieces, indexed [j][k][g_k].
  struct Outer {
    Complex log_theta;
    Complex first;
    Complex second;
  };
  std::vector<Outer> outer(static_cast<std::size_t>(N * N * M));
  for (int j = 0; j < N; ++j) {
    for (int k = 0; k < N; ++k) {
      for (int g = 0; g < M; ++g) {
        Complex u = std::exp(Complex(0.0, x[j]) - log_xi[k][g]);
        ThetaLogDerivs d = big_theta_log_derivs(u, ctx);
        outer[(j * N + k) * M + g] = {log_big_theta(u, ctx), d.first, d.second};
      }
    }
  }

  // lambda log Theta(xi_j/xi_k), indexed [pair][g_j][g_k].
  std::vector<Complex> inner;
  std::vector<std::pair<int, int>> pairs;
  for (int j = 0; j < N; ++j) {
    for (int k = j + 1; k < N; ++k) pairs.emplace_back(j, k);
  }
  inner.resize(pairs.size() * M * M);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto [j, k] = pairs[p];
    for (int gj = 0; gj < M; ++gj) {
      for (int gk = 0; gk < M; ++gk) {
        inner[(p * M + gj) * M + gk] =
            lambda * log_big_theta(std::exp(log_xi[j][gj] - log_xi[k][gk]), ctx);
      }
    }
  }

  // xi_j^{m_j}, indexed [m][j][g]
  std::vector<Complex> powers(ms.size() * N * M);
  for (std::size_t a = 0; a < ms.size(); ++a) {
    for (int j = 0; j < N; ++j) {
      for (int g = 0; g < M; ++g) {
        powers[(a * N + j) * M + g] = std::exp(static_cast<double>(ms[a][j]) * log_xi[j][g]);
      }
    }
  }

  std::vector<Jet> acc(ms.size(), Jet(N));
  std::vector<int> idx(N, 0);
  std::vector<Complex> A(N);
  std::vector<Complex> B(N);
  const long long total = static_cast<long long>(std::pow(M, N));
  for (long long t = 0; t < total; ++t) {
    Complex lg = 0.0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      lg += inner[(p * M + idx[pairs[p].first]) * M + idx[pairs[p].second]];
    }
    for (int j = 0; j < N; ++j) {
      A[j] = 0.0;
      B[j] = 0.0;
      for (int k = 0; k < N; ++k) {
        const Outer& o = outer[(j * N + k) * M + idx[k]];
        lg -= lambda * o.log_theta;
        A[j] -= lambda * kI * o.first;
        B[j] += lambda * o.second;
      }
    }
    const Complex w0 = std::exp(lg);
    for (std::size_t a = 0; a < ms.size(); ++a) {
      Complex w = w0;
      for (int j = 0; j < N; ++j) w *= powers[(a * N + j) * M + idx[j]];
      Jet& r = acc[a];
      r.value += w;
      for (int j = 0; j < N; ++j) {
        r.d1[j] += w * A[j];
        r.d2[j] += w * (A[j] * A[j] + B[j]);
      }
    }
    for (int j = N - 1; j >= 0; --j) {
      if (++idx[j] < M) break;
      idx[j] = 0;
    }
  }
  const double norm = 1.0 / static_cast<double>(total);
  for (Jet& r : acc) r *= norm;
  return acc;
}

Complex cP_kernel(const std::vector<double>& x, const MomentumVector& n, double lambda,
                  const ThetaContext& ctx, const QuadratureSpec& quad) {
  return cP_kernel_jets(x, {n}, lambda, ctx, quad).front().value;
}

KernelEstimate cP_kernel_checked(const std::vector<double>& x, const MomentumVector& n,
                                 double lambda, const ThetaContext& ctx,
                                 const QuadratureSpec& quad, double tol) {
  const Complex coarse = cP_kernel(x, n, lambda, ctx, quad);
  const QuadratureSpec fine_spec = quad.doubled();
  const Complex fine = cP_kernel(x, n, lambda, ctx, fine_spec);
  const double change = std::abs(fine - coarse);
  if (change > tol * std::max(1.0, std::abs(fine))) {
    throw Error(ErrorKind::convergence,
                "contour kernel not converged: |P_M - P_2M| = " + std::to_string(change));
  }
  return {fine, change, fine_spec.points_per_circle};
}

std::vector<Jet> hatF_jets(const std::vector<double>& x, const std::vector<MomentumVector>& ms,
                           double lambda, const ThetaContext& ctx, const QuadratureSpec& quad) {
  const Jet base = psi0_jet(x, lambda, ctx, BranchPolicy::floor_sign);
  std::vector<Jet> out = cP_kernel_jets(x, ms, lambda, ctx, quad);
  for (Jet& j : out) j = jet_product(j, base);
  return out;
}

Complex apply_hamiltonian(const Jet& psi, const std::vector<double>& x, double lambda,
                          const ThetaContext& ctx) {
  require_collision_free(x);
  const std::size_t N = x.size();
  Complex lap = 0.0;
  for (std::size_t j = 0; j < N; ++j) lap += psi.d2[j];
  double pot = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t k = j + 1; k < N; ++k) pot += potential_elliptic(x[j] - x[k], ctx);
  }
  return -lap + coupling(lambda) * pot * psi.value;
}

namespace {

// (H F)/F acting on u, with F = prod theta(u-u)^l / prod theta(u-v)^l.
double local_energy(const std::vector<double>& u, const std::vector<double>& v, double lambda,
                    const ThetaContext& ctx) {
  const std::size_t N = u.size();
  double e = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    double d1 = 0.0;
    double d2 = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      if (k != j) {
        d1 += lambda * log_theta_derivs(u[j] - u[k], ctx, 1);
        d2 += lambda * log_theta_derivs(u[j] - u[k], ctx, 2);
      }
      d1 -= lambda * log_theta_derivs(u[j] - v[k], ctx, 1);
      d2 -= lambda * log_theta_derivs(u[j] - v[k], ctx, 2);
    }
    e -= d2 + d1 * d1;
  }
  double pot = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t k = j + 1; k < N; ++k) pot += potential_elliptic(u[j] - u[k], ctx);
  }
  return e + coupling(lambda) * pot;
}

}  // namespace

double functional_identity_residual(const std::vector<double>& x, const std::vector<double>& y,
                                    double lambda, const ThetaContext& ctx) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::invalid_argument, "identity needs equal numbers of x and y");
  }
  std::vector<double> all = x;
  all.insert(all.end(), y.begin(), y.end());
  require_collision_free(all);
  return std::abs(local_energy(x, y, lambda, ctx) - local_energy(y, x, lambda, ctx));
}

}  // namespace ecs
