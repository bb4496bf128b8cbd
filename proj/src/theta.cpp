// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#include "ecs/theta.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ecs/error.hpp"

namespace ecs {

namespace {

constexpr double kCollision = 1e-12;

void check_not_lattice(double r, const char* who) {
  if (std::abs(wrap_angle(r)) < kCollision) {
    throw Error(ErrorKind::singularity,
                std::string(who) + ": argument is a multiple of 2*pi");
  }
}

int depth_for(double q, double tol) {
  if (q == 0.0) return 0;
  double m = std::ceil(std::log(tol) / (2.0 * std::log(q)));
  if (!(m >= 1.0)) m = 1.0;
  return static_cast<int>(std::min<double>(m, ThetaContext::kMaxDepth));
}

}  // namespace

double wrap_angle(double r) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::remainder(r, two_pi);
  if (w <= -std::numbers::pi) w += two_pi;
  return w;
}

ThetaContext ThetaContext::trigonometric() { return ThetaContext{}; }

ThetaContext ThetaContext::from_q(double q, double tol) {
  if (!(q >= 0.0 && q < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "nome q must lie in [0, 1)");
  }
  if (!(tol > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "tolerance must be positive");
  }
  ThetaContext ctx;
  ctx.q_ = q;
  ctx.beta_ = q == 0.0 ? std::numeric_limits<double>::infinity() : -2.0 * std::log(q);
  ctx.tol_ = tol;
  ctx.m_max_ = depth_for(q, tol);
  return ctx;
}

ThetaContext ThetaContext::from_beta(double beta, double tol) {
  if (!(beta > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "beta must be positive");
  }
  ThetaContext ctx = from_q(std::isinf(beta) ? 0.0 : std::exp(-beta / 2.0), tol);
  ctx.beta_ = beta;
  return ctx;
}

ThetaContext ThetaContext::with_depth(int m_max) const {
  if (m_max < 0 || m_max > kMaxDepth) {
    throw Error(ErrorKind::invalid_argument, "product depth out of range");
  }
  ThetaContext ctx = *this;
  ctx.m_max_ = is_trigonometric() ? 0 : m_max;
  return ctx;
}

int ThetaContext::lattice_depth() const {
  if (is_trigonometric()) return 0;
  double m = std::ceil(-std::log(tol_) / beta_) + 1.0;
  return static_cast<int>(std::min<double>(m, kMaxDepth));
}

double theta_trig(double r) { return std::sin(0.5 * r); }

double theta_elliptic(double r, const ThetaContext& ctx) {
  double value = std::sin(0.5 * r);
  const double c = std::cos(r);
  const double q2 = ctx.q() * ctx.q();
  double a = 1.0;
  for (int n = 1; n <= ctx.m_max(); ++n) {
    a *= q2;
    value *= 1.0 - 2.0 * a * c + a * a;
  }
  return value;
}

Complex big_theta(Complex xi, const ThetaContext& ctx) {
  if (xi == Complex(0.0, 0.0)) {
    throw Error(ErrorKind::domain, "big_theta: xi = 0");
  }
  Complex value = 1.0 - xi;
  const double q2 = ctx.q() * ctx.q();
  const Complex inv = 1.0 / xi;
  double a = 1.0;
  for (int m = 1; m <= ctx.m_max(); ++m) {
    a *= q2;
    value *= (1.0 - a * xi) * (1.0 - a * inv);
  }
  return value;
}

Complex log_big_theta(Complex u, const ThetaContext& ctx) {
  Complex value = std::log(1.0 - u);
  const double q2 = ctx.q() * ctx.q();
  const Complex inv = 1.0 / u;
  double a = 1.0;
  for (int m = 1; m <= ctx.m_max(); ++m) {
    a *= q2;
    value += std::log(1.0 - a * u) + std::log(1.0 - a * inv);
  }
  return value;
}

ThetaLogDerivs big_theta_log_derivs(Complex u, const ThetaContext& ctx) {
  // u d/du log(1 - w u) = -w u/(1 - w u), (u d/du)^2 = -w u/(1 - w u)^2,
  // and the 1/u factors flip sign in the first derivative only.
  auto creation = [](Complex t) {
    Complex d = 1.0 - t;
    return ThetaLogDerivs{-t / d, -t / (d * d)};
  };
  ThetaLogDerivs out = creation(u);
  const double q2 = ctx.q() * ctx.q();
  const Complex inv = 1.0 / u;
  double a = 1.0;
  for (int m = 1; m <= ctx.m_max(); ++m) {
    a *= q2;
    ThetaLogDerivs up = creation(a * u);
    ThetaLogDerivs down = creation(a * inv);
    out.first += up.first - down.first;
    out.second += up.second + down.second;
  }
  return out;
}

double log_theta_derivs(double r, const ThetaContext& ctx, int order) {
  if (order != 1 && order != 2) {
    throw Error(ErrorKind::invalid_argument, "log_theta_derivs: order must be 1 or 2");
  }
  check_not_lattice(r, "log_theta_derivs");
  const double s = std::sin(r);
  const double c = std::cos(r);
  const double q2 = ctx.q() * ctx.q();
  double value;
  if (order == 1) {
    value = 0.5 / std::tan(0.5 * r);
  } else {
    const double sh = std::sin(0.5 * r);
    value = -0.25 / (sh * sh);
  }
  double a = 1.0;
  for (int n = 1; n <= ctx.m_max(); ++n) {
    a *= q2;
    const double d = 1.0 - 2.0 * a * c + a * a;
    if (order == 1) {
      value += 2.0 * a * s / d;
    } else {
      value += (2.0 * a * c * d - 4.0 * a * a * s * s) / (d * d);
    }
  }
  return value;
}

double potential_trig(double r) {
  check_not_lattice(r, "potential_trig");
  const double s = std::sin(0.5 * r);
  return 0.25 / (s * s);
}

Complex potential_elliptic_sum(double r, const ThetaContext& ctx) {
  check_not_lattice(r, "potential_elliptic");
  if (ctx.is_trigonometric()) return potential_trig(r);
  auto term = [](Complex z) {
    Complex s = std::sin(0.5 * z);
    return 0.25 / (s * s);
  };
  Complex sum = term(Complex(r, 0.0));
  const int depth = ctx.lattice_depth();
  // Pair the +m and -m images so their imaginary parts cancel term by term.
  for (int m = 1; m <= depth; ++m) {
    const double shift = ctx.beta() * m;
    sum += term(Complex(r, shift)) + term(Complex(r, -shift));
  }
  return sum;
}

double potential_elliptic(double r, const ThetaContext& ctx) {
  return potential_elliptic_sum(r, ctx).real();
}

}  // namespace ecs
