// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ecs/correlation.hpp"
#include "ecs/elliptic_solver.hpp"
#include "ecs/error.hpp"
#include "ecs/trig_solver.hpp"

using namespace ecs;

namespace {

constexpr double kPi = std::numbers::pi;
const ThetaContext kTrig = ThetaContext::trigonometric();

// psi(x) = exp(sum_j a_j sin(x_j + p_j) + b cos(x_0 - x_1)) for N = 2.
struct SmoothFunction {
  double a0, a1, p0, p1, b;

  double exponent(double x0, double x1) const {
    return a0 * std::sin(x0 + p0) + a1 * std::sin(x1 + p1) + b * std::cos(x0 - x1);
  }
  double value(double x0, double x1) const { return std::exp(exponent(x0, x1)); }

  Jet jet(double x0, double x1) const {
    Jet j(2);
    const double v = value(x0, x1);
    const double s = std::sin(x0 - x1);
    const double c = std::cos(x0 - x1);
    const double g0 = a0 * std::cos(x0 + p0) - b * s;
    const double g1 = a1 * std::cos(x1 + p1) + b * s;
    const double h0 = -a0 * std::sin(x0 + p0) - b * c;
    const double h1 = -a1 * std::sin(x1 + p1) - b * c;
    j.value = v;
    j.d1 = {g0 * v, g1 * v};
    j.d2 = {(h0 + g0 * g0) * v, (h1 + g1 * g1) * v};
    return j;
  }
};

double fd_second(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

Complex z(double x) { return std::polar(1.0, x); }

}  // namespace

TEST_SUITE("correlation") {
  TEST_CASE("two-point function") {
    for (double lam : {1.0, 2.0, 3.0}) {
      for (double q : {0.0, 0.3}) {
        const ThetaContext ctx = q == 0.0 ? kTrig : ThetaContext::from_q(q);
        const double t = theta_elliptic(0.7 - (-1.2), ctx);
        CHECK(std::abs(F_NM({0.7}, {-1.2}, lam, ctx) - std::pow(t, -lam)) < 1e-12 * std::pow(t, -lam));
      }
    }
    CHECK(std::abs(F_NM({0.3, 1.2}, {2.0, -1.0}, 0.0, kTrig) - 1.0) < 1e-15);
    const std::vector<double> x{0.3, 1.2}, y{2.0, -1.0};
    const Complex f1 = F_NM(x, y, 1.0, kTrig);
    CHECK(std::abs(F_NM(x, y, 2.0, kTrig) - f1 * f1) < 1e-12 * std::abs(f1 * f1));
    const Complex e = F_NM({0.3, 1.2, 2.5}, {}, 2.0, kTrig);
    const double t01 = theta_trig(0.3 - 1.2), t02 = theta_trig(0.3 - 2.5), t12 = theta_trig(1.2 - 2.5);
    CHECK(std::abs(e - std::pow(t01 * t02 * t12, 2.0)) < 1e-14);
    CHECK(std::abs(vev_phase({0.5, 0.1}, {0.2}, 2.0) - std::polar(1.0, 0.8)) < 1e-15);
  }

  TEST_CASE("branch policy") {
    CHECK_THROWS_AS(theta_power(-0.5, 0.5, BranchPolicy::strict), Error);
    CHECK(std::abs(theta_power(-0.5, 2.0, BranchPolicy::strict) - 0.25) < 1e-15);
    CHECK(std::abs(theta_power(-0.25, 1.5, BranchPolicy::floor_sign) + 0.125) < 1e-15);
    CHECK_THROWS_AS(F_NM({0.3}, {0.3}, 1.0, kTrig), Error);
  }

  TEST_CASE("psi0") {
    for (double x : {0.4, -2.0}) {
      const Complex p = psi0({x}, 1.5, kTrig);
      CHECK(std::abs(std::abs(p) - 1.0) < 1e-15);
      CHECK(std::abs(p - std::polar(1.0, 0.75 * x)) < 1e-15);
    }
    const ThetaContext ctx = ThetaContext::from_q(0.2);
    for (double lam : {1.0, 2.0, 3.0}) {
      const Complex a = psi0({0.3, 1.9}, lam, ctx);
      const Complex b = psi0({1.9, 0.3}, lam, ctx);
      const double sign = static_cast<int>(lam) % 2 == 0 ? 1.0 : -1.0;
      CHECK(std::abs(b - sign * a) < 1e-14);
    }
  }

  TEST_CASE("psi0 at q = 0 is the Sutherland ground state") {
    std::mt19937_64 rng(21);
    for (int N : {2, 3}) {
      for (double lam : {1.0, 2.0, 3.0}) {
        const double e0 = bare_energy(MomentumVector(std::vector<int>(N, 0)), lam);
        for (int t = 0; t < 5; ++t) {
          const auto x = sample_collision_free(N, rng, 0.3);
          const Jet j = psi0_jet(x, lam, kTrig);
          CHECK(std::abs(apply_hamiltonian(j, x, lam, kTrig) - e0 * j.value) < 1e-9 * std::abs(j.value));
          for (int k = 0; k < N; ++k) {
            auto f = [&](double s) {
              auto y = x;
              y[k] = s;
              return std::abs(psi0(y, lam, kTrig));
            };
            const double h = 1e-3;
            const double fd1 = (f(x[k] + h) - f(x[k] - h)) / (2 * h);
            const double fd2 = fd_second(f, x[k], h);
            // |psi0| derivatives from the analytic jet: psi0 = phase * |psi0| with a linear phase
            const Complex phase = j.value / std::abs(j.value);
            const double w = N * lam / 2;
            const Complex d1 = j.d1[k] / phase - Complex(0, w) * std::abs(j.value);
            const Complex d2 = j.d2[k] / phase - 2.0 * Complex(0, w) * d1 + w * w * std::abs(j.value);
            CHECK(std::abs(std::abs(d1) - std::abs(fd1)) < 1e-5 * std::max(1.0, std::abs(fd1)));
            CHECK(std::abs(d2.real() - fd2) < 1e-5 * std::max(1.0, std::abs(fd2)));
          }
        }
      }
    }
  }

  TEST_CASE("psi0 is not an eigenfunction at q > 0") {
    const ThetaContext ctx = ThetaContext::from_q(0.3);
    std::mt19937_64 rng(8);
    double worst = 0.0;
    std::vector<Complex> local;
    for (int t = 0; t < 10; ++t) {
      const auto x = sample_collision_free(2, rng, 0.3);
      const Jet j = psi0_jet(x, 2.0, ctx);
      local.push_back(apply_hamiltonian(j, x, 2.0, ctx) / j.value);
    }
    Complex mean = 0.0;
    for (const Complex& e : local) mean += e;
    mean /= static_cast<double>(local.size());
    for (const Complex& e : local) worst = std::max(worst, std::abs(e - mean));
    CHECK(worst > 1e-2);
  }

  TEST_CASE("apply_hamiltonian against finite differences") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 10; ++t) {
      const SmoothFunction f{u(rng), u(rng), 3 * u(rng), 3 * u(rng), u(rng)};
      const auto x = sample_collision_free(2, rng, 0.3);
      for (double q : {0.0, 0.25}) {
        const ThetaContext ctx = q == 0.0 ? kTrig : ThetaContext::from_q(q);
        const double lam = 2.5;
        const double h = 1e-3;
        const double lap = fd_second([&](double s) { return f.value(s, x[1]); }, x[0], h) +
                           fd_second([&](double s) { return f.value(x[0], s); }, x[1], h);
        const double ref = -lap + coupling(lam) * potential_elliptic(x[0] - x[1], ctx) * f.value(x[0], x[1]);
        const Complex got = apply_hamiltonian(f.jet(x[0], x[1]), x, lam, ctx);
        CHECK(std::abs(got - ref) < 1e-6 * std::max(1.0, std::abs(ref)));
      }
    }
  }

  TEST_CASE("plane wave with the potential switched off") {
    const std::vector<double> x{0.3, -1.4, 2.2};
    const std::vector<int> k{2, -1, 3};
    Jet j(3);
    j.value = std::polar(1.0, k[0] * x[0] + k[1] * x[1] + k[2] * x[2]);
    for (int i = 0; i < 3; ++i) {
      j.d1[i] = Complex(0, k[i]) * j.value;
      j.d2[i] = -double(k[i] * k[i]) * j.value;
    }
    CHECK(std::abs(apply_hamiltonian(j, x, 1.0, kTrig) - 14.0 * j.value) < 1e-13);
  }

  TEST_CASE("single-circle kernel is a residue") {
    const QuadratureSpec quad{32, 0};
    for (int n = -3; n <= 3; ++n) {
      const Complex p = cP_kernel({0.7}, MomentumVector{n}, 0.0, kTrig, quad);
      CHECK(std::abs(p - (n == 0 ? 1.0 : 0.0)) < 1e-14);
    }
  }

  TEST_CASE("kernel converges under doubling and is symmetric") {
    const ThetaContext ctx = ThetaContext::from_q(0.2);
    const QuadratureSpec quad{32, 0};
    std::mt19937_64 rng(4);
    for (int t = 0; t < 5; ++t) {
      const auto x = sample_collision_free(2, rng, 0.3);
      for (const MomentumVector& n : {MomentumVector{0, 0}, MomentumVector{1, 0}, MomentumVector{2, -1}}) {
        const Complex a = cP_kernel(x, n, 2.0, ctx, quad);
        const Complex b = cP_kernel(x, n, 2.0, ctx, quad.doubled());
        CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(b)));
        const Complex s = cP_kernel({x[1], x[0]}, n, 2.0, ctx, quad);
        CHECK(std::abs(a - s) < 1e-10 * std::max(1.0, std::abs(a)));
      }
      const auto y = sample_collision_free(3, rng, 0.3);
      const MomentumVector n3{1, 0, -1};
      const Complex a = cP_kernel(y, n3, 1.0, ctx, QuadratureSpec{16, 0});
      const Complex s = cP_kernel({y[2], y[0], y[1]}, n3, 1.0, ctx, QuadratureSpec{16, 0});
      CHECK(std::abs(a - s) < 1e-10 * std::max(1.0, std::abs(a)));
    }
    const auto est = cP_kernel_checked({0.1, 2.0}, MomentumVector{1, 0}, 2.0, ctx, quad);
    CHECK(est.change < 1e-10);
    CHECK(est.points_per_circle == 64);
  }

  TEST_CASE("kernel derivatives match finite differences") {
    const ThetaContext ctx = ThetaContext::from_q(0.2);
    const QuadratureSpec quad{32, 0};
    const std::vector<double> x{0.4, 2.1};
    const MomentumVector n{2, -1};
    const Jet j = cP_kernel_jets(x, {n}, 2.0, ctx, quad).front();
    for (int k = 0; k < 2; ++k) {
      auto re = [&](double s) {
        auto y = x;
        y[k] = s;
        return cP_kernel(y, n, 2.0, ctx, quad).real();
      };
      auto im = [&](double s) {
        auto y = x;
        y[k] = s;
        return cP_kernel(y, n, 2.0, ctx, quad).imag();
      };
      const double h = 1e-3;
      const Complex fd2(fd_second(re, x[k], h), fd_second(im, x[k], h));
      const Complex fd1((re(x[k] + h) - re(x[k] - h)) / (2 * h), (im(x[k] + h) - im(x[k] - h)) / (2 * h));
      CHECK(std::abs(j.d1[k] - fd1) < 1e-5 * std::max(1.0, std::abs(fd1)));
      CHECK(std::abs(j.d2[k] - fd2) < 1e-5 * std::max(1.0, std::abs(fd2)));
    }
  }

  TEST_CASE("trigonometric kernel matches the Jack eigenvector") {
    const QuadratureSpec quad{32, 0};
    const auto oracle = oracle_diagonalize(2, Rational(2), 2);
    // Jack for (2,0): m_2 + c m_11
    Rational c;
    for (const auto& b : oracle.blocks) {
      for (const auto& p : b.pairs) {
        if (p.label == MomentumVector{2, 0}) {
          for (std::size_t i = 0; i < b.basis.size(); ++i) {
            if (b.basis[i] == MomentumVector{1, 1}) c = p.vector[i];
          }
        }
      }
    }
    const auto table = convert_table<double>(alpha_recursive(MomentumVector{2, 0}, Rational(2), 4));
    std::vector<Complex> ratios;
    for (auto x : std::vector<std::vector<double>>{{0.3, 1.7}, {2.0, -1.1}, {0.9, 2.8}, {-0.4, 1.0}}) {
      const Complex jack = z(2 * x[0]) + z(2 * x[1]) + c.get_d() * z(x[0] + x[1]);
      ratios.push_back(eigenfunction_trig_ratio(x, table, quad) / jack);
    }
    for (const Complex& r : ratios) CHECK(std::abs(r - ratios.front()) < 1e-10 * std::abs(ratios.front()));
    std::vector<Complex> single;
    for (auto x : std::vector<std::vector<double>>{{0.3, 1.7}, {2.0, -1.1}}) {
      single.push_back(cP_kernel(x, MomentumVector{1, 0}, 2.0, kTrig, quad) / (z(x[0]) + z(x[1])));
    }
    CHECK(std::abs(single[0] - single[1]) < 1e-10 * std::abs(single[0]));
  }

  TEST_CASE("quadrature validation") {
    CHECK_THROWS_AS(QuadratureSpec({24, 0}).validate(kTrig, 2), Error);
    CHECK_THROWS_AS(QuadratureSpec({8, 0}).validate(kTrig, 2), Error);
    const ThetaContext ctx = ThetaContext::from_q(0.2);
    CHECK_THROWS_AS(QuadratureSpec({32, 2.0}).validate(ctx, 2), Error);
    CHECK_NOTHROW(QuadratureSpec({32, 0}).validate(ctx, 2));
    CHECK(QuadratureSpec({32, 0}).resolved_epsilon(kTrig, 3) == 1.0);
  }

  TEST_CASE("functional identity") {
    CHECK(functional_identity_residual({0.4}, {1.9}, 2.0, kTrig) < 1e-12);
    CHECK(functional_identity_residual({0.4}, {1.9}, 2.0, ThetaContext::from_q(0.3)) < 1e-12);
    std::mt19937_64 rng(77);
    for (int N : {2, 3}) {
      for (double lam : {1.0, 2.0, 3.0}) {
        for (double q : {0.0, 0.2, 0.4}) {
          const ThetaContext ctx = q == 0.0 ? kTrig : ThetaContext::from_q(q);
          for (int t = 0; t < 20; ++t) {
            const auto pts = sample_collision_free(2 * N, rng, 0.1);
            const std::vector<double> x(pts.begin(), pts.begin() + N), y(pts.begin() + N, pts.end());
            CHECK(functional_identity_residual(x, y, lam, ctx) < 1e-7);
          }
        }
      }
    }
  }

  TEST_CASE("collision handling") {
    CHECK_THROWS_AS(require_collision_free({0.1, 0.1 + 2 * kPi}), Error);
    CHECK(min_circular_separation({0.1, 6.2}) == doctest::Approx(2 * kPi - 6.1));
    std::mt19937_64 rng(1);
    for (int t = 0; t < 20; ++t) CHECK(min_circular_separation(sample_collision_free(4, rng)) >= 0.1);
  }
}
