// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance harness: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ecs/correlation.hpp"
#include "ecs/elliptic_solver.hpp"
#include "ecs/error.hpp"
#include "ecs/fock.hpp"
#include "ecs/genfun.hpp"
#include "ecs/theta.hpp"
#include "ecs/trig_solver.hpp"

using namespace ecs;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// 1. Trigonometric spectrum from the brute-force diagonalization.
void trig_spectrum(Outcome& o) {
  int checked = 0;
  double worst_float = 0.0;
  for (int N : {2, 3}) {
    for (int lam : {1, 2, 3}) {
      const int degree = 8;
      std::vector<Rational> expected;
      for (int d = 0; d <= degree; ++d) {
        for (const MomentumVector& n : partitions_padded(d, N)) {
          expected.push_back(bare_energy(n, Rational(lam)));
        }
      }
      std::sort(expected.begin(), expected.end());
      const auto exact = oracle_diagonalize(N, Rational(lam), degree);
      o.require(exact.eigenvalues == expected,
                "exact spectrum N=" + std::to_string(N) + " lambda=" + std::to_string(lam));
      const auto flt = oracle_diagonalize(N, double(lam), degree);
      o.require(flt.eigenvalues.size() == expected.size(), "float spectrum size");
      for (std::size_t i = 0; i < std::min(flt.eigenvalues.size(), expected.size()); ++i) {
        const double e = expected[i].get_d();
        worst_float = std::max(worst_float, std::abs(flt.eigenvalues[i] - e) / std::max(1.0, e));
      }
      checked += static_cast<int>(expected.size());
    }
  }
  o.require(worst_float < 1e-9, "float spectrum within 1e-9");
  o.detail << checked << " eigenvalues, float max rel dev " << worst_float;
}

// 2. Recursive coefficients against the explicit path sum.
void coefficient_crosscheck(Outcome& o) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> entry(-3, 3);
  std::uniform_int_distribution<int> size(1, 3);
  std::uniform_int_distribution<int> budget(0, 4);
  const Rational lambdas[] = {Rational(1, 2), Rational(2), Rational(3), Rational(5, 2), Rational(4, 3)};
  std::size_t entries = 0;
  for (int t = 0; t < 50; ++t) {
    std::vector<int> v(size(rng));
    for (int& x : v) x = entry(rng);
    std::sort(v.rbegin(), v.rend());
    const MomentumVector n(v);
    const Rational& lam = lambdas[t % 5];
    const int b = budget(rng);
    const auto a = alpha_recursive(n, lam, b);
    const auto e = alpha_explicit(n, lam, b, b);
    o.require(a.entries == e.entries, "tables differ for n=" + n.str());
    entries += a.entries.size();
  }
  o.detail << "50 instances, " << entries << " coefficients equal";
}

// 3. Psi/Psi0 at q = 0 against the oracle eigenvector via Fourier extraction.
void jack_reduction(Outcome& o) {
  const int M = 16;
  const double d0 = 0.113, d1 = 0.271;
  const QuadratureSpec quad{32, 0};
  double worst = 0.0;
  int count = 0;
  for (int lam : {2, 3}) {
    const auto oracle = oracle_diagonalize(2, Rational(lam), 4);
    for (const auto& block : oracle.blocks) {
      for (const auto& pair : block.pairs) {
        const MomentumVector& n = pair.label;
        const auto table = convert_table<double>(alpha_recursive(n, Rational(lam), 8));
        std::vector<Complex> samples(M * M);
        for (int a = 0; a < M; ++a) {
          for (int b = 0; b < M; ++b) {
            const std::vector<double> x{2 * kPi * a / M + d0, 2 * kPi * b / M + d1};
            samples[a * M + b] = eigenfunction_trig_ratio(x, table, quad);
          }
        }
        auto coefficient = [&](int k0, int k1) {
          Complex s = 0.0;
          for (int a = 0; a < M; ++a) {
            for (int b = 0; b < M; ++b) {
              const double ph = k0 * (2 * kPi * a / M + d0) + k1 * (2 * kPi * b / M + d1);
              s += samples[a * M + b] * std::polar(1.0, -ph);
            }
          }
          return s / double(M * M);
        };
        const Complex scale = coefficient(n[0], n[1]);
        double dev = 0.0;
        for (int k0 = -M / 2 + 1; k0 < M / 2; ++k0) {
          for (int k1 = -M / 2 + 1; k1 < M / 2; ++k1) {
            double ref = 0.0;
            if (k0 + k1 == n.total()) {
              MomentumVector kappa{std::max(k0, k1), std::min(k0, k1)};
              for (std::size_t i = 0; i < block.basis.size(); ++i) {
                if (block.basis[i] == kappa) ref = pair.vector[i].get_d();
              }
            }
            dev = std::max(dev, std::abs(coefficient(k0, k1) / scale - ref));
          }
        }
        worst = std::max(worst, dev);
        ++count;
      }
    }
  }
  o.require(worst < 1e-8, "Fourier coefficients within 1e-8");
  o.detail << count << " eigenvectors, max rel dev " << worst;
}

// 4. The functional identity at random point pairs.
void functional_identity(Outcome& o) {
  std::mt19937_64 rng(4);
  double worst = 0.0;
  for (int N : {2, 3}) {
    for (double lam : {1.0, 2.0, 3.0}) {
      for (double q : {0.0, 0.2, 0.4}) {
        const ThetaContext ctx = ThetaContext::from_q(q);
        for (int t = 0; t < 100; ++t) {
          const auto pts = sample_collision_free(2 * N, rng);
          const std::vector<double> x(pts.begin(), pts.begin() + N), y(pts.begin() + N, pts.end());
          worst = std::max(worst, functional_identity_residual(x, y, lam, ctx));
        }
      }
    }
  }
  o.require(worst < 1e-7, "residual below 1e-7");
  o.detail << "1800 pairs, max residual " << worst;
}

// 5. Implicit and explicit elliptic eigenvalues.
void elliptic_eigenvalues(Outcome& o) {
  const MomentumVector ns[] = {MomentumVector{2, 0}, MomentumVector{3, 0}, MomentumVector{3, 1},
                               MomentumVector{4, 1}, MomentumVector{5, 0}};
  int count = 0;
  for (int lam : {2, 3}) {
    for (const MomentumVector& n : ns) {
      const auto a = eigenvalue_implicit(n, Rational(lam), 3);
      const auto b = eigenvalue_explicit(n, Rational(lam), 3);
      o.require(a == b, "series differ for n=" + n.str() + " lambda=" + std::to_string(lam));
      ++count;
    }
  }
  o.detail << count << " series equal through q^6";
}

// 6. Elliptic eigenfunction residuals and the non-eigenfunction Psi0.
void elliptic_residual(Outcome& o) {
  const double q = 0.2;
  const ThetaContext ctx = ThetaContext::from_q(q);
  const QuadratureSpec quad{32, 0};
  std::mt19937_64 rng(6);
  std::vector<std::vector<double>> points;
  for (int t = 0; t < 10; ++t) points.push_back(sample_collision_free(2, rng, 0.3));
  std::vector<double> by_order;
  for (int K = 1; K <= 3; ++K) {
    const auto pair = alpha_elliptic(MomentumVector{1, 0}, 2.0, K, K + 4);
    double worst = 0.0;
    for (const auto& x : points) {
      const auto ev = eigenfunction_elliptic(x, pair, q, quad);
      worst = std::max(worst, eigen_residual(ev.psi, x, 2.0, ctx, ev.energy));
    }
    by_order.push_back(worst);
  }
  o.require(by_order[2] < 1e-4, "K=3 residual below 1e-4");
  o.require(by_order[0] > by_order[1] && by_order[1] > by_order[2], "monotone in K");
  const ThetaContext ctx3 = ThetaContext::from_q(0.3);
  std::vector<Complex> local;
  for (const auto& x : points) {
    const Jet j = psi0_jet(x, 2.0, ctx3);
    local.push_back(apply_hamiltonian(j, x, 2.0, ctx3) / j.value);
  }
  Complex mean = 0.0;
  for (const Complex& e : local) mean += e;
  mean /= double(local.size());
  double psi0_res = 0.0;
  for (const Complex& e : local) psi0_res = std::max(psi0_res, std::abs(e - mean));
  o.require(psi0_res > 1e-2, "Psi0 residual above 1e-2");
  o.detail << "max residual K=1,2,3: " << by_order[0] << ", " << by_order[1] << ", " << by_order[2]
           << "; Psi0 residual at q=0.3: " << psi0_res;
}

// 7. Free coupling.
void free_collapse(Outcome& o) {
  const Rational one(1);
  const MomentumVector ns[] = {MomentumVector{0}, MomentumVector{1, 0}, MomentumVector{3, -1},
                               MomentumVector{2, 1, 0}, MomentumVector{1, 1, -2}};
  for (const MomentumVector& n : ns) {
    const Rational e0 = bare_energy(n, one);
    for (int b = 0; b <= 4; ++b) {
      const auto r = alpha_recursive(n, one, b);
      const auto e = alpha_explicit(n, one, b, b);
      o.require(r.entries.size() == 1 && r.at(n) == 1, "recursive delta " + n.str());
      o.require(e.entries.size() == 1 && e.at(n) == 1, "explicit delta " + n.str());
    }
    for (int K = 0; K <= 3; ++K) {
      const auto pair = alpha_elliptic(n, one, K, K + 3);
      o.require(pair.energy == QSeries<Rational>(K, e0), "joint energy " + n.str());
      o.require(pair.coeffs.size() == 1 && pair.coeff(n) == QSeries<Rational>(K, one),
                "joint delta " + n.str());
      o.require(eigenvalue_implicit(n, one, K) == QSeries<Rational>(K, e0), "implicit " + n.str());
      o.require(eigenvalue_explicit(n, one, K) == QSeries<Rational>(K, e0), "explicit " + n.str());
      for (const auto& g : g_helper_all(n, one, K, K)) o.require(g.is_zero(), "G_k " + n.str());
    }
  }
  o.detail << "5 momenta, budgets 0..4, orders 0..3";
}

// 8. Operator checks on truncated Fock sectors.
void fock_suite(Outcome& o) {
  double worst_genfun = 0.0;
  double worst_herm = 0.0;
  double max_comm = 0.0;
  for (double lam : {1.0, 2.0, 3.0, 0.5}) {
    const FockSector v = build_sector(0, 6);
    o.require(max_abs(op_H(v, lam).matrix.col(v.index.at({}))) < 1e-12, "H Omega = 0");
    o.require(max_abs(op_H3(v, lam).matrix.col(v.index.at({}))) < 1e-12, "H3 Omega = 0");
    for (int c = 0; c <= 3; ++c) {
      const FockSector s = build_sector(c, 6);
      const CMatrix h = op_H(s, lam).matrix;
      const CMatrix h3 = op_H3(s, lam).matrix;
      o.require(commutator_norm(op_H0(s, lam).matrix, h) == 0.0, "[H0, H] = 0");
      worst_herm = std::max({worst_herm, hermiticity_defect(s, h), hermiticity_defect(s, h3)});
      const auto ops = genfun_operators(s, lam, 3);
      worst_genfun = std::max({worst_genfun, max_abs(ops[0] - op_Q(s).matrix),
                               max_abs(ops[1] - op_H0(s, lam).matrix), max_abs(ops[2] - h),
                               max_abs(ops[3] - h3)});
      max_comm = std::max(max_comm, commutator_norm(h, h3));
    }
  }
  o.require(worst_herm < 1e-10, "Hermiticity");
  o.require(worst_genfun < 1e-10, "generating functional matches");
  for (const Rational& lam : {Rational(1), Rational(2), Rational(3), Rational(1, 2), Rational(7, 3)}) {
    o.require(first_low_order_violation(genfun_coeffs(lam, 6)) == -1, "w_s = O(a^s)");
  }
  o.detail << "hermiticity " << worst_herm << ", generating functional " << worst_genfun
           << ", [H, H3] norm (reported only) " << max_comm;
}

// 9. Special functions and q = 0 limits.
void special_functions(Outcome& o) {
  double worst = 0.0;
  for (double q : {0.05, 0.1, 0.2, 0.3, 0.5}) {
    const ThetaContext ctx = ThetaContext::from_q(q);
    for (double r = 0.1; r < 2 * kPi - 0.1; r += 0.05) {
      const double v = potential_elliptic(r, ctx);
      worst = std::max(worst, std::abs(v + log_theta_derivs(r, ctx, 2)) / std::abs(v));
    }
  }
  o.require(worst < 1e-8, "potential vs log-derivative");
  const ThetaContext zero = ThetaContext::from_q(0.0);
  for (double r = 0.1; r < 2 * kPi - 0.1; r += 0.05) {
    o.require(theta_elliptic(r, zero) == theta_trig(r), "theta at q=0");
    o.require(potential_elliptic(r, zero) == potential_trig(r), "potential at q=0");
  }
  const QuadratureSpec quad{32, 0};
  for (const MomentumVector& n : {MomentumVector{1, 0}, MomentumVector{2, 0}, MomentumVector{2, 1, 0}}) {
    const auto pair = alpha_elliptic(n, Rational(2), 2, 4);
    const auto trig = alpha_recursive(n, Rational(2), 4);
    o.require(pair.energy[0] == bare_energy(n, Rational(2)), "energy q^0");
    for (const auto& [m, s] : pair.coeffs) o.require(s[0] == trig.at(m), "coefficient q^0");
    for (const auto& [m, v] : trig.entries) o.require(pair.coeff(m)[0] == v, "coefficient q^0");
  }
  const auto pair = alpha_elliptic(MomentumVector{2, 0}, 2.0, 2, 4);
  double fdev = 0.0;
  for (const auto& x : std::vector<std::vector<double>>{{0.3, 1.7}, {2.0, -1.1}, {0.9, 2.8}}) {
    const auto ev = eigenfunction_elliptic(x, pair, 0.0, quad);
    const Jet t = eigenfunction_trig(x, MomentumVector{2, 0}, 2.0, 4, quad);
    fdev = std::max(fdev, std::abs(ev.psi.value - t.value) / std::abs(t.value));
  }
  o.require(fdev < 1e-12, "eigenfunction at q=0");
  o.detail << "potential max rel dev " << worst << ", q=0 eigenfunction dev " << fdev;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"trigonometric spectrum oracle", trig_spectrum},
      {"coefficient cross-check", coefficient_crosscheck},
      {"Jack reduction at q=0", jack_reduction},
      {"functional identity", functional_identity},
      {"elliptic eigenvalue consistency", elliptic_eigenvalues},
      {"elliptic eigenfunction residual", elliptic_residual},
      {"free coupling collapse", free_collapse},
      {"Fock operator suite", fock_suite},
      {"special-function self-consistency", special_functions},
  };
  // Optional arguments select criteria by number.
  std::vector<bool> selected(criteria.size(), argc < 2);
  for (int a = 1; a < argc; ++a) {
    const int k = std::atoi(argv[a]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "unknown criterion %s\n", argv[a]);
      return 2;
    }
    selected[k - 1] = true;
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const Error& e) {
      o.pass = false;
      o.detail << "error " << to_string(e.kind()) << ": " << e.what();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("CRITERION %zu %s: %s (%s) [%.2fs]\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), o.detail.str().c_str(), secs);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
