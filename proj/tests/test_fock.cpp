// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "ecs/error.hpp"
#include "ecs/fock.hpp"
#include "ecs/genfun.hpp"
#include "ecs/spectrum.hpp"

using namespace ecs;

namespace {

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("fock") {
  TEST_CASE("sector construction") {
    const FockSector s0 = build_sector(3, 0);
    CHECK(s0.dim() == 1);
    const FockSector s = build_sector(0, 6);
    const int p[] = {1, 1, 2, 3, 5, 7, 11};
    for (int l = 0; l <= 6; ++l) CHECK(static_cast<int>(s.level_indices(l).size()) == p[l]);
    CHECK(s.norm2[s.index.at({2, 1})] == 2.0);
    CHECK(s.norm2[s.index.at({1, 1, 1})] == 6.0);
    CHECK(s.norm2[s.index.at({2, 2})] == 8.0);
    const CMatrix g = gram(s);
    CHECK(max_abs(g - CMatrix(g.diagonal().asDiagonal())) == 0.0);
    CHECK(g.diagonal().real().minCoeff() > 0.0);
    CHECK_THROWS_AS(build_sector(0, 13), Error);
  }

  TEST_CASE("mode algebra") {
    const FockSector s = build_sector(1, 5);
    for (int m = 1; m <= 3; ++m) {
      const CMatrix c = rho_mode(s, m) * rho_mode(s, -m) - rho_mode(s, -m) * rho_mode(s, m);
      // only states that stay inside the sector after creation see the full commutator
      for (int i : s.level_indices(0)) CHECK(std::abs(c(i, i) - double(m)) < 1e-14);
      for (int l = 0; l + m <= 5; ++l) {
        for (int i : s.level_indices(l)) CHECK(std::abs(c(i, i) - double(m)) < 1e-14);
      }
    }
  }

  TEST_CASE("diagonal operators") {
    const FockSector s0 = build_sector(0, 3);
    CHECK(op_H0(s0, 2.0).matrix(s0.index.at({1}), s0.index.at({1})).real() == 1.0);
    const FockSector s1 = build_sector(1, 0);
    CHECK(op_H0(s1, 2.0).matrix(0, 0).real() == 1.0);
    const FockSector s2 = build_sector(2, 2);
    for (int i : s2.level_indices(2)) CHECK(op_H0(s2, 3.0).matrix(i, i).real() == 8.0);
    const FockSector s = build_sector(0, 3);
    const CMatrix c = op_C(s).matrix;
    CHECK(c(s.index.at({2, 1}), s.index.at({2, 1})).real() == 5.0);
    CHECK(c(s.index.at({}), s.index.at({})).real() == 0.0);
    CHECK(c(s.index.at({1, 1, 1}), s.index.at({1, 1, 1})).real() == 3.0);
    CHECK(max_abs(op_Q(build_sector(2, 3)).matrix - 2.0 * CMatrix::Identity(7, 7)) == 0.0);
  }

  TEST_CASE("cubic operator") {
    const FockSector s = build_sector(0, 4);
    const CMatrix w = op_W3(s, 2.0).matrix;
    CHECK(max_abs(w.col(s.index.at({}))) == 0.0);
    CHECK(hermiticity_defect(s, w) < 1e-12);
    const int a = s.index.at({2, 1});
    const int b = s.index.at({3});
    CHECK(std::abs(w(a, b) - 6.0) < 1e-12);
    // <a, W b> = <W a, b> with the diagonal Gram
    CHECK(std::abs(s.norm2[a] * w(a, b) - s.norm2[b] * std::conj(w(b, a))) < 1e-12);
    CHECK(off_level_norm(s, w) == 0.0);
  }

  TEST_CASE("second and third conserved operators") {
    for (double lam : {1.0, 2.0, 3.0, 0.5}) {
      const FockSector s0 = build_sector(0, 4);
      const CMatrix h = op_H(s0, lam).matrix;
      const CMatrix h3 = op_H3(s0, lam).matrix;
      CHECK(max_abs(h.col(s0.index.at({}))) < 1e-12);
      CHECK(max_abs(h3.col(s0.index.at({}))) < 1e-12);
      const FockSector s = build_sector(2, 4);
      const CMatrix hh = op_H(s, lam).matrix;
      const CMatrix hh3 = op_H3(s, lam).matrix;
      CHECK(hermiticity_defect(s, hh) < 1e-12);
      CHECK(hermiticity_defect(s, hh3) < 1e-10);
      CHECK(off_level_norm(s, hh) == 0.0);
      CHECK(off_level_norm(s, hh3) < 1e-12);
      CHECK(commutator_norm(op_H0(s, lam).matrix, hh) < 1e-12);
      CHECK(commutator_norm(op_Q(s).matrix, hh) < 1e-12);
      // reported for the record; not part of the operator contract
      MESSAGE("[H, H3] norm at lambda=" << lam << ": " << commutator_norm(hh, hh3));
    }
  }

  TEST_CASE("spectrum of the second operator") {
    for (int N : {1, 2}) {
      for (double lam : {1.0, 2.0}) {
        for (const auto& m : spectral_match(N, lam, 5)) {
          for (bool b : m.matched) CHECK(b);
          CHECK(m.unmatched.size() + m.candidates.size() == m.eigenvalues.size());
        }
      }
    }
    for (const auto& m : spectral_match(3, 3.0, 4)) {
      for (bool b : m.matched) CHECK(b);
    }
    CHECK(spectral_shift(2, 1.0) == 0.0);
    CHECK(spectral_shift(2, 2.0) == 0.0);
    const auto cal = calibrate_zero_mode(2);
    CHECK(std::abs(cal.offset) < 1e-12);
    const FockSector s = build_sector(2, 3);
    const auto e = block_eigenvalues(s, op_H(s, 3.0).matrix, 0);
    CHECK(e.size() == 1);
    CHECK(std::abs(e[0] - bare_energy(MomentumVector{0, 0}, 3.0) - spectral_shift(2, 3.0)) < 1e-10);
  }

  TEST_CASE("generating functional coefficients") {
    for (double lam : {1.0, 2.0, 0.5}) {
      const auto g = genfun_coeffs(lam, 8);
      CHECK(g.w[0] == PowerSeries<double>(g.w[0].order(), 1.0));
      CHECK(first_low_order_violation(g, 1e-12) == -1);
    }
    const auto r = genfun_coeffs(Rational(3, 2), 6);
    CHECK(first_low_order_violation(r) == -1);
  }

  TEST_CASE("generating functional reproduces the operators") {
    for (double lam : {1.0, 2.0, 3.0, 0.5}) {
      const FockSector s = build_sector(2, 4);
      const auto ops = genfun_operators(s, lam, 3);
      CHECK(max_abs(ops[0] - op_Q(s).matrix) < 1e-10);
      CHECK(max_abs(ops[1] - op_H0(s, lam).matrix) < 1e-10);
      CHECK(max_abs(ops[2] - op_H(s, lam).matrix) < 1e-10);
      CHECK(max_abs(ops[3] - op_H3(s, lam).matrix) < 1e-10);
    }
    CHECK_THROWS_AS(genfun_operators(build_sector(0, 2), 2.0, 4), Error);
  }
}
