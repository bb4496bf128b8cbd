// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "doctest.h"
#include "ecs/error.hpp"
#include "ecs/power_series.hpp"

using namespace ecs;

using RS = QSeries<Rational>;

TEST_SUITE("qseries") {
  TEST_CASE("ring examples") {
    const RS a(4, {1, 1});
    const RS b(4, {1, -1});
    CHECK(a * b == RS(4, {1, 0, -1}));
    CHECK(RS(3, {1, -1}).reciprocal() == RS(3, {1, 1, 1, 1}));
    CHECK(a / a == RS(4, Rational(1)));
    CHECK_THROWS_AS(RS(3, {0, 1}).reciprocal(), Error);
  }

  TEST_CASE("random ring axioms hold exactly") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(-9, 9);
    auto random_series = [&](bool unit) {
      RS s(8);
      for (int k = 0; k <= 8; ++k) {
        s[k] = Rational(d(rng), 1 + std::abs(d(rng)));
        s[k].canonicalize();
      }
      if (unit && s[0] == 0) s[0] = 1;
      return s;
    };
    for (int t = 0; t < 20; ++t) {
      const RS a = random_series(true), b = random_series(false), c = random_series(false);
      CHECK(a * a.reciprocal() == RS(8, Rational(1)));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK((a - b) + b == a);
    }
  }

  TEST_CASE("mixed orders are rejected") {
    try {
      (void)(RS(2) + RS(3));
      FAIL("expected mixed-order error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::mixed_order);
    }
    CHECK_THROWS_AS((void)(RS(2) * RS(3)), Error);
  }

  TEST_CASE("exp and log are inverse") {
    const RS g(6, {0, Rational(1, 2), Rational(-3), Rational(2, 7)});
    CHECK(g.exp().log() == g);
    CHECK(RS(6, {0, 1}).exp()[3] == Rational(1, 6));
  }

  TEST_CASE("S coefficients") {
    CHECK(S_coeff<Rational>(0, 4).is_zero());
    CHECK(S_coeff<Rational>(1, 2) == RS(2, {1, 1, 1}));
    CHECK(S_coeff<Rational>(-1, 2) == RS(2, {0, 1, 1}));
    for (int K : {0, 1, 3, 7}) {
      for (int nu = 1; nu <= 5; ++nu) {
        CHECK(S_coeff<Rational>(nu, K) - S_coeff<Rational>(-nu, K) == RS(K, Rational(nu)));
        CHECK(S_coeff<Rational>(nu, K)[0] == nu);
        CHECK(S_coeff<Rational>(-nu, K)[0] == 0);
        CHECK(S_coeff<Rational>(-nu, K).valuation() >= std::min(nu, K + 1));
      }
    }
  }

  TEST_CASE("evaluation and tail proxy") {
    const QSeries<double> s(3, {1.0, 2.0, 3.0, 4.0});
    CHECK(s.evaluate(0.5) == doctest::Approx(1 + 1 + 0.75 + 0.5));
    CHECK(s.last_term(0.5) == doctest::Approx(0.5));
  }

  TEST_CASE("float and rational modes agree") {
    RS a(8), b(8);
    QSeries<double> af(8), bf(8);
    for (int k = 0; k <= 8; ++k) {
      a[k] = Rational(k + 1, k + 3);
      b[k] = Rational(2 * k - 5, 7);
      af[k] = a[k].get_d();
      bf[k] = b[k].get_d();
    }
    const RS r = a / b;
    const QSeries<double> rf = af / bf;
    for (int k = 0; k <= 8; ++k) CHECK(std::abs(r[k].get_d() - rf[k]) < 1e-10 * std::max(1.0, std::abs(rf[k])));
  }
}
