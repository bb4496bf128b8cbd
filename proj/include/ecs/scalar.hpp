// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ECS_SCALAR_HPP
#define ECS_SCALAR_HPP

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>

#include "ecs/error.hpp"

namespace ecs {

/// Exact rational scalar. Every solver is instantiated for Rational and double.
using Rational = mpq_class;

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static double to_double(const Rational& x) { return x.get_d(); }
  /// "p/q", or "p" for integers.
  static std::string to_string(const Rational& x) { return x.get_str(); }
  static bool is_zero(const Rational& x, double /*tol*/) { return sgn(x) == 0; }
  static Rational abs(const Rational& x) { return ::abs(x); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double to_double(double x) { return x; }
  /// Shortest decimal that round-trips.
  static std::string to_string(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
  }
  static bool is_zero(double x, double tol) { return std::abs(x) <= tol; }
  static double abs(double x) { return std::abs(x); }
};

template <class T>
double to_double(const T& x) {
  return ScalarTraits<T>::to_double(x);
}

template <class T>
std::string scalar_to_string(const T& x) {
  return ScalarTraits<T>::to_string(x);
}

/// Parses "p", "-p" or "p/q" into a canonical rational.
Rational parse_rational(std::string_view text);

/// True when `text` is an integer or a p/q fraction (no decimal point or
/// exponent), i.e. when the CLI should run in exact mode.
bool looks_rational(std::string_view text);

inline bool is_integer(double x) { return std::floor(x) == x; }

}  // namespace ecs

#endif  // ECS_SCALAR_HPP
