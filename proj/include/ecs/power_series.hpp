// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ECS_POWER_SERIES_HPP
#define ECS_POWER_SERIES_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <initializer_list>
#include <vector>

#include "ecs/error.hpp"
#include "ecs/scalar.hpp"

namespace ecs {

/// Truncated power series c_0 + c_1 t + ... + c_K t^K. Used with t = q^2 for
/// the elliptic solver (QSeries) and with t = a for the generating functional.
/// Every value records its order K; arithmetic between different K is
/// rejected.
template <class T>
class PowerSeries {
 public:
  PowerSeries() : coeffs_(1, T(0)) {}
  explicit PowerSeries(int order) : coeffs_(check_order(order) + 1, T(0)) {}
  PowerSeries(int order, const T& constant) : PowerSeries(order) { coeffs_[0] = constant; }
  PowerSeries(int order, std::vector<T> coeffs) : PowerSeries(order) {
    for (std::size_t i = 0; i < coeffs.size() && i < coeffs_.size(); ++i) coeffs_[i] = coeffs[i];
  }
  PowerSeries(int order, std::initializer_list<T> coeffs)
      : PowerSeries(order, std::vector<T>(coeffs)) {}

  static PowerSeries monomial(int order, int power, const T& c = T(1)) {
    PowerSeries s(order);
    if (power >= 0 && power <= order) s.coeffs_[power] = c;
    return s;
  }

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const T& operator[](int k) const { return coeffs_[k]; }
  T& operator[](int k) { return coeffs_[k]; }
  const std::vector<T>& coeffs() const { return coeffs_; }
  /// Coefficient or zero beyond the truncation.
  T coeff(int k) const { return k >= 0 && k <= order() ? coeffs_[k] : T(0); }

  bool is_zero() const {
    for (const T& c : coeffs_) {
      if (c != T(0)) return false;
    }
    return true;
  }
  /// Lowest k with a nonzero coefficient, or order()+1 for the zero series.
  int valuation() const {
    for (int k = 0; k <= order(); ++k) {
      if (coeffs_[k] != T(0)) return k;
    }
    return order() + 1;
  }

  PowerSeries& operator+=(const PowerSeries& o) {
    same_order(o);
    for (int k = 0; k <= order(); ++k) coeffs_[k] += o.coeffs_[k];
    return *this;
  }
  PowerSeries& operator-=(const PowerSeries& o) {
    same_order(o);
    for (int k = 0; k <= order(); ++k) coeffs_[k] -= o.coeffs_[k];
    return *this;
  }
  PowerSeries& operator*=(const T& c) {
    for (T& x : coeffs_) x *= c;
    return *this;
  }
  PowerSeries& operator*=(const PowerSeries& o) { return *this = *this * o; }

  friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
  friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }
  friend PowerSeries operator-(PowerSeries a) {
    for (T& x : a.coeffs_) x = -x;
    return a;
  }
  friend PowerSeries operator*(PowerSeries a, const T& c) { return a *= c; }
  friend PowerSeries operator*(const T& c, PowerSeries a) { return a *= c; }
  friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
    a.same_order(b);
    PowerSeries r(a.order());
    const int K = a.order();
    const int va = a.valuation();
    const int vb = b.valuation();
    for (int i = va; i <= K; ++i) {
      if (a.coeffs_[i] == T(0)) continue;
      for (int j = vb; i + j <= K; ++j) r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return r;
  }
  friend PowerSeries operator/(const PowerSeries& a, const PowerSeries& b) {
    return a * b.reciprocal();
  }
  friend bool operator==(const PowerSeries& a, const PowerSeries& b) {
    return a.coeffs_ == b.coeffs_;
  }

  /// 1/this; requires a nonzero constant term.
  PowerSeries reciprocal() const {
    if (coeffs_[0] == T(0)) {
      throw Error(ErrorKind::domain, "reciprocal of a series with zero constant term");
    }
    PowerSeries r(order());
    T inv = T(1) / coeffs_[0];
    r.coeffs_[0] = inv;
    for (int k = 1; k <= order(); ++k) {
      T acc(0);
      for (int i = 1; i <= k; ++i) acc += coeffs_[i] * r.coeffs_[k - i];
      r.coeffs_[k] = -acc * inv;
    }
    return r;
  }

  /// exp of a series with zero constant term.
  PowerSeries exp() const {
    if (coeffs_[0] != T(0)) throw Error(ErrorKind::domain, "exp needs a zero constant term");
    // f = exp(g): k f_k = sum_{i=1..k} i g_i f_{k-i}
    PowerSeries r(order());
    r.coeffs_[0] = T(1);
    for (int k = 1; k <= order(); ++k) {
      T acc(0);
      for (int i = 1; i <= k; ++i) acc += T(i) * coeffs_[i] * r.coeffs_[k - i];
      r.coeffs_[k] = acc / T(k);
    }
    return r;
  }

  /// log of a series with constant term 1.
  PowerSeries log() const {
    if (coeffs_[0] != T(1)) throw Error(ErrorKind::domain, "log needs constant term 1");
    PowerSeries r(order());
    for (int k = 1; k <= order(); ++k) {
      T acc = T(k) * coeffs_[k];
      for (int i = 1; i < k; ++i) acc -= T(i) * r.coeffs_[i] * coeffs_[k - i];
      r.coeffs_[k] = acc / T(k);
    }
    return r;
  }

  PowerSeries pow(int p) const {
    PowerSeries r(order(), T(1));
    for (int i = 0; i < p; ++i) r *= *this;
    return r;
  }

  /// Horner evaluation at t.
  double evaluate(double t) const {
    double v = 0.0;
    for (int k = order(); k >= 0; --k) v = v * t + to_double(coeffs_[k]);
    return v;
  }
  /// |c_K t^K|, the tail proxy used when a series is summed at a fixed t.
  double last_term(double t) const {
    return std::abs(to_double(coeffs_[order()]) * std::pow(t, order()));
  }

  PowerSeries truncated(int new_order) const {
    PowerSeries r(new_order);
    for (int k = 0; k <= new_order && k <= order(); ++k) r.coeffs_[k] = coeffs_[k];
    return r;
  }

 private:
  static int check_order(int order) {
    if (order < 0) throw Error(ErrorKind::invalid_argument, "negative series order");
    return order;
  }
  void same_order(const PowerSeries& o) const {
    if (o.order() != order()) {
      throw Error(ErrorKind::mixed_order, "series of order " + std::to_string(order()) +
                                              " combined with order " + std::to_string(o.order()));
    }
  }

  std::vector<T> coeffs_;
};

template <class T>
using QSeries = PowerSeries<T>;

/// S_nu as a series in q^2 of order K: nu/(1-q^{2nu}) for nu > 0,
/// |nu| q^{2|nu|}/(1-q^{2|nu|}) for nu < 0, and 0 for nu = 0.
template <class T>
QSeries<T> S_coeff(int nu, int K) {
  QSeries<T> s(K);
  if (nu == 0) return s;
  const int a = nu > 0 ? nu : -nu;
  for (int k = nu > 0 ? 0 : a; k <= K; k += a) s[k] = T(a);
  return s;
}

}  // namespace ecs

#endif  // ECS_POWER_SERIES_HPP
