// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#include "ecs/genfun.hpp"

#include <cmath>

#include "ecs/error.hpp"

namespace ecs {

namespace {

using Cd = std::complex<double>;
constexpr Cd kI(0.0, 1.0);

template <class T>
T factorial_t(int n) {
  T f(1);
  for (int i = 2; i <= n; ++i) f *= T(i);
  return f;
}

// tan(a/2)
template <class T>
PowerSeries<T> tan_half(int order) {
  PowerSeries<T> s(order), c(order);
  T half_pow(1);
  for (int k = 0; k <= order; ++k) {
    const T term = half_pow / factorial_t<T>(k);
    if (k % 2 == 1) {
      s[k] = (k / 2) % 2 == 0 ? term : T(-term);
    } else {
      c[k] = (k / 2) % 2 == 0 ? term : T(-term);
    }
    half_pow /= T(2);
  }
  return s * c.reciprocal();
}

// arctan(c)
template <class T>
PowerSeries<T> arctan_series(int order) {
  PowerSeries<T> s(order);
  for (int k = 1; k <= order; k += 2) s[k] = ((k / 2) % 2 == 0 ? T(1) : T(-1)) / T(k);
  return s;
}

// binom(lambda, k) for real lambda
template <class T>
T gen_binom(const T& lambda, int k) {
  T r(1);
  for (int i = 0; i < k; ++i) r = r * (lambda - T(i)) / T(i + 1);
  return r;
}

}  // namespace

template <class T>
GenfunCoeffs<T> genfun_coeffs(const T& lambda, int order) {
  if (order < 1 || order > 8) throw Error(ErrorKind::invalid_argument, "order must be in 1..8");
  if (!(lambda > T(0))) throw Error(ErrorKind::invalid_argument, "lambda must be positive");
  GenfunCoeffs<T> g;
  g.order = order;
  const PowerSeries<T> minus_t = -tan_half<T>(order);
  std::vector<PowerSeries<T>> t_pow(order + 1, PowerSeries<T>(order, T(1)));
  for (int l = 1; l <= order; ++l) t_pow[l] = t_pow[l - 1] * minus_t;

  // series in c
  const PowerSeries<T> two_atan = arctan_series<T>(order) * T(2);
  PowerSeries<T> one_plus_c2(order, T(1));
  if (order >= 2) one_plus_c2[2] = T(1);
  const PowerSeries<T> inv_1pc2 = one_plus_c2.reciprocal();

  g.v.assign(order + 1, PowerSeries<T>(order));
  for (int k = 1; k <= order; ++k) {
    const PowerSeries<T> f = two_atan.pow(k) * inv_1pc2;
    const T kfact = factorial_t<T>(k);
    for (int l = k; l <= order; ++l) {
      const T coef = gen_binom(lambda, l + 1) / lambda * f[l] / kfact;
      g.v[k] += t_pow[l] * coef;
    }
  }
  g.w.assign(order + 1, PowerSeries<T>(order));
  g.w[0][0] = T(1);
  for (int s = 1; s <= order; ++s) {
    for (int k = 0; k < s; ++k) g.w[s] -= g.v[s - k] * g.w[k];
  }

  // a/(2 lambda cos^lambda(a/2) tan(a/2)) = [ (a/2)/sin(a/2) ] cos^{1-lambda}(a/2) / lambda
  PowerSeries<T> sinc(order), cos_half(order);
  T half_pow(1);
  for (int k = 0; k <= order; ++k) {
    const T sign = (k / 2) % 2 == 0 ? T(1) : T(-1);
    if (k % 2 == 0) {
      sinc[k] = sign * half_pow / factorial_t<T>(k + 1);
      cos_half[k] = sign * half_pow / factorial_t<T>(k);
    }
    half_pow /= T(2);
  }
  PowerSeries<T> cos_pow = (cos_half.log() * (T(1) - lambda)).exp();
  g.prefactor = sinc.reciprocal() * cos_pow * (T(1) / lambda);
  return g;
}

template <class T>
int first_low_order_violation(const GenfunCoeffs<T>& g, double tol) {
  for (int s = 0; s < static_cast<int>(g.w.size()); ++s) {
    for (int k = 0; k < s && k <= g.w[s].order(); ++k) {
      if (!ScalarTraits<T>::is_zero(g.w[s][k], tol)) return s;
    }
  }
  return -1;
}

std::vector<CMatrix> genfun_operators(const FockSector& s, double lambda, int nmax) {
  if (nmax < 0 || nmax > 3) throw Error(ErrorKind::invalid_argument, "nmax must be in 0..3");
  const int O = nmax + 2;  // series order of every a-expansion below
  const int dim = s.dim();
  const int L = s.max_level;
  const double sl = std::sqrt(lambda);
  const GenfunCoeffs<double> coeffs = genfun_coeffs<double>(lambda, O);

  using MSeries = std::vector<CMatrix>;
  auto zero_series = [&]() { return MSeries(O + 1, CMatrix::Zero(dim, dim)); };
  auto mul = [&](const MSeries& a, const MSeries& b) {
    MSeries r = zero_series();
    for (int i = 0; i <= O; ++i) {
      for (int j = 0; i + j <= O; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
  };
  auto scal_mul = [&](const std::vector<Cd>& c, const MSeries& m) {
    MSeries r = zero_series();
    for (int i = 0; i <= O; ++i) {
      for (int j = 0; i + j <= O; ++j) r[i + j] += c[i] * m[j];
    }
    return r;
  };
  auto exp_series = [&](const MSeries& x) {
    MSeries r = zero_series();
    r[0] = CMatrix::Identity(dim, dim);
    MSeries term = r;
    for (int k = 1; k <= O; ++k) {
      term = mul(term, x);
      for (auto& t : term) t /= double(k);
      for (int i = 0; i <= O; ++i) r[i] += term[i];
    }
    return r;
  };
  // e^{w a} - 1
  auto expm1 = [&](Cd w) {
    std::vector<Cd> c(O + 1, 0.0);
    Cd p = 1.0;
    double f = 1.0;
    for (int k = 1; k <= O; ++k) {
      p *= w;
      f *= k;
      c[k] = p / f;
    }
    return c;
  };

  MSeries xp = zero_series(), xm = zero_series();
  for (int n = 1; n <= L; ++n) {
    const CMatrix ann = rho_mode(s, n);
    const CMatrix cre = rho_mode(s, -n);
    const std::vector<Cd> ep = expm1(kI * double(n));
    const std::vector<Cd> em = expm1(-kI * double(n));
    for (int k = 1; k <= O; ++k) {
      xp[k] += -sl * ep[k] / double(n) * ann;
      xm[k] += sl * em[k] / double(n) * cre;
    }
  }
  std::vector<Cd> zero_mode = expm1(-kI * lambda * double(s.charge) / 2.0);
  zero_mode[0] = 1.0;
  const MSeries vp = scal_mul(zero_mode, exp_series(xp));
  const MSeries vm = scal_mul(zero_mode, exp_series(xm));

  MSeries total = zero_series();
  for (int sidx = 0; sidx <= O; ++sidx) {
    // (d^s V_+)_{mu nu} = (i(|nu| - |mu|))^s (V_+)_{mu nu}
    MSeries dvp = vp;
    for (auto& m : dvp) {
      for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) m(r, c) *= std::pow(kI * double(s.level[c] - s.level[r]), sidx);
      }
    }
    MSeries wt = mul(vm, dvp);
    for (auto& m : wt) {
      for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
          if (s.level[r] != s.level[c]) m(r, c) = 0.0;
        }
      }
    }
    if (sidx == 0) wt[0] -= CMatrix::Identity(dim, dim);
    if (wt[0].cwiseAbs().maxCoeff() > 1e-12) {
      throw Error(ErrorKind::domain, "generating functional: W_s(0) does not vanish");
    }
    // i * prefactor * w_s, times W_s / a
    std::vector<Cd> scalar(O + 1, 0.0);
    for (int i = 0; i <= O; ++i) {
      for (int j = 0; i + j <= O; ++j) {
        scalar[i + j] += kI * coeffs.prefactor[i] * coeffs.w[sidx][j];
      }
    }
    MSeries shifted = zero_series();
    for (int i = 0; i < O; ++i) shifted[i] = wt[i + 1];
    const MSeries part = scal_mul(scalar, shifted);
    for (int i = 0; i <= O; ++i) total[i] += part[i];
  }
  std::vector<CMatrix> out;
  double fact = 1.0;
  Cd minus_i_pow = 1.0;
  for (int n = 0; n <= nmax; ++n) {
    if (n > 0) {
      fact *= n;
      minus_i_pow *= -kI;
    }
    out.push_back(total[n] * (fact / minus_i_pow));
  }
  return out;
}

SectorOperator genfun_operator(int n, const FockSector& s, double lambda) {
  return {genfun_operators(s, lambda, n)[n], 0};
}

template GenfunCoeffs<Rational> genfun_coeffs(const Rational&, int);
template GenfunCoeffs<double> genfun_coeffs(const double&, int);
template int first_low_order_violation(const GenfunCoeffs<Rational>&, double);
template int first_low_order_violation(const GenfunCoeffs<double>&, double);

}  // namespace ecs
