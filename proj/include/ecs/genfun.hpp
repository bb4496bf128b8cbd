// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ECS_GENFUN_HPP
#define ECS_GENFUN_HPP

#include <vector>

#include "ecs/fock.hpp"
#include "ecs/power_series.hpp"

namespace ecs {

/// a-series of the generating functional: v_k (k >= 1; v[0] unused), the
/// recursion w_0 = 1, w_s = -sum_{k<s} v_{s-k} w_k, and the real factor
/// a/(2 lambda cos^lambda(a/2) tan(a/2)).
template <class T>
struct GenfunCoeffs {
  int order = 0;
  std::vector<PowerSeries<T>> v;
  std::vector<PowerSeries<T>> w;
  PowerSeries<T> prefactor;
};

template <class T>
GenfunCoeffs<T> genfun_coeffs(const T& lambda, int order);

/// Lowest s for which w_s has a nonzero coefficient below a^s, or -1.
template <class T>
int first_low_order_violation(const GenfunCoeffs<T>& g, double tol = 0.0);

/// H_0 .. H_nmax from the a-expansion of the assembled generating functional.
std::vector<CMatrix> genfun_operators(const FockSector& s, double lambda, int nmax);

SectorOperator genfun_operator(int n, const FockSector& s, double lambda);

}  // namespace ecs

#endif  // ECS_GENFUN_HPP
