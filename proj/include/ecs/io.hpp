// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ECS_IO_HPP
#define ECS_IO_HPP

#include <complex>
#include <string>
#include <string_view>

#include "ecs/power_series.hpp"
#include "ecs/spectrum.hpp"
#include "json.hpp"

namespace ecs {

using Json = nlohmann::json;

/// Integral rationals become JSON integers, other rationals "p/q" strings;
/// doubles stay numbers.
Json scalar_json(const Rational& x);
inline Json scalar_json(double x) { return x; }
Json complex_json(std::complex<double> z);

template <class T>
Json series_json(const PowerSeries<T>& s) {
  Json coeffs = Json::array();
  for (const T& c : s.coeffs()) coeffs.push_back(scalar_json(c));
  return Json{{"order", s.order()}, {"coeffs", coeffs}};
}

Json momentum_json(const MomentumVector& m);

/// Inverse of scalar_json for either representation.
double json_to_double(const Json& j);
Rational json_to_rational(const Json& j);

/// "1,0,-2" -> (1, 0, -2)
MomentumVector parse_momentum(std::string_view text);

/// Writes to a temporary file in the same directory and renames it over path.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace ecs

#endif  // ECS_IO_HPP
