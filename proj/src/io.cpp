// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#include "ecs/io.hpp"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ecs/error.hpp"
#include "ecs/scalar.hpp"

namespace ecs {

namespace {

bool is_signed_integer(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

bool looks_rational(std::string_view text) {
  text = trim(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return is_signed_integer(text);
  std::string_view den = text.substr(slash + 1);
  return is_signed_integer(text.substr(0, slash)) && !den.empty() &&
         std::isdigit(static_cast<unsigned char>(den.front())) && is_signed_integer(den);
}

Rational parse_rational(std::string_view text) {
  text = trim(text);
  if (!looks_rational(text)) {
    throw Error(ErrorKind::invalid_argument, "not a rational number: " + std::string(text));
  }
  std::string s(text);
  if (s.front() == '+') s.erase(0, 1);
  Rational r;
  if (r.set_str(s, 10) != 0) {
    throw Error(ErrorKind::invalid_argument, "not a rational number: " + s);
  }
  if (r.get_den() == 0) throw Error(ErrorKind::invalid_argument, "zero denominator");
  r.canonicalize();
  return r;
}

Json scalar_json(const Rational& x) {
  if (x.get_den() == 1 && x.get_num().fits_slong_p()) return Json(x.get_num().get_si());
  return x.get_str();
}

double json_to_double(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_rational(j.get<std::string>()).get_d();
  throw Error(ErrorKind::invalid_argument, "expected a number or a rational string");
}

Rational json_to_rational(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw Error(ErrorKind::invalid_argument, "expected an integer or a rational string");
}

Json complex_json(std::complex<double> z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json momentum_json(const MomentumVector& m) { return Json(m.n); }

MomentumVector parse_momentum(std::string_view text) {
  std::vector<int> v;
  std::string_view rest = trim(text);
  if (rest.empty()) throw Error(ErrorKind::invalid_argument, "empty momentum vector");
  while (true) {
    const auto comma = rest.find(',');
    std::string_view item = trim(rest.substr(0, comma));
    if (!is_signed_integer(item)) {
      throw Error(ErrorKind::invalid_argument, "bad momentum entry: " + std::string(item));
    }
    v.push_back(std::stoi(std::string(item)));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return MomentumVector(std::move(v));
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::invalid_argument, "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error(ErrorKind::invalid_argument, "write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace ecs
