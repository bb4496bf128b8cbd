// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#include "ecs/spectrum.hpp"

#include <algorithm>
#include <numeric>

#include "ecs/error.hpp"

namespace ecs {

int MomentumVector::total() const { return std::accumulate(n.begin(), n.end(), 0); }

bool MomentumVector::admissible() const {
  for (std::size_t j = 1; j < n.size(); ++j) {
    if (n[j - 1] < n[j]) return false;
  }
  return !n.empty();
}

std::vector<int> MomentumVector::partial_sums_from(const MomentumVector& base) const {
  std::vector<int> p;
  int acc = 0;
  for (int l = 0; l + 1 < size(); ++l) {
    acc += n[l] - base.n[l];
    p.push_back(acc);
  }
  return p;
}

std::string MomentumVector::str() const {
  std::string s = "(";
  for (std::size_t j = 0; j < n.size(); ++j) {
    if (j) s += ",";
    s += std::to_string(n[j]);
  }
  return s + ")";
}

MoveVector::MoveVector(int N) : N_(N), mu_(static_cast<std::size_t>(N * N), 0) {}

int& MoveVector::operator()(int j, int k) { return mu_[j * N_ + k]; }
int MoveVector::operator()(int j, int k) const { return mu_[j * N_ + k]; }

bool MoveVector::non_negative() const {
  for (int j = 0; j < N_; ++j) {
    for (int k = j + 1; k < N_; ++k) {
      if ((*this)(j, k) < 0) return false;
    }
  }
  return true;
}

MomentumVector MoveVector::apply(const MomentumVector& n) const {
  MomentumVector m = n;
  for (int j = 0; j < N_; ++j) {
    for (int k = j + 1; k < N_; ++k) {
      m.n[j] += (*this)(j, k);
      m.n[k] -= (*this)(j, k);
    }
  }
  return m;
}

MomentumVector apply_move(const MomentumVector& n, const Move& mv) {
  MomentumVector m = n;
  m.n[mv.j] += mv.nu;
  m.n[mv.k] -= mv.nu;
  return m;
}

int raise_weight(const MomentumVector& m, const MomentumVector& base) {
  int w = 0;
  for (int p : m.partial_sums_from(base)) w += p;
  return w;
}

void require_admissible(const MomentumVector& n) {
  if (!n.admissible()) {
    throw Error(ErrorKind::admissibility,
                "momentum vector " + n.str() + " violates n_1 >= n_2 >= ... >= n_N");
  }
}

template <class T>
std::vector<T> pseudo_momenta(const MomentumVector& n, const T& lambda) {
  const int N = n.size();
  std::vector<T> out;
  out.reserve(N);
  for (int j = 1; j <= N; ++j) {
    T v = T(n[j - 1]) + lambda * T(2 * N + 1 - 2 * j) / T(2);
    out.push_back(v);
  }
  return out;
}

template <class T>
T bare_energy(const MomentumVector& n, const T& lambda) {
  T e(0);
  for (const T& p : pseudo_momenta(n, lambda)) e += p * p;
  return e;
}

template <class T>
ComShift<T> com_shift(const std::vector<T>& n_tilde, const T& p) {
  ComShift<T> r{{}, T(0)};
  for (const T& v : n_tilde) {
    T s = v - p;
    r.energy += s * s;
    r.shifted.push_back(s);
  }
  return r;
}

template <class T>
T energy_shift(const MomentumVector& n, const MoveVector& mu, const T& lambda) {
  const int N = n.size();
  T total(0);
  for (int j = 0; j < N; ++j) {
    T lin(0);
    int in = 0;
    int out = 0;
    for (int k = j + 1; k < N; ++k) {
      lin += T(mu(j, k)) * (T(n[j] - n[k]) + T(k - j) * lambda);
      out += mu(j, k);
    }
    for (int k = 0; k < j; ++k) in += mu(k, j);
    T sq(in - out);
    total += T(2) * lin + sq * sq;
  }
  return total;
}

namespace {

void partitions_rec(int left, int max_part, int parts, std::vector<int>& cur,
                    std::vector<MomentumVector>& out) {
  if (left == 0) {
    std::vector<int> v = cur;
    v.resize(parts, 0);
    out.emplace_back(std::move(v));
    return;
  }
  if (static_cast<int>(cur.size()) == parts) return;
  for (int p = std::min(left, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_rec(left - p, p, parts, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<MomentumVector> partitions_padded(int total, int parts) {
  std::vector<MomentumVector> out;
  std::vector<int> cur;
  if (total < 0 || parts < 1) return out;
  partitions_rec(total, total, parts, cur, out);
  return out;
}

template std::vector<Rational> pseudo_momenta(const MomentumVector&, const Rational&);
template std::vector<double> pseudo_momenta(const MomentumVector&, const double&);
template Rational bare_energy(const MomentumVector&, const Rational&);
template double bare_energy(const MomentumVector&, const double&);
template ComShift<Rational> com_shift(const std::vector<Rational>&, const Rational&);
template ComShift<double> com_shift(const std::vector<double>&, const double&);
template Rational energy_shift(const MomentumVector&, const MoveVector&, const Rational&);
template double energy_shift(const MomentumVector&, const MoveVector&, const double&);

}  // namespace ecs
