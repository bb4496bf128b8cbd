// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ECS_SPECTRUM_HPP
#define ECS_SPECTRUM_HPP

#include <compare>
#include <string>
#include <vector>

#include "ecs/scalar.hpp"

namespace ecs {

/// Integer N-vector of Fourier quantum numbers labelling an eigenstate.
struct MomentumVector {
  std::vector<int> n;

  MomentumVector() = default;
  explicit MomentumVector(std::vector<int> v) : n(std::move(v)) {}
  MomentumVector(std::initializer_list<int> v) : n(v) {}

  int size() const { return static_cast<int>(n.size()); }
  int operator[](int j) const { return n[j]; }
  int& operator[](int j) { return n[j]; }
  int total() const;
  /// n_1 >= n_2 >= ... >= n_N
  bool admissible() const;
  /// Partial sums P_l = sum_{i<=l} (n - base)_i for l = 1..N-1.
  std::vector<int> partial_sums_from(const MomentumVector& base) const;
  std::string str() const;

  auto operator<=>(const MomentumVector&) const = default;
};

/// Single move nu * E_jk with (E_jk)_l = delta_jl - delta_kl, 0-based j < k.
struct Move {
  int j;
  int k;
  int nu;
};

/// Non-negative pair amplitudes mu_jk, j < k; m - n = sum mu_jk E_jk.
class MoveVector {
 public:
  explicit MoveVector(int N);
  int N() const { return N_; }
  int& operator()(int j, int k);
  int operator()(int j, int k) const;
  bool non_negative() const;
  /// n + sum mu_jk E_jk
  MomentumVector apply(const MomentumVector& n) const;

 private:
  int N_;
  std::vector<int> mu_;
};

MomentumVector apply_move(const MomentumVector& n, const Move& mv);

/// Total raise of m over base: sum of the partial sums P_l. A move nu E_jk
/// contributes nu (k - j).
int raise_weight(const MomentumVector& m, const MomentumVector& base);

/// Throws ErrorKind::admissibility unless n is weakly decreasing.
void require_admissible(const MomentumVector& n);

/// n_j + lambda (2N + 1 - 2j)/2, j = 1..N
template <class T>
std::vector<T> pseudo_momenta(const MomentumVector& n, const T& lambda);

/// sum_j ntilde_j^2
template <class T>
T bare_energy(const MomentumVector& n, const T& lambda);

template <class T>
struct ComShift {
  std::vector<T> shifted;
  T energy;
};

/// ntilde_j - p and the sum of their squares. p = N lambda/2 gives the
/// centred convention of the older literature.
template <class T>
ComShift<T> com_shift(const std::vector<T>& n_tilde, const T& p);

/// E0(n + mu) - E0(n) from the closed formula
///   sum_j ( 2 sum_{k>j} mu_jk [n_j - n_k + (k-j) lambda]
///           + [sum_{k<j} mu_kj - sum_{k>j} mu_jk]^2 ).
template <class T>
T energy_shift(const MomentumVector& n, const MoveVector& mu, const T& lambda);

/// gamma = 2 lambda (lambda - 1)
template <class T>
T coupling(const T& lambda) {
  return T(2) * lambda * (lambda - T(1));
}

/// Partitions of `total` with at most `parts` parts, padded with zeros to
/// length `parts`, in decreasing lex order.
std::vector<MomentumVector> partitions_padded(int total, int parts);

}  // namespace ecs

#endif  // ECS_SPECTRUM_HPP
