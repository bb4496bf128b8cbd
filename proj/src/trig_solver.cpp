// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#include "ecs/trig_solver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <string>

#include "ecs/error.hpp"

namespace ecs {

namespace {

void window_rec(int l, int N, int lower, int room, std::vector<int>& P,
                std::vector<std::vector<int>>& out) {
  if (l == N - 1) {
    out.push_back(P);
    return;
  }
  const int remaining = N - 2 - l;
  for (int p = lower; p + remaining * lower <= room; ++p) {
    P[l] = p;
    window_rec(l + 1, N, lower, room - p, P, out);
  }
}

MomentumVector from_partials(const MomentumVector& n, const std::vector<int>& P) {
  MomentumVector m = n;
  int prev = 0;
  for (int l = 0; l < n.size(); ++l) {
    const int cur = l + 1 < n.size() ? P[l] : 0;
    m[l] += cur - prev;
    prev = cur;
  }
  return m;
}

template <class T>
void require_lambda(const T& lambda) {
  if (!(lambda > T(0))) throw Error(ErrorKind::invalid_argument, "lambda must be positive");
}

template <class T>
bool near_zero(const T& x) {
  return ScalarTraits<T>::is_zero(x, 1e-12);
}

}  // namespace

std::vector<MomentumVector> raise_window(const MomentumVector& n, int lower, int budget) {
  const int N = n.size();
  std::vector<std::vector<int>> partials;
  std::vector<int> P(std::max(N - 1, 0), 0);
  if (N == 1) {
    partials.push_back({});
  } else if (budget >= lower * (N - 1)) {
    window_rec(0, N, lower, budget, P, partials);
  }
  std::vector<std::pair<int, MomentumVector>> tagged;
  for (const auto& p : partials) {
    int w = 0;
    for (int v : p) w += v;
    tagged.emplace_back(w, from_partials(n, p));
  }
  std::sort(tagged.begin(), tagged.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  });
  std::vector<MomentumVector> out;
  for (auto& t : tagged) out.push_back(std::move(t.second));
  return out;
}

template <class T>
CoefficientTable<T> alpha_recursive(const MomentumVector& n, const T& lambda, int budget) {
  require_admissible(n);
  require_lambda(lambda);
  if (budget < 0) throw Error(ErrorKind::invalid_argument, "budget must be non-negative");
  const int N = n.size();
  const T gamma = coupling(lambda);
  const T e0 = bare_energy(n, lambda);
  CoefficientTable<T> table{n, lambda, budget, {}};
  table.entries[n] = T(1);
  if (gamma == T(0)) return table;
  for (const MomentumVector& m : raise_window(n, 0, budget)) {
    if (m == n) continue;
    const std::vector<int> P = m.partial_sums_from(n);
    T rhs(0);
    for (int j = 0; j < N; ++j) {
      for (int k = j + 1; k < N; ++k) {
        int room = P[j];
        for (int l = j; l < k; ++l) room = std::min(room, P[l]);
        for (int nu = 1; nu <= room; ++nu) {
          auto it = table.entries.find(apply_move(m, {j, k, -nu}));
          if (it != table.entries.end()) rhs += T(nu) * it->second;
        }
      }
    }
    const T d = bare_energy(m, lambda) - e0;
    if (near_zero(d)) {
      throw Error(ErrorKind::resonance,
                  "zero denominator at " + m.str() + " for admissible " + n.str());
    }
    T value = gamma * rhs / d;
    if (value != T(0)) table.entries[m] = value;
  }
  return table;
}

template <class T>
CoefficientTable<T> alpha_explicit(const MomentumVector& n, const T& lambda, int s_max,
                                   int budget) {
  require_admissible(n);
  require_lambda(lambda);
  const int N = n.size();
  const T gamma = coupling(lambda);
  const T e0 = bare_energy(n, lambda);
  CoefficientTable<T> table{n, lambda, budget, {}};
  table.entries[n] = T(1);
  if (gamma == T(0)) return table;

  // Depth-first over raising paths; `weight` is the raise spent so far.
  auto dfs = [&](auto&& self, const MomentumVector& m, int weight, int steps,
                 const T& amp) -> void {
    if (steps == s_max) return;
    for (int j = 0; j < N; ++j) {
      for (int k = j + 1; k < N; ++k) {
        for (int nu = 1; weight + nu * (k - j) <= budget; ++nu) {
          MomentumVector next = apply_move(m, {j, k, nu});
          const T d = bare_energy(next, lambda) - e0;
          if (near_zero(d)) {
            throw Error(ErrorKind::resonance, "zero denominator at " + next.str());
          }
          T a = amp * gamma * T(nu) / d;
          table.entries[next] += a;
          self(self, next, weight + nu * (k - j), steps + 1, a);
        }
      }
    }
  };
  dfs(dfs, n, 0, 0, T(1));
  for (auto it = table.entries.begin(); it != table.entries.end();) {
    it = it->second == T(0) ? table.entries.erase(it) : std::next(it);
  }
  return table;
}

namespace {

// Distinct permutations of kappa.
std::vector<std::vector<int>> distinct_permutations(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  std::vector<std::vector<int>> out;
  do {
    out.push_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

bool non_increasing(const std::vector<int>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i - 1] < v[i]) return false;
  }
  return true;
}

template <class T>
OracleBlock<T> build_block(int N, const T& lambda, int degree) {
  OracleBlock<T> block;
  block.degree = degree;
  block.basis = partitions_padded(degree, N);
  const std::size_t dim = block.basis.size();
  std::map<MomentumVector, std::size_t> index;
  for (std::size_t i = 0; i < dim; ++i) index[block.basis[i]] = i;
  block.matrix.assign(dim, std::vector<T>(dim, T(0)));

  const T p = T(N) * lambda / T(2);
  const T e_ground = bare_energy(MomentumVector(std::vector<int>(N, 0)), lambda);
  for (std::size_t col = 0; col < dim; ++col) {
    auto add = [&](const std::vector<int>& expo, const T& c) {
      if (!non_increasing(expo)) return;
      block.matrix[index.at(MomentumVector(expo))][col] += c;
    };
    for (const auto& a : distinct_permutations(block.basis[col].n)) {
      T diag = e_ground;
      for (int j = 0; j < N; ++j) diag += T(a[j]) * T(a[j]) + T(2) * p * T(a[j]);
      add(a, diag);
      // (z_j + z_k)/(z_j - z_k)(D_j - D_k) is symmetric under j <-> k, so the
      // monomial pair {z^a, z^{a swapped}} is handled once, from the member
      // with the larger exponent in the earlier slot.
      for (int j = 0; j < N; ++j) {
        for (int k = j + 1; k < N; ++k) {
          if (a[j] <= a[k]) continue;
          const int hi = a[j];
          const int lo = a[k];
          const int d = hi - lo;
          const T c = lambda * T(d);
          add(a, c);
          std::vector<int> s = a;
          std::swap(s[j], s[k]);
          add(s, c);
          for (int i = 1; i < d; ++i) {
            std::vector<int> t = a;
            t[j] = hi - i;
            t[k] = lo + i;
            add(t, T(2) * c);
          }
        }
      }
    }
  }
  return block;
}

}  // namespace

template <class T>
OracleResult<T> oracle_diagonalize(int N, const T& lambda, int degree) {
  require_lambda(lambda);
  if (N < 1 || N > 4 || degree < 0 || degree > 12) {
    throw Error(ErrorKind::size_overflow, "oracle is limited to N <= 4 and degree <= 12");
  }
  OracleResult<T> result;
  result.N = N;
  result.lambda = lambda;
  for (int deg = 0; deg <= degree; ++deg) {
    OracleBlock<T> block = build_block(N, lambda, deg);
    const std::size_t dim = block.basis.size();
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = r + 1; c < dim; ++c) {
        if (!near_zero(block.matrix[r][c])) {
          throw Error(ErrorKind::domain, "oracle matrix is not triangular");
        }
      }
    }
    for (std::size_t c = 0; c < dim; ++c) {
      const T e = block.matrix[c][c];
      std::vector<T> v(dim, T(0));
      v[c] = T(1);
      for (std::size_t r = c + 1; r < dim; ++r) {
        T rhs(0);
        for (std::size_t l = c; l < r; ++l) rhs += block.matrix[r][l] * v[l];
        const T d = e - block.matrix[r][r];
        if (near_zero(d)) {
          if (!near_zero(rhs)) {
            throw Error(ErrorKind::resonance, "oracle block is not diagonalizable");
          }
          continue;
        }
        v[r] = rhs / d;
      }
      block.pairs.push_back({block.basis[c], e, std::move(v)});
    }
    if constexpr (ScalarTraits<T>::exact) {
      for (const auto& pr : block.pairs) result.eigenvalues.push_back(pr.eigenvalue);
    } else {
      Eigen::MatrixXd m(dim, dim);
      for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) m(r, c) = block.matrix[r][c];
      }
      Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
      for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        result.eigenvalues.push_back(solver.eigenvalues()[i].real());
      }
    }
    result.blocks.push_back(std::move(block));
  }
  std::sort(result.eigenvalues.begin(), result.eigenvalues.end());
  return result;
}

Complex hatF_trig(const std::vector<double>& x, const MomentumVector& m, double lambda,
                  const QuadratureSpec& quad) {
  return hatF_jets(x, {m}, lambda, ThetaContext::trigonometric(), quad).front().value;
}

Jet eigenfunction_trig(const std::vector<double>& x, const CoefficientTable<double>& table,
                       const QuadratureSpec& quad) {
  std::vector<MomentumVector> ms;
  for (const auto& e : table.entries) ms.push_back(e.first);
  std::vector<Jet> parts =
      hatF_jets(x, ms, table.lambda, ThetaContext::trigonometric(), quad);
  Jet sum(static_cast<int>(x.size()));
  std::size_t i = 0;
  for (const auto& e : table.entries) {
    Jet term = parts[i++];
    term *= e.second;
    sum += term;
  }
  return sum;
}

Jet eigenfunction_trig(const std::vector<double>& x, const MomentumVector& n, double lambda,
                       int budget, const QuadratureSpec& quad) {
  return eigenfunction_trig(x, alpha_recursive<double>(n, lambda, budget), quad);
}

Complex eigenfunction_trig_ratio(const std::vector<double>& x, const CoefficientTable<double>& table,
                                 const QuadratureSpec& quad) {
  std::vector<MomentumVector> ms;
  for (const auto& e : table.entries) ms.push_back(e.first);
  std::vector<Jet> parts =
      cP_kernel_jets(x, ms, table.lambda, ThetaContext::trigonometric(), quad);
  Complex sum = 0.0;
  std::size_t i = 0;
  for (const auto& e : table.entries) sum += e.second * parts[i++].value;
  return sum;
}

template CoefficientTable<Rational> alpha_recursive(const MomentumVector&, const Rational&, int);
template CoefficientTable<double> alpha_recursive(const MomentumVector&, const double&, int);
template CoefficientTable<Rational> alpha_explicit(const MomentumVector&, const Rational&, int, int);
template CoefficientTable<double> alpha_explicit(const MomentumVector&, const double&, int, int);
template OracleResult<Rational> oracle_diagonalize(int, const Rational&, int);
template OracleResult<double> oracle_diagonalize(int, const double&, int);

}  // namespace ecs
