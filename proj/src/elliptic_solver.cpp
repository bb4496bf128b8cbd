// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#include "ecs/elliptic_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ecs/error.hpp"
#include "ecs/trig_solver.hpp"

namespace ecs {

namespace {

constexpr double kZeroTol = 1e-9;

template <class T>
bool zero_scalar(const T& x) {
  return ScalarTraits<T>::is_zero(x, kZeroTol);
}

int max_positive(const std::vector<int>& P) {
  int v = 0;
  for (int p : P) v = std::max(v, p);
  return v;
}

int min_partial(const std::vector<int>& P) {
  int v = 0;
  for (int p : P) v = std::min(v, p);
  return v;
}

template <class T>
void require_inputs(const MomentumVector& n, const T& lambda, int K) {
  require_admissible(n);
  if (!(lambda > T(0))) throw Error(ErrorKind::invalid_argument, "lambda must be positive");
  if (K < 0) throw Error(ErrorKind::invalid_argument, "order K must be non-negative");
}

[[noreturn]] void resonance(const MomentumVector& m, const MomentumVector& n) {
  throw Error(ErrorKind::resonance,
              "resonance: E0" + m.str() + " = E0" + n.str() + " with m != n");
}

// Zero every coefficient above `keep`.
template <class T>
void trim(QSeries<T>& s, int keep) {
  for (int k = std::max(keep + 1, 0); k <= s.order(); ++k) s[k] = T(0);
}

// Moves nu E_jk from a state with partial sums P that keep every partial sum
// in [-K, K]; the loop routes can never return to n from outside this box.
struct LoopMove {
  Move move;
  std::vector<int> partials;
};

std::vector<LoopMove> loop_moves(const std::vector<int>& P, int N, int K) {
  std::vector<LoopMove> out;
  for (int j = 0; j < N; ++j) {
    for (int k = j + 1; k < N; ++k) {
      int hi = -K;
      int lo = K;
      for (int l = j; l < k; ++l) {
        hi = std::max(hi, P[l]);
        lo = std::min(lo, P[l]);
      }
      for (int nu = std::max(-K, -K - lo); nu <= K - hi; ++nu) {
        if (nu == 0) continue;
        std::vector<int> Q = P;
        for (int l = j; l < k; ++l) Q[l] += nu;
        out.push_back({{j, k, nu}, std::move(Q)});
      }
    }
  }
  return out;
}

bool all_zero(const std::vector<int>& P) {
  return std::all_of(P.begin(), P.end(), [](int p) { return p == 0; });
}

// sum over closed loops of prod gamma S_nu / prod_{r<s} (E0(m_r) - E).
template <class T>
QSeries<T> loop_sum(const MomentumVector& n, const T& lambda, int K, const QSeries<T>& energy) {
  const int N = n.size();
  const T gamma = coupling(lambda);
  QSeries<T> total(K);
  std::map<MomentumVector, QSeries<T>> amp;
  amp.emplace(n, QSeries<T>(K, T(1)));
  std::map<int, QSeries<T>> S;
  for (int nu = -K; nu <= 2 * K; ++nu) S.emplace(nu, S_coeff<T>(nu, K) * gamma);
  for (int step = 0; !amp.empty(); ++step) {
    if (step > 100000) throw Error(ErrorKind::convergence, "loop enumeration did not terminate");
    std::map<MomentumVector, QSeries<T>> next;
    for (const auto& [m, a] : amp) {
      const std::vector<int> P = m.partial_sums_from(n);
      for (const LoopMove& lm : loop_moves(P, N, K)) {
        QSeries<T> c = a * S.at(lm.move.nu);
        if (c.is_zero()) continue;
        if (all_zero(lm.partials)) {
          total += c;
          continue;
        }
        trim(c, K - max_positive(lm.partials));
        if (c.is_zero()) continue;
        const MomentumVector m2 = apply_move(m, lm.move);
        QSeries<T> delta = QSeries<T>(K, bare_energy(m2, lambda)) - energy;
        if (zero_scalar(delta[0])) resonance(m2, n);
        c *= delta.reciprocal();
        trim(c, K - max_positive(lm.partials));
        if (c.is_zero()) continue;
        auto it = next.find(m2);
        if (it == next.end()) {
          next.emplace(m2, std::move(c));
        } else {
          it->second += c;
        }
      }
    }
    amp.swap(next);
  }
  return total;
}

template <class T>
bool series_equal(const QSeries<T>& a, const QSeries<T>& b) {
  if constexpr (ScalarTraits<T>::exact) {
    return a == b;
  } else {
    for (int k = 0; k <= a.order(); ++k) {
      if (std::abs(a[k] - b[k]) > 1e-12 * std::max(1.0, std::abs(a[k]))) return false;
    }
    return true;
  }
}

}  // namespace

template <class T>
QSeries<T> regularized_reciprocal(const QSeries<T>& delta0, bool m_equals_n,
                                  double resonance_tol) {
  if (m_equals_n) return QSeries<T>(delta0.order());
  if (ScalarTraits<T>::is_zero(delta0[0], resonance_tol)) {
    throw Error(ErrorKind::resonance, "resonance: zero constant term in E0(m) - E_n with m != n");
  }
  return delta0.reciprocal();
}

template <class T>
EllipticEigenpair<T> alpha_elliptic(const MomentumVector& n, const T& lambda, int K, int budget) {
  require_inputs(n, lambda, K);
  if (budget < 0) throw Error(ErrorKind::invalid_argument, "budget must be non-negative");
  const int N = n.size();
  EllipticEigenpair<T> out;
  out.n = n;
  out.lambda = lambda;
  out.K = K;
  out.budget = budget;
  out.lower = -K;
  out.energy_exact = budget >= (N - 1) * K;
  const T e0 = bare_energy(n, lambda);
  out.energy = QSeries<T>(K, e0);
  const T gamma = coupling(lambda);
  if (gamma == T(0)) {
    out.coeffs.emplace(n, QSeries<T>(K, T(1)));
    return out;
  }

  const std::vector<MomentumVector> states = raise_window(n, -K, budget);
  std::map<MomentumVector, QSeries<T>>& alpha = out.coeffs;
  for (const auto& m : states) alpha.emplace(m, QSeries<T>(K));
  alpha.at(n)[0] = T(1);

  struct StateInfo {
    MomentumVector m;
    int weight;
    int min_partial;
    T delta;
  };
  std::vector<StateInfo> info;
  for (const auto& m : states) {
    const std::vector<int> P = m.partial_sums_from(n);
    int w = 0;
    for (int p : P) w += p;
    info.push_back({m, w, min_partial(P), bare_energy(m, lambda) - e0});
  }
  std::vector<QSeries<T>> S;
  const int nu_min = -K;
  const int nu_max = budget + K;
  for (int nu = nu_min; nu <= nu_max; ++nu) S.push_back(S_coeff<T>(nu, K));

  // gamma [sum_{j<k} sum_nu S_nu alpha(m - nu E_jk)] at order k
  auto coupling_term = [&](const MomentumVector& m, int k) -> T {
    T acc(0);
    for (int j = 0; j < N; ++j) {
      for (int l = j + 1; l < N; ++l) {
        for (int nu = std::max(nu_min, -k); nu <= nu_max; ++nu) {
          if (nu == 0) continue;
          auto it = alpha.find(apply_move(m, {j, l, -nu}));
          if (it == alpha.end()) continue;
          const QSeries<T>& s = S[nu - nu_min];
          for (int i = 0; i <= k; ++i) {
            if (s[i] != T(0)) acc += s[i] * it->second[k - i];
          }
        }
      }
    }
    return gamma * acc;
  };

  auto solve_state = [&](const StateInfo& st, int k) {
    if (st.min_partial < -k) return;
    QSeries<T>& a = alpha.at(st.m);
    T rhs = coupling_term(st.m, k);
    for (int i = 1; i <= k; ++i) rhs += out.energy[i] * a[k - i];
    if (zero_scalar(st.delta)) {
      if (zero_scalar(rhs)) {
        a[k] = T(0);
        out.benign_resonances.push_back({st.m, k});
        return;
      }
      resonance(st.m, n);
    }
    a[k] = rhs / st.delta;
  };

  for (int k = 0; k <= K; ++k) {
    for (const auto& st : info) {
      if (st.weight < 0) solve_state(st, k);
    }
    if (k > 0) out.energy[k] = -coupling_term(n, k);
    for (const auto& st : info) {
      if (st.weight >= 0 && st.m != n) solve_state(st, k);
    }
  }
  for (auto it = alpha.begin(); it != alpha.end();) {
    it = it->second.is_zero() ? alpha.erase(it) : std::next(it);
  }
  return out;
}

template <class T>
QSeries<T> eigenvalue_implicit(const MomentumVector& n, const T& lambda, int K,
                               int max_iterations) {
  require_inputs(n, lambda, K);
  const QSeries<T> e0(K, bare_energy(n, lambda));
  if (coupling(lambda) == T(0)) return e0;
  QSeries<T> energy = e0;
  for (int it = 0; it < max_iterations; ++it) {
    QSeries<T> next = e0 - loop_sum(n, lambda, K, energy);
    if (series_equal(next, energy)) return next;
    energy = std::move(next);
  }
  throw Error(ErrorKind::convergence, "implicit eigenvalue iteration did not become stationary");
}

template <class T>
std::vector<QSeries<T>> g_helper_all(const MomentumVector& n, const T& lambda, int K, int kmax) {
  require_inputs(n, lambda, K);
  if (kmax < 0) throw Error(ErrorKind::invalid_argument, "negative G index");
  const int N = n.size();
  const T gamma = coupling(lambda);
  const T e0 = bare_energy(n, lambda);
  std::vector<QSeries<T>> G(kmax + 1, QSeries<T>(K));
  if (gamma == T(0)) return G;
  using Bi = std::vector<QSeries<T>>;  // index: power of the shift x
  std::map<MomentumVector, Bi> amp;
  {
    Bi start(kmax + 1, QSeries<T>(K));
    start[0][0] = T(1);
    amp.emplace(n, std::move(start));
  }
  std::map<int, QSeries<T>> S;
  for (int nu = -K; nu <= 2 * K; ++nu) S.emplace(nu, S_coeff<T>(nu, K) * gamma);
  for (int step = 0; !amp.empty(); ++step) {
    if (step > 100000) throw Error(ErrorKind::convergence, "loop enumeration did not terminate");
    std::map<MomentumVector, Bi> next;
    for (const auto& [m, a] : amp) {
      const std::vector<int> P = m.partial_sums_from(n);
      for (const LoopMove& lm : loop_moves(P, N, K)) {
        const int keep = K - max_positive(lm.partials);
        Bi c(kmax + 1, QSeries<T>(K));
        bool any = false;
        for (int l = 0; l <= kmax; ++l) {
          if (a[l].is_zero()) continue;
          c[l] = a[l] * S.at(lm.move.nu);
          if (!all_zero(lm.partials)) trim(c[l], keep);
          any = any || !c[l].is_zero();
        }
        if (!any) continue;
        if (all_zero(lm.partials)) {
          for (int l = 0; l <= kmax; ++l) G[l] += c[l];
          continue;
        }
        const MomentumVector m2 = apply_move(m, lm.move);
        const T delta = bare_energy(m2, lambda) - e0;
        if (zero_scalar(delta)) resonance(m2, n);
        // times 1/(delta - x) = sum_l x^l / delta^{1+l}
        const T inv = T(1) / delta;
        Bi d(kmax + 1, QSeries<T>(K));
        for (int l = 0; l <= kmax; ++l) {
          if (c[l].is_zero()) continue;
          T f = inv;
          for (int e = l; e <= kmax; ++e) {
            d[e] += c[l] * f;
            f *= inv;
          }
        }
        auto it = next.find(m2);
        if (it == next.end()) {
          next.emplace(m2, std::move(d));
        } else {
          for (int l = 0; l <= kmax; ++l) it->second[l] += d[l];
        }
      }
    }
    amp.swap(next);
  }
  return G;
}

namespace {

template <class T>
void lagrange_terms(int p, int j, int parts_left, int weight_left, std::vector<int>& kv,
                    const std::vector<QSeries<T>>& G, QSeries<T>& acc) {
  if (j == p) {
    if (parts_left != 0 || weight_left != 0) return;
    // (p-1)! / prod k_j!
    T coef(1);
    for (int i = 2; i < p; ++i) coef *= T(i);
    QSeries<T> prod(acc.order(), T(1));
    for (int i = 0; i < p; ++i) {
      for (int f = 2; f <= kv[i]; ++f) coef /= T(f);
      for (int r = 0; r < kv[i]; ++r) prod *= G[i];
    }
    acc += prod * coef;
    return;
  }
  for (int c = 0; c <= parts_left && c * j <= weight_left; ++c) {
    kv[j] = c;
    lagrange_terms(p, j + 1, parts_left - c, weight_left - c * j, kv, G, acc);
  }
  kv[j] = 0;
}

}  // namespace

template <class T>
QSeries<T> eigenvalue_explicit(const MomentumVector& n, const T& lambda, int K) {
  require_inputs(n, lambda, K);
  QSeries<T> energy(K, bare_energy(n, lambda));
  if (coupling(lambda) == T(0) || K == 0) return energy;
  const std::vector<QSeries<T>> G = g_helper_all(n, lambda, K, K - 1);
  // every G_j is O(q^2), so terms with p > K vanish
  for (int p = 1; p <= K; ++p) {
    QSeries<T> acc(K);
    std::vector<int> kv(p, 0);
    lagrange_terms(p, 0, p, p - 1, kv, G, acc);
    if (p % 2 == 1) {
      energy -= acc;
    } else {
      energy += acc;
    }
  }
  return energy;
}

template <class T>
std::map<MomentumVector, QSeries<T>> alpha_elliptic_paths(const MomentumVector& n,
                                                          const T& lambda, int K, int budget,
                                                          const QSeries<T>& energy) {
  require_inputs(n, lambda, K);
  const int N = n.size();
  const T gamma = coupling(lambda);
  std::map<MomentumVector, QSeries<T>> alpha;
  alpha.emplace(n, QSeries<T>(K, T(1)));
  if (gamma == T(0)) return alpha;
  std::map<MomentumVector, int> window;
  for (const auto& m : raise_window(n, -K, budget)) window.emplace(m, 0);
  std::map<int, QSeries<T>> S;
  for (int nu = -K; nu <= budget + K; ++nu) S.emplace(nu, S_coeff<T>(nu, K) * gamma);

  std::map<MomentumVector, QSeries<T>> amp;
  amp.emplace(n, QSeries<T>(K, T(1)));
  for (int step = 0; !amp.empty(); ++step) {
    if (step > 100000) throw Error(ErrorKind::convergence, "path enumeration did not terminate");
    std::map<MomentumVector, QSeries<T>> next;
    for (const auto& [m, a] : amp) {
      for (int j = 0; j < N; ++j) {
        for (int k = j + 1; k < N; ++k) {
          for (int nu = -K; nu <= budget + K; ++nu) {
            if (nu == 0) continue;
            const MomentumVector m2 = apply_move(m, {j, k, nu});
            if (m2 == n || !window.count(m2)) continue;
            QSeries<T> c = a * S.at(nu);
            if (c.is_zero()) continue;
            QSeries<T> delta = QSeries<T>(K, bare_energy(m2, lambda)) - energy;
            c *= regularized_reciprocal(delta, false, kZeroTol);
            auto it = next.find(m2);
            if (it == next.end()) {
              next.emplace(m2, std::move(c));
            } else {
              it->second += c;
            }
          }
        }
      }
    }
    for (const auto& [m, c] : next) {
      auto it = alpha.find(m);
      if (it == alpha.end()) {
        alpha.emplace(m, c);
      } else {
        it->second += c;
      }
    }
    amp.swap(next);
  }
  for (auto it = alpha.begin(); it != alpha.end();) {
    it = it->second.is_zero() ? alpha.erase(it) : std::next(it);
  }
  return alpha;
}

double budget_stability(const MomentumVector& n, double lambda, int K, int budget, double q) {
  const auto a = alpha_elliptic<double>(n, lambda, K, budget);
  const auto b = alpha_elliptic<double>(n, lambda, K, budget + 2);
  const double t = q * q;
  double change = std::abs(a.energy.evaluate(t) - b.energy.evaluate(t));
  const int settled = budget - (n.size() - 1) * K;
  for (const auto& [m, s] : a.coeffs) {
    if (raise_weight(m, n) > settled) continue;
    change = std::max(change, std::abs(s.evaluate(t) - b.coeff(m).evaluate(t)));
  }
  return change;
}

double tail_proxy(const EllipticEigenpair<double>& pair, double q) {
  const double t = q * q;
  double proxy = pair.energy.last_term(t);
  for (const auto& [m, s] : pair.coeffs) proxy = std::max(proxy, s.last_term(t));
  return proxy;
}

EllipticEvaluation eigenfunction_elliptic(const std::vector<double>& x,
                                          const EllipticEigenpair<double>& pair, double q,
                                          const QuadratureSpec& quad, double tail_tol) {
  EllipticEvaluation out;
  out.tail_proxy = tail_proxy(pair, q);
  if (out.tail_proxy > tail_tol) {
    throw Error(ErrorKind::convergence,
                "q^2 series tail too large: last-term magnitude " + std::to_string(out.tail_proxy));
  }
  const ThetaContext ctx = ThetaContext::from_q(q);
  std::vector<MomentumVector> ms;
  for (const auto& e : pair.coeffs) ms.push_back(e.first);
  const std::vector<Jet> parts = hatF_jets(x, ms, to_double(pair.lambda), ctx, quad);
  out.psi = Jet(static_cast<int>(x.size()));
  const double t = q * q;
  std::size_t i = 0;
  for (const auto& e : pair.coeffs) {
    Jet term = parts[i++];
    term *= e.second.evaluate(t);
    out.psi += term;
  }
  out.energy = pair.energy.evaluate(t);
  return out;
}

double eigen_residual(const Jet& psi, const std::vector<double>& x, double lambda,
                      const ThetaContext& ctx, double energy) {
  return std::abs(apply_hamiltonian(psi, x, lambda, ctx) - energy * psi.value) /
         std::abs(psi.value);
}

#define ECS_INSTANTIATE(T)                                                                      \
  template QSeries<T> regularized_reciprocal(const QSeries<T>&, bool, double);                 \
  template EllipticEigenpair<T> alpha_elliptic(const MomentumVector&, const T&, int, int);     \
  template QSeries<T> eigenvalue_implicit(const MomentumVector&, const T&, int, int);          \
  template std::vector<QSeries<T>> g_helper_all(const MomentumVector&, const T&, int, int);    \
  template QSeries<T> eigenvalue_explicit(const MomentumVector&, const T&, int);               \
  template std::map<MomentumVector, QSeries<T>> alpha_elliptic_paths(                          \
      const MomentumVector&, const T&, int, int, const QSeries<T>&);

ECS_INSTANTIATE(Rational)
ECS_INSTANTIATE(double)

#undef ECS_INSTANTIATE

}  // namespace ecs
