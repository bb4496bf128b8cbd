// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

// ecs: command-line front end for the solvers.
//
// Exit status: 0 ok, 1 failed check or other error, 2 resonance,
// 3 admissibility, 4 convergence. Errors are also printed as JSON with a
// machine-readable error.kind.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ecs/correlation.hpp"
#include "ecs/elliptic_solver.hpp"
#include "ecs/error.hpp"
#include "ecs/fock.hpp"
#include "ecs/genfun.hpp"
#include "ecs/io.hpp"
#include "ecs/theta.hpp"
#include "ecs/trig_solver.hpp"

using namespace ecs;

namespace {

struct Result {
  Json json;
  /// Array of flat objects used for --format csv.
  Json table = Json::array();
  bool ok = true;
};

using Command = std::function<Result(const Json&)>;

// ---------------------------------------------------------------------------
// config access

template <class T>
T get(const Json& cfg, const char* key, T fallback) {
  auto it = cfg.find(key);
  if (it == cfg.end() || it->is_null()) return fallback;
  return it->get<T>();
}

template <class T>
T need(const Json& cfg, const char* key) {
  auto it = cfg.find(key);
  if (it == cfg.end() || it->is_null()) {
    throw Error(ErrorKind::invalid_argument, std::string("missing --") + key);
  }
  return it->get<T>();
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size() && item.find_first_not_of(' ', used) != std::string::npos) throw 0;
    } catch (...) {
      throw Error(ErrorKind::invalid_argument, "bad number: " + item);
    }
  }
  if (out.empty()) throw Error(ErrorKind::invalid_argument, "empty list");
  return out;
}

MomentumVector momentum_from(const Json& cfg) {
  const MomentumVector n = parse_momentum(need<std::string>(cfg, "n"));
  const int N = get<int>(cfg, "N", n.size());
  if (N != n.size()) {
    throw Error(ErrorKind::invalid_argument, "--N does not match the length of --n");
  }
  return n;
}

std::optional<ThetaContext> context_from(const Json& cfg, bool required) {
  const bool has_q = cfg.contains("q") && !cfg["q"].is_null();
  const bool has_beta = cfg.contains("beta") && !cfg["beta"].is_null();
  if (has_q && has_beta) throw Error(ErrorKind::invalid_argument, "give only one of --q, --beta");
  if (has_q) {
    const double q = cfg["q"].get<double>();
    if (!(q >= 0.0 && q < 1.0)) throw Error(ErrorKind::invalid_argument, "--q must lie in [0, 1)");
    return ThetaContext::from_q(q);
  }
  if (has_beta) return ThetaContext::from_beta(cfg["beta"].get<double>());
  if (required) throw Error(ErrorKind::invalid_argument, "one of --q, --beta is required");
  return std::nullopt;
}

Json context_json(const ThetaContext& ctx) {
  Json j;
  j["q"] = ctx.q();
  j["beta"] = ctx.is_trigonometric() ? Json(nullptr) : Json(ctx.beta());
  j["m_max"] = ctx.m_max();
  return j;
}

int thread_count() {
  const char* env = std::getenv("ECS_THREADS");
  if (env == nullptr) return 1;
  const int t = std::atoi(env);
  return std::clamp(t, 1, 256);
}

// Runs f(i) for i < count on ECS_THREADS workers; results are written by
// index so the output does not depend on scheduling.
void parallel_for(int count, const std::function<void(int)>& f) {
  const int workers = std::min(thread_count(), std::max(count, 1));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < count; i += workers) f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<std::vector<double>> sample_points(int count, int N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < count; ++i) pts.push_back(sample_collision_free(N, rng, 0.3));
  return pts;
}

// ---------------------------------------------------------------------------
// theta

Result run_theta(const Json& cfg) {
  const ThetaContext ctx = *context_from(cfg, true);
  Result r;
  r.json["context"] = context_json(ctx);
  Json rows = Json::array();
  for (double x : parse_list(get<std::string>(cfg, "r", "0.5,1,2"))) {
    Json row;
    row["r"] = x;
    row["theta"] = theta_elliptic(x, ctx);
    row["dlog"] = log_theta_derivs(x, ctx, 1);
    row["d2log"] = log_theta_derivs(x, ctx, 2);
    row["potential"] = potential_elliptic(x, ctx);
    rows.push_back(row);
  }
  r.json["rows"] = rows;
  r.table = rows;
  return r;
}

// ---------------------------------------------------------------------------
// spectrum

template <class T>
Result spectrum_impl(const MomentumVector& n, const T& lambda) {
  Result r;
  Json pm = Json::array();
  for (const T& v : pseudo_momenta(n, lambda)) pm.push_back(scalar_json(v));
  r.json["n"] = momentum_json(n);
  r.json["N"] = n.size();
  r.json["lambda"] = scalar_json(lambda);
  r.json["pseudo_momenta"] = pm;
  r.json["energy"] = scalar_json(bare_energy(n, lambda));
  r.json["coupling"] = scalar_json(coupling(lambda));
  r.json["admissible"] = n.admissible();
  r.table.push_back(Json{{"n", n.str()}, {"energy", r.json["energy"]}});
  return r;
}

Result run_spectrum(const Json& cfg) {
  const MomentumVector n = momentum_from(cfg);
  const std::string lam = need<std::string>(cfg, "lambda");
  Result r = looks_rational(lam) ? spectrum_impl(n, parse_rational(lam))
                                 : spectrum_impl(n, std::stod(lam));
  r.json["mode"] = looks_rational(lam) ? "exact" : "float";
  return r;
}

// ---------------------------------------------------------------------------
// solve-trig

// |psi| below 1e-10 of sum |alpha| |Psi0| counts as an identically vanishing
// eigenfunction; its relative residual is then meaningless and left null.
Json sample_json(const std::vector<double>& x, const Jet& psi, double scale,
                 const std::function<double()>& residual) {
  Json s{{"x", x}, {"psi", complex_json(psi.value)}};
  const bool vanishing = std::abs(psi.value) < 1e-10 * scale;
  s["vanishing"] = vanishing;
  s["residual"] = vanishing ? Json(nullptr) : Json(residual());
  return s;
}

double psi0_scale(const std::vector<double>& x, double lambda, const ThetaContext& ctx,
                  double alpha_sum) {
  return std::abs(psi0(x, lambda, ctx, BranchPolicy::floor_sign)) * alpha_sum;
}

template <class T>
Result solve_trig_impl(const Json& cfg, const MomentumVector& n, const T& lambda) {
  const int budget = get<int>(cfg, "budget", 4);
  const int points = get<int>(cfg, "points", 0);
  const QuadratureSpec quad{get<int>(cfg, "M", 32), 0.0};
  const auto table = alpha_recursive(n, lambda, budget);
  Result r;
  r.json["n"] = momentum_json(n);
  r.json["lambda"] = scalar_json(lambda);
  r.json["budget"] = budget;
  r.json["energy"] = scalar_json(bare_energy(n, lambda));
  Json coeffs = Json::array();
  for (const auto& [m, a] : table.entries) {
    coeffs.push_back(Json{{"m", momentum_json(m)}, {"alpha", scalar_json(a)}});
    r.table.push_back(Json{{"m", m.str()}, {"alpha", scalar_json(a)}});
  }
  r.json["coefficients"] = coeffs;
  if (points > 0) {
    const double lam = to_double(lambda);
    const auto dt = convert_table<double>(table);
    const auto pts = sample_points(points, n.size(), get<std::uint64_t>(cfg, "seed", 1));
    std::vector<Json> samples(points);
    const ThetaContext trig = ThetaContext::trigonometric();
    const double e = to_double(bare_energy(n, lambda));
    double alpha_sum = 0.0;
    for (const auto& [m, a] : dt.entries) alpha_sum += std::abs(a);
    parallel_for(points, [&](int i) {
      const Jet psi = eigenfunction_trig(pts[i], dt, quad);
      samples[i] = sample_json(pts[i], psi, psi0_scale(pts[i], lam, trig, alpha_sum),
                               [&] { return eigen_residual(psi, pts[i], lam, trig, e); });
    });
    r.json["samples"] = samples;
    r.json["quadrature"] = Json{{"points_per_circle", quad.points_per_circle}};
  }
  return r;
}

Result run_solve_trig(const Json& cfg) {
  const MomentumVector n = momentum_from(cfg);
  const std::string lam = need<std::string>(cfg, "lambda");
  Result r = looks_rational(lam) ? solve_trig_impl(cfg, n, parse_rational(lam))
                                 : solve_trig_impl(cfg, n, std::stod(lam));
  r.json["mode"] = looks_rational(lam) ? "exact" : "float";
  return r;
}

// ---------------------------------------------------------------------------
// solve-elliptic

template <class T>
EllipticEigenpair<double> to_float_pair(const EllipticEigenpair<T>& p) {
  EllipticEigenpair<double> d;
  d.n = p.n;
  d.lambda = to_double(p.lambda);
  d.K = p.K;
  d.budget = p.budget;
  d.lower = p.lower;
  d.energy_exact = p.energy_exact;
  d.benign_resonances = p.benign_resonances;
  auto conv = [&](const QSeries<T>& s) {
    QSeries<double> o(s.order());
    for (int k = 0; k <= s.order(); ++k) o[k] = to_double(s[k]);
    return o;
  };
  d.energy = conv(p.energy);
  for (const auto& [m, s] : p.coeffs) d.coeffs.emplace(m, conv(s));
  return d;
}

template <class T>
Json route_json(const std::function<QSeries<T>()>& f, const QSeries<T>& joint) {
  try {
    const QSeries<T> s = f();
    return Json{{"series", series_json(s)}, {"agrees", s == joint}};
  } catch (const Error& e) {
    return Json{{"error", Json{{"kind", to_string(e.kind())}, {"message", e.what()}}}};
  }
}

template <class T>
Result solve_elliptic_impl(const Json& cfg, const MomentumVector& n, const T& lambda) {
  const int K = get<int>(cfg, "K", 2);
  const int budget = get<int>(cfg, "budget", (n.size() - 1) * K + 4);
  const std::string route = get<std::string>(cfg, "route", "joint");
  std::optional<QSeries<T>> routed;
  if (route == "implicit") {
    routed = eigenvalue_implicit(n, lambda, K);
  } else if (route == "explicit") {
    routed = eigenvalue_explicit(n, lambda, K);
  } else if (route != "joint") {
    throw Error(ErrorKind::invalid_argument, "unknown route " + route);
  }
  auto pair = alpha_elliptic(n, lambda, K, budget);
  Result r;
  r.json["n"] = momentum_json(n);
  r.json["lambda"] = scalar_json(lambda);
  r.json["energy_route"] = route;
  if (routed) {
    r.json["joint_energy_agrees"] = *routed == pair.energy;
    pair.energy = *routed;
  }
  r.json["energy"] = series_json(pair.energy);
  r.json["truncation"] = Json{{"K", K},
                              {"budget", budget},
                              {"lowest_partial_sum", pair.lower},
                              {"negative_nu_limit", K},
                              {"energy_exact", pair.energy_exact}};
  Json coeffs = Json::array();
  for (const auto& [m, s] : pair.coeffs) {
    coeffs.push_back(Json{{"m", momentum_json(m)}, {"alpha", series_json(s)}});
    Json row{{"m", m.str()}};
    for (int k = 0; k <= K; ++k) row["c" + std::to_string(k)] = scalar_json(s[k]);
    r.table.push_back(row);
  }
  r.json["coefficients"] = coeffs;
  Json benign = Json::array();
  for (const auto& b : pair.benign_resonances) {
    benign.push_back(Json{{"m", momentum_json(b.m)}, {"order", b.order}});
  }
  r.json["benign_resonances"] = benign;
  if (get<bool>(cfg, "check_routes", false)) {
    r.json["routes"] = Json{
        {"implicit", route_json<T>([&] { return eigenvalue_implicit(n, lambda, K); }, pair.energy)},
        {"explicit", route_json<T>([&] { return eigenvalue_explicit(n, lambda, K); }, pair.energy)}};
  }
  const auto ctx = context_from(cfg, false);
  if (ctx) {
    const double q = ctx->q();
    const auto dp = to_float_pair(pair);
    const double lam = to_double(lambda);
    Json diag;
    diag["q"] = q;
    diag["energy"] = dp.energy.evaluate(q * q);
    diag["tail_proxy"] = tail_proxy(dp, q);
    diag["budget_stability"] = budget_stability(n, lam, K, budget, q);
    const int points = get<int>(cfg, "points", 0);
    if (points > 0) {
      const QuadratureSpec quad{get<int>(cfg, "M", 32), 0.0};
      const double tail_tol = get<double>(cfg, "tail_tol", 1.0);
      const auto pts = sample_points(points, n.size(), get<std::uint64_t>(cfg, "seed", 1));
      std::vector<Json> samples(points);
      double alpha_sum = 0.0;
      for (const auto& [m, s] : dp.coeffs) alpha_sum += std::abs(s.evaluate(q * q));
      parallel_for(points, [&](int i) {
        const auto ev = eigenfunction_elliptic(pts[i], dp, q, quad, tail_tol);
        samples[i] = sample_json(pts[i], ev.psi, psi0_scale(pts[i], lam, *ctx, alpha_sum), [&] {
          return eigen_residual(ev.psi, pts[i], lam, *ctx, ev.energy);
        });
      });
      r.json["samples"] = samples;
      r.json["quadrature"] = Json{{"points_per_circle", quad.points_per_circle}};
    }
    r.json["evaluation"] = diag;
  }
  return r;
}

Result run_solve_elliptic(const Json& cfg) {
  const MomentumVector n = momentum_from(cfg);
  const std::string lam = need<std::string>(cfg, "lambda");
  Result r = looks_rational(lam) ? solve_elliptic_impl(cfg, n, parse_rational(lam))
                                 : solve_elliptic_impl(cfg, n, std::stod(lam));
  r.json["mode"] = looks_rational(lam) ? "exact" : "float";
  return r;
}

// ---------------------------------------------------------------------------
// check-identity

Result run_check_identity(const Json& cfg) {
  const int N = need<int>(cfg, "N");
  const double lambda = std::stod(need<std::string>(cfg, "lambda"));
  const ThetaContext ctx = *context_from(cfg, true);
  const int trials = get<int>(cfg, "trials", 100);
  const double tol = get<double>(cfg, "tol", 1e-7);
  const auto pts = sample_points(trials, 2 * N, get<std::uint64_t>(cfg, "seed", 1));
  std::vector<double> res(trials);
  parallel_for(trials, [&](int i) {
    const std::vector<double> x(pts[i].begin(), pts[i].begin() + N);
    const std::vector<double> y(pts[i].begin() + N, pts[i].end());
    res[i] = functional_identity_residual(x, y, lambda, ctx);
  });
  const auto worst = std::max_element(res.begin(), res.end());
  Result r;
  r.json["context"] = context_json(ctx);
  r.json["N"] = N;
  r.json["lambda"] = lambda;
  r.json["trials"] = trials;
  r.json["tol"] = tol;
  r.json["max_residual"] = trials > 0 ? *worst : 0.0;
  r.json["pass"] = trials == 0 || *worst < tol;
  r.ok = r.json["pass"].get<bool>();
  r.table.push_back(Json{{"N", N}, {"lambda", lambda}, {"q", ctx.q()},
                         {"max_residual", r.json["max_residual"]}, {"pass", r.json["pass"]}});
  return r;
}

// ---------------------------------------------------------------------------
// kernel

Result run_kernel(const Json& cfg) {
  const MomentumVector n = momentum_from(cfg);
  const double lambda = std::stod(need<std::string>(cfg, "lambda"));
  const ThetaContext ctx = *context_from(cfg, true);
  const std::vector<double> x = parse_list(need<std::string>(cfg, "x"));
  if (static_cast<int>(x.size()) != n.size()) {
    throw Error(ErrorKind::invalid_argument, "--x and --n must have the same length");
  }
  const QuadratureSpec quad{get<int>(cfg, "M", 32), get<double>(cfg, "epsilon", 0.0)};
  const auto est = cP_kernel_checked(x, n, lambda, ctx, quad, get<double>(cfg, "tol", 1e-10));
  Result r;
  r.json["context"] = context_json(ctx);
  r.json["n"] = momentum_json(n);
  r.json["x"] = x;
  r.json["lambda"] = lambda;
  r.json["value"] = complex_json(est.value);
  r.json["refinement_change"] = est.change;
  r.json["points_per_circle"] = est.points_per_circle;
  r.json["epsilon"] = quad.resolved_epsilon(ctx, n.size());
  r.table.push_back(Json{{"re", est.value.real()}, {"im", est.value.imag()},
                         {"refinement_change", est.change}});
  return r;
}

// ---------------------------------------------------------------------------
// fock-verify

Result run_fock_verify(const Json& cfg) {
  const int c = need<int>(cfg, "charge");
  const int L = need<int>(cfg, "level");
  const double lambda = std::stod(need<std::string>(cfg, "lambda"));
  const double tol = get<double>(cfg, "tol", 1e-10);
  const FockSector s = build_sector(c, L);
  const CMatrix h0 = op_H0(s, lambda).matrix;
  const CMatrix h = op_H(s, lambda).matrix;
  const CMatrix h3 = op_H3(s, lambda).matrix;
  const CMatrix w3 = op_W3(s, lambda).matrix;
  Result r;
  Json checks = Json::array();
  auto check = [&](const std::string& name, double value) {
    const bool pass = value <= tol;
    checks.push_back(Json{{"name", name}, {"value", value}, {"pass", pass}});
    r.table.push_back(checks.back());
    r.ok = r.ok && pass;
  };
  if (c == 0) {
    const int vac = s.index.at({});
    check("H_vacuum", h.col(vac).cwiseAbs().maxCoeff());
    check("H3_vacuum", h3.col(vac).cwiseAbs().maxCoeff());
    check("W3_vacuum", w3.col(vac).cwiseAbs().maxCoeff());
  }
  check("H0_H_commutator", commutator_norm(h0, h));
  check("Q_H_commutator", commutator_norm(op_Q(s).matrix, h));
  check("H_hermiticity", hermiticity_defect(s, h));
  check("H3_hermiticity", hermiticity_defect(s, h3));
  check("W3_hermiticity", hermiticity_defect(s, w3));
  check("H_off_level", off_level_norm(s, h));
  check("H3_off_level", off_level_norm(s, h3));
  check("C_off_level", off_level_norm(s, op_C(s).matrix));
  if (L <= 8) {
    const auto ops = genfun_operators(s, lambda, 3);
    check("genfun_H0", (ops[0] - op_Q(s).matrix).cwiseAbs().maxCoeff());
    check("genfun_H1", (ops[1] - h0).cwiseAbs().maxCoeff());
    check("genfun_H2", (ops[2] - h).cwiseAbs().maxCoeff());
    check("genfun_H3", (ops[3] - h3).cwiseAbs().maxCoeff());
  }
  r.json["checks"] = checks;
  Json levels = Json::array();
  for (int l = 0; l <= L; ++l) {
    levels.push_back(Json{{"level", l}, {"eigenvalues", block_eigenvalues(s, h, l)}});
  }
  r.json["H_eigenvalues"] = levels;
  if (c >= 1) {
    Json match = Json::array();
    for (const auto& m : spectral_match(c, lambda, L)) {
      match.push_back(Json{{"level", m.level},
                           {"candidates", m.candidates},
                           {"matched", m.matched},
                           {"unmatched", m.unmatched}});
    }
    r.json["spectral_match"] = match;
    r.json["spectral_shift"] = spectral_shift(c, lambda);
  }
  if (get<bool>(cfg, "conjectures", false)) {
    r.json["conjectures"] = Json{{"H_H3_commutator_norm", commutator_norm(h, h3)}};
  }
  r.json["sector"] = Json{{"charge", c}, {"level", L}, {"dim", s.dim()}};
  r.json["lambda"] = lambda;
  r.json["pass"] = r.ok;
  return r;
}

// ---------------------------------------------------------------------------
// genfun

template <class T>
Result genfun_impl(const T& lambda, int order) {
  const auto g = genfun_coeffs(lambda, order);
  Result r;
  Json v = Json::array();
  Json w = Json::array();
  for (int k = 1; k < static_cast<int>(g.v.size()); ++k) v.push_back(series_json(g.v[k]));
  for (const auto& ws : g.w) w.push_back(series_json(ws));
  r.json["v"] = v;
  r.json["w"] = w;
  r.json["prefactor"] = series_json(g.prefactor);
  const int bad = first_low_order_violation(g);
  r.json["w_low_order_violation"] = bad;
  r.ok = bad == -1;
  for (int s = 0; s < static_cast<int>(g.w.size()); ++s) {
    Json row{{"s", s}};
    for (int k = 0; k <= g.w[s].order(); ++k) row["a" + std::to_string(k)] = scalar_json(g.w[s][k]);
    r.table.push_back(row);
  }
  return r;
}

Result run_genfun(const Json& cfg) {
  const std::string lam = need<std::string>(cfg, "lambda");
  const int order = get<int>(cfg, "order", 6);
  Result r = looks_rational(lam) ? genfun_impl(parse_rational(lam), order)
                                 : genfun_impl(std::stod(lam), order);
  r.json["mode"] = looks_rational(lam) ? "exact" : "float";
  const int c = get<int>(cfg, "charge", -1);
  if (c >= 0) {
    const double lambda = std::stod(lam);
    const FockSector s = build_sector(c, get<int>(cfg, "level", 4));
    const int nmax = get<int>(cfg, "nmax", 3);
    const auto ops = genfun_operators(s, lambda, nmax);
    const CMatrix direct[] = {op_Q(s).matrix, op_H0(s, lambda).matrix, op_H(s, lambda).matrix,
                              op_H3(s, lambda).matrix};
    Json diffs = Json::array();
    for (int k = 0; k <= nmax; ++k) {
      diffs.push_back((ops[k] - direct[k]).cwiseAbs().maxCoeff());
    }
    r.json["operator_differences"] = diffs;
  }
  return r;
}

// ---------------------------------------------------------------------------
// verify

const std::map<std::string, Command>& commands();

// Re-evaluates psi from the stored coefficient table at the stored points and
// re-checks the residuals.
Json recheck_samples(const Json& doc, double tol) {
  const Json& cfg = doc["config"];
  const MomentumVector n = parse_momentum(need<std::string>(cfg, "n"));
  const double lambda = std::stod(need<std::string>(cfg, "lambda"));
  const std::string cmd = doc["command"].get<std::string>();
  const bool elliptic = cmd == "solve-elliptic";
  const QuadratureSpec quad{doc["quadrature"]["points_per_circle"].get<int>(), 0.0};
  EllipticEigenpair<double> pair;
  pair.n = n;
  pair.lambda = lambda;
  double q = 0.0;
  if (elliptic) {
    const Json& trunc = doc["truncation"];
    pair.K = trunc["K"].get<int>();
    pair.budget = trunc["budget"].get<int>();
    pair.lower = trunc["lowest_partial_sum"].get<int>();
    q = doc["evaluation"]["q"].get<double>();
  }
  auto read_series = [&](const Json& s) {
    QSeries<double> o(s["order"].get<int>());
    for (int k = 0; k <= o.order(); ++k) o[k] = json_to_double(s["coeffs"][k]);
    return o;
  };
  CoefficientTable<double> table;
  table.base = n;
  table.lambda = lambda;
  for (const Json& c : doc["coefficients"]) {
    const MomentumVector m(c["m"].get<std::vector<int>>());
    if (elliptic) {
      pair.coeffs.emplace(m, read_series(c["alpha"]));
    } else {
      table.entries.emplace(m, json_to_double(c["alpha"]));
    }
  }
  double energy = 0.0;
  if (elliptic) {
    pair.energy = read_series(doc["energy"]);
    energy = pair.energy.evaluate(q * q);
  } else {
    energy = json_to_double(doc["energy"]);
  }
  const ThetaContext ctx = ThetaContext::from_q(q);
  double worst = 0.0;
  double drift = 0.0;
  int vanishing = 0;
  for (const Json& s : doc["samples"]) {
    if (s["residual"].is_null()) {
      ++vanishing;
      continue;
    }
    const std::vector<double> x = s["x"].get<std::vector<double>>();
    const Jet psi = elliptic ? eigenfunction_elliptic(x, pair, q, quad, 1e300).psi
                             : eigenfunction_trig(x, table, quad);
    const double res = eigen_residual(psi, x, lambda, ctx, energy);
    worst = std::max(worst, res);
    drift = std::max(drift, std::abs(res - s["residual"].get<double>()));
  }
  return Json{{"max_residual", worst}, {"residual_drift", drift}, {"tol", tol},
              {"vanishing_samples", vanishing}, {"pass", worst <= tol && drift <= 1e-8}};
}

Result run_verify(const Json& cfg) {
  const std::string path = need<std::string>(cfg, "input");
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_argument, "cannot read " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::invalid_argument, std::string("bad JSON: ") + e.what());
  }
  if (!doc.contains("command") || !doc.contains("config")) {
    throw Error(ErrorKind::invalid_argument, "not an ecs result document");
  }
  const std::string cmd = doc["command"].get<std::string>();
  auto it = commands().find(cmd);
  if (it == commands().end() || cmd == "verify") {
    throw Error(ErrorKind::invalid_argument, "cannot verify command " + cmd);
  }
  Result r;
  r.json["input"] = path;
  r.json["command"] = cmd;
  Result again = it->second(doc["config"]);
  again.json["command"] = cmd;
  again.json["config"] = doc["config"];
  Json stored = doc;
  const bool same = stored == again.json;
  r.json["reproduced"] = same;
  r.ok = same;
  if (doc.contains("samples")) {
    const Json check = recheck_samples(doc, get<double>(cfg, "tol", 1e-4));
    r.json["residual_check"] = check;
    r.ok = r.ok && check["pass"].get<bool>();
  }
  r.json["pass"] = r.ok;
  r.table.push_back(Json{{"command", cmd}, {"reproduced", same}, {"pass", r.ok}});
  return r;
}

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table = {
      {"theta", run_theta},
      {"spectrum", run_spectrum},
      {"solve-trig", run_solve_trig},
      {"solve-elliptic", run_solve_elliptic},
      {"check-identity", run_check_identity},
      {"kernel", run_kernel},
      {"fock-verify", run_fock_verify},
      {"genfun", run_genfun},
      {"verify", run_verify},
  };
  return table;
}

// ---------------------------------------------------------------------------
// output

std::string csv_cell(const Json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv_cell(v[i]);
    return s;
  }
  return v.dump();
}

std::string render_csv(const Json& rows) {
  std::ostringstream out;
  if (rows.empty()) return "";
  std::vector<std::string> header;
  for (const auto& row : rows) {
    for (auto it = row.begin(); it != row.end(); ++it) {
      if (std::find(header.begin(), header.end(), it.key()) == header.end()) header.push_back(it.key());
    }
  }
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      out << (i ? "," : "");
      if (row.contains(header[i])) out << csv_cell(row[header[i]]);
    }
    out << "\n";
  }
  return out.str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(path, text);
  }
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::resonance:
      return 2;
    case ErrorKind::admissibility:
      return 3;
    case ErrorKind::convergence:
      return 4;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenfunctions of the (elliptic) Calogero-Sutherland system"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  std::string output;
  app.add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--output,-o", output, "write the result to this file (atomically)");

  Json cfg = Json::object();

  // Options are registered against std::optional holders and copied into the
  // config object after parsing.
  std::vector<std::function<void()>> copy_back;
  auto opt_str = [&](CLI::App* sub, const std::string& flag, const std::string& key,
                     const std::string& help, bool required = false) {
    auto holder = std::make_shared<std::string>();
    auto* o = sub->add_option(flag, *holder, help);
    if (required) o->required();
    copy_back.push_back([&cfg, holder, o, key, sub] {
      if (sub->parsed() && o->count() > 0) cfg[key] = *holder;
    });
  };
  auto opt_int = [&](CLI::App* sub, const std::string& flag, const std::string& key,
                     const std::string& help, bool required = false) {
    auto holder = std::make_shared<long long>(0);
    auto* o = sub->add_option(flag, *holder, help);
    if (required) o->required();
    copy_back.push_back([&cfg, holder, o, key, sub] {
      if (sub->parsed() && o->count() > 0) cfg[key] = *holder;
    });
  };
  auto opt_real = [&](CLI::App* sub, const std::string& flag, const std::string& key,
                      const std::string& help) {
    auto holder = std::make_shared<double>(0.0);
    auto* o = sub->add_option(flag, *holder, help);
    copy_back.push_back([&cfg, holder, o, key, sub] {
      if (sub->parsed() && o->count() > 0) cfg[key] = *holder;
    });
  };
  auto opt_flag = [&](CLI::App* sub, const std::string& flag, const std::string& key,
                      const std::string& help) {
    auto* o = sub->add_flag(flag, help);
    copy_back.push_back([&cfg, o, key, sub] {
      if (sub->parsed() && o->count() > 0) cfg[key] = true;
    });
  };
  auto nome = [&](CLI::App* sub) {
    opt_real(sub, "--q", "q", "nome q in [0, 1)");
    opt_real(sub, "--beta", "beta", "beta with q = exp(-beta/2)");
  };

  auto* theta = app.add_subcommand("theta", "theta function, log-derivatives and potential");
  nome(theta);
  opt_str(theta, "--r", "r", "comma-separated arguments");

  auto* spectrum = app.add_subcommand("spectrum", "pseudo-momenta and bare energy");
  opt_int(spectrum, "--N", "N", "particle number");
  opt_str(spectrum, "--lambda", "lambda", "coupling (p/q for exact mode)", true);
  opt_str(spectrum, "--n", "n", "momentum vector, e.g. 1,0", true);

  auto* trig = app.add_subcommand("solve-trig", "trigonometric eigenfunction");
  opt_int(trig, "--N", "N", "particle number");
  opt_str(trig, "--lambda", "lambda", "coupling (p/q for exact mode)", true);
  opt_str(trig, "--n", "n", "momentum vector", true);
  opt_int(trig, "--budget", "budget", "raise budget (default 4)");
  opt_int(trig, "--points", "points", "random sample points (default 0)");
  opt_int(trig, "--M", "M", "quadrature points per circle (default 32)");
  opt_int(trig, "--seed", "seed", "seed for sample points (default 1)");

  auto* ell = app.add_subcommand("solve-elliptic", "elliptic eigenvalue and coefficient series");
  opt_int(ell, "--N", "N", "particle number");
  opt_str(ell, "--lambda", "lambda", "coupling (p/q for exact mode)", true);
  opt_str(ell, "--n", "n", "momentum vector", true);
  opt_int(ell, "--K", "K", "q^2 order (default 2)");
  opt_int(ell, "--budget", "budget", "raise budget (default (N-1)K+4)");
  nome(ell);
  opt_int(ell, "--points", "points", "random sample points (needs --q or --beta)");
  opt_int(ell, "--M", "M", "quadrature points per circle (default 32)");
  opt_int(ell, "--seed", "seed", "seed for sample points (default 1)");
  opt_real(ell, "--tail-tol", "tail_tol", "largest accepted last-term magnitude (default 1)");
  opt_str(ell, "--route", "route", "energy route: joint (default), implicit or explicit");
  opt_flag(ell, "--check-routes", "check_routes", "also run the implicit and explicit eigenvalue routes");

  auto* ident = app.add_subcommand("check-identity", "functional identity at random points");
  opt_int(ident, "--N", "N", "particle number", true);
  opt_str(ident, "--lambda", "lambda", "coupling", true);
  nome(ident);
  opt_int(ident, "--trials", "trials", "number of point pairs (default 100)");
  opt_real(ident, "--tol", "tol", "residual tolerance (default 1e-7)");
  opt_int(ident, "--seed", "seed", "seed (default 1)");

  auto* kernel = app.add_subcommand("kernel", "contour-integral kernel P(x; n)");
  opt_int(kernel, "--N", "N", "particle number");
  opt_str(kernel, "--lambda", "lambda", "coupling", true);
  nome(kernel);
  opt_str(kernel, "--n", "n", "momentum vector", true);
  opt_str(kernel, "--x", "x", "comma-separated positions", true);
  opt_int(kernel, "--M", "M", "quadrature points per circle (default 32)");
  opt_real(kernel, "--epsilon", "epsilon", "contour spacing (default min(1, beta/(N+1)))");
  opt_real(kernel, "--tol", "tol", "refinement tolerance (default 1e-10)");

  auto* fock = app.add_subcommand("fock-verify", "operator checks on a Fock sector");
  opt_int(fock, "--charge", "charge", "charge c", true);
  opt_int(fock, "--level", "level", "maximal level L <= 12", true);
  opt_str(fock, "--lambda", "lambda", "coupling", true);
  opt_real(fock, "--tol", "tol", "check tolerance (default 1e-10)");
  opt_flag(fock, "--conjectures", "conjectures", "report the [H, H3] commutator norm");

  auto* gen = app.add_subcommand("genfun", "generating-functional coefficients");
  opt_str(gen, "--lambda", "lambda", "coupling (p/q for exact mode)", true);
  opt_int(gen, "--order", "order", "a-order, at most 8 (default 6)");
  opt_int(gen, "--charge", "charge", "also compare operators on this charge sector");
  opt_int(gen, "--level", "level", "sector level (default 4)");
  opt_int(gen, "--nmax", "nmax", "highest operator index, at most 3 (default 3)");

  auto* verify = app.add_subcommand("verify", "re-run and re-check a stored result");
  opt_str(verify, "--input", "input", "result JSON file", true);
  opt_real(verify, "--tol", "tol", "residual tolerance (default 1e-4)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  for (auto& f : copy_back) f();

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    Result r = commands().at(name)(cfg);
    r.json["command"] = name;
    r.json["config"] = cfg;
    emit(format == "csv" ? render_csv(r.table) : r.json.dump(2) + "\n", output);
    return r.ok ? 0 : 1;
  } catch (const Error& e) {
    const Json err{{"command", name},
                   {"config", cfg},
                   {"error", Json{{"kind", to_string(e.kind())}, {"message", e.what()}}}};
    std::cerr << "ecs: " << to_string(e.kind()) << ": " << e.what() << "\n";
    std::cout << err.dump(2) << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "ecs: " << e.what() << "\n";
    std::cout << Json{{"command", name}, {"error", Json{{"kind", "internal"}, {"message", e.what()}}}}.dump(2)
              << "\n";
    return 1;
  }
}
