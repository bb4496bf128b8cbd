// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#include "ecs/fock.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "ecs/error.hpp"
#include "ecs/spectrum.hpp"

namespace ecs {

namespace {

constexpr std::complex<double> kI(0.0, 1.0);

void partitions_of(int left, int max_part, std::vector<int>& cur,
                   std::vector<std::vector<int>>& out) {
  if (left == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(left, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_of(left - p, p, cur, out);
    cur.pop_back();
  }
}

CMatrix identity(const FockSector& s) { return CMatrix::Identity(s.dim(), s.dim()); }

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::vector<int> FockSector::level_indices(int l) const {
  std::vector<int> out;
  for (int i = 0; i < dim(); ++i) {
    if (level[i] == l) out.push_back(i);
  }
  return out;
}

FockSector build_sector(int c, int L) {
  if (L < 0 || L > 12) throw Error(ErrorKind::size_overflow, "Fock sectors are limited to L <= 12");
  FockSector s;
  s.charge = c;
  s.max_level = L;
  for (int l = 0; l <= L; ++l) {
    std::vector<int> cur;
    std::vector<std::vector<int>> parts;
    partitions_of(l, l, cur, parts);
    for (auto& p : parts) {
      double n2 = 1.0;
      for (int k = 1; k <= l; ++k) {
        const int mult = static_cast<int>(std::count(p.begin(), p.end(), k));
        n2 *= std::pow(static_cast<double>(k), mult) * factorial(mult);
      }
      s.index.emplace(p, s.dim());
      s.basis.push_back(std::move(p));
      s.level.push_back(l);
      s.norm2.push_back(n2);
    }
  }
  return s;
}

CMatrix rho_mode(const FockSector& s, int n) {
  CMatrix m = CMatrix::Zero(s.dim(), s.dim());
  for (int i = 0; i < s.dim(); ++i) {
    const std::vector<int>& p = s.basis[i];
    if (n < 0) {
      std::vector<int> q = p;
      q.insert(std::upper_bound(q.begin(), q.end(), -n, std::greater<int>()), -n);
      auto it = s.index.find(q);
      if (it != s.index.end()) m(it->second, i) = 1.0;
    } else if (n > 0) {
      auto pos = std::find(p.begin(), p.end(), n);
      if (pos == p.end()) continue;
      const int mult = static_cast<int>(std::count(p.begin(), p.end(), n));
      std::vector<int> q = p;
      q.erase(q.begin() + (pos - p.begin()));
      m(s.index.at(q), i) = static_cast<double>(n * mult);
    } else {
      m(i, i) = s.charge;
    }
  }
  return m;
}

SectorOperator op_Q(const FockSector& s) { return {identity(s) * double(s.charge), 0}; }

SectorOperator op_H0(const FockSector& s, double lambda) {
  CMatrix m = CMatrix::Zero(s.dim(), s.dim());
  for (int i = 0; i < s.dim(); ++i) {
    m(i, i) = 0.5 * lambda * s.charge * s.charge + s.level[i];
  }
  return {m, 0};
}

SectorOperator op_C(const FockSector& s) {
  CMatrix m = CMatrix::Zero(s.dim(), s.dim());
  for (int i = 0; i < s.dim(); ++i) {
    double v = 0.0;
    for (int part : s.basis[i]) v += double(part) * part;
    m(i, i) = v;
  }
  return {m, 0};
}

SectorOperator op_W3(const FockSector& s, double lambda) {
  const int L = s.max_level;
  std::map<int, CMatrix> rho;
  for (int n = -L; n <= L; ++n) rho.emplace(n, rho_mode(s, n));
  rho[0] = std::sqrt(lambda) * rho[0];
  CMatrix m = CMatrix::Zero(s.dim(), s.dim());
  for (int a = -L; a <= L; ++a) {
    for (int b = -L; b <= L; ++b) {
      const int c = -a - b;
      if (c < -L || c > L) continue;
      // normal order: creation modes left, annihilation modes right
      int modes[3] = {a, b, c};
      std::sort(modes, modes + 3);
      m += rho.at(modes[0]) * rho.at(modes[1]) * rho.at(modes[2]);
    }
  }
  return {m / 3.0, 0};
}

SectorOperator op_H(const FockSector& s, double lambda, double offset) {
  CMatrix m = std::sqrt(lambda) * op_W3(s, lambda).matrix -
              (3.0 * lambda - 2.0) / 12.0 * op_Q(s).matrix + (1.0 - lambda) * op_C(s).matrix +
              offset * identity(s);
  return {m, 0};
}

SectorOperator op_H3(const FockSector& s, double lambda) {
  const int L = s.max_level;
  const int dim = s.dim();
  const double sl = std::sqrt(lambda);
  const std::complex<double> Z = sl * s.charge;
  std::vector<CMatrix> create(L + 1);
  std::vector<CMatrix> annihilate(L + 1);
  for (int n = 1; n <= L; ++n) {
    create[n] = rho_mode(s, -n);
    annihilate[n] = rho_mode(s, n);
  }
  const CMatrix I = identity(s);
  const int grid = 8 * L + 8;
  CMatrix acc = CMatrix::Zero(dim, dim);
  for (int g = 0; g < grid; ++g) {
    const double x = 2.0 * std::numbers::pi * g / grid;
    CMatrix rc = CMatrix::Zero(dim, dim), ra = rc, rcp = rc, rap = rc, rapp = rc;
    for (int n = 1; n <= L; ++n) {
      const std::complex<double> em = std::exp(-kI * double(n * x));
      const std::complex<double> ep = std::exp(kI * double(n * x));
      rc += create[n] * em;
      ra += annihilate[n] * ep;
      rcp += create[n] * (-kI * double(n) * em);
      rap += annihilate[n] * (kI * double(n) * ep);
      rapp += annihilate[n] * (-double(n) * n * ep);
    }
    std::vector<CMatrix> rc_pow(5, I), ra_pow(5, I);
    for (int p = 1; p <= 4; ++p) {
      rc_pow[p] = rc_pow[p - 1] * rc;
      ra_pow[p] = ra_pow[p - 1] * ra;
    }
    // :(Z + rc + ra)^p:
    auto normal_power = [&](int p) {
      CMatrix r = CMatrix::Zero(dim, dim);
      for (int i = 0; i <= p; ++i) {
        for (int j = 0; i + j <= p; ++j) {
          const int k = p - i - j;
          const double coef = factorial(p) / (factorial(i) * factorial(j) * factorial(k));
          r += coef * std::pow(Z, i) * rc_pow[j] * ra_pow[k];
        }
      }
      return r;
    };
    const CMatrix dsq = rcp * rcp + 2.0 * rcp * rap + rap * rap;
    const CMatrix local =
        lambda / 4.0 * normal_power(4) + 0.25 * dsq - (3.0 * lambda - 2.0) / 8.0 * normal_power(2);
    const CMatrix rm = Z / 2.0 * I + rc;
    const CMatrix rp = Z / 2.0 * I + ra;
    const CMatrix nonlocal =
        1.5 * kI * sl * (lambda - 1.0) * (rm * (2.0 * rp * rap) + rm * rm * rap) -
        0.5 * (2.0 * lambda - 1.0) * (lambda - 1.0) * rm * rapp;
    acc += local + nonlocal;
  }
  return {acc / double(grid), 0};
}

CMatrix gram(const FockSector& s) {
  CMatrix g = CMatrix::Zero(s.dim(), s.dim());
  for (int i = 0; i < s.dim(); ++i) g(i, i) = s.norm2[i];
  return g;
}

double hermiticity_defect(const FockSector& s, const CMatrix& a) {
  const CMatrix g = gram(s);
  return (g * a - a.adjoint() * g).cwiseAbs().maxCoeff();
}

double off_level_norm(const FockSector& s, const CMatrix& a) {
  double v = 0.0;
  for (int i = 0; i < s.dim(); ++i) {
    for (int j = 0; j < s.dim(); ++j) {
      if (s.level[i] != s.level[j]) v = std::max(v, std::abs(a(i, j)));
    }
  }
  return v;
}

double commutator_norm(const CMatrix& a, const CMatrix& b) {
  if (a.size() == 0) return 0.0;
  return (a * b - b * a).cwiseAbs().maxCoeff();
}

std::vector<double> block_eigenvalues(const FockSector& s, const CMatrix& a, int l) {
  const std::vector<int> idx = s.level_indices(l);
  const int d = static_cast<int>(idx.size());
  CMatrix h(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      h(r, c) = std::sqrt(s.norm2[idx[r]]) * a(idx[r], idx[c]) / std::sqrt(s.norm2[idx[c]]);
    }
  }
  const CMatrix herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
  std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + d);
  std::sort(ev.begin(), ev.end());
  return ev;
}

namespace {

double vacuum_offset(int charge, double lambda) {
  const FockSector s = build_sector(charge, 0);
  const double vac = op_H(s, lambda).matrix(0, 0).real();
  if (charge <= 0) return vac;
  return vac - bare_energy(MomentumVector(std::vector<int>(charge, 0)), lambda);
}

}  // namespace

ZeroModeCalibration calibrate_zero_mode(int charge) {
  ZeroModeCalibration cal;
  cal.fit_lambda1 = vacuum_offset(charge, 1.0);
  cal.fit_lambda2 = vacuum_offset(charge, 2.0);
  cal.offset = std::abs(cal.fit_lambda1 - cal.fit_lambda2) < 1e-12 ? cal.fit_lambda1
                                                                   : 0.5 * (cal.fit_lambda1 + cal.fit_lambda2);
  return cal;
}

double spectral_shift(int N, double lambda) {
  return N * (lambda - 1.0) * (lambda - 2.0) / 12.0;
}

std::vector<LevelMatch> spectral_match(int N, double lambda, int L, double tol) {
  if (N < 1) throw Error(ErrorKind::invalid_argument, "spectral match needs charge N >= 1");
  const FockSector s = build_sector(N, L);
  const ZeroModeCalibration cal = calibrate_zero_mode(N);
  const CMatrix h = op_H(s, lambda, -cal.offset).matrix;
  const double shift = spectral_shift(N, lambda);
  std::vector<LevelMatch> out;
  for (int l = 0; l <= L; ++l) {
    LevelMatch lm;
    lm.level = l;
    lm.eigenvalues = block_eigenvalues(s, h, l);
    std::vector<bool> used(lm.eigenvalues.size(), false);
    for (const MomentumVector& n : partitions_padded(l, N)) {
      const double e = bare_energy(n, lambda) + shift;
      lm.candidates.push_back(e);
      bool found = false;
      for (std::size_t i = 0; i < lm.eigenvalues.size(); ++i) {
        if (!used[i] && std::abs(lm.eigenvalues[i] - e) <= tol * std::max(1.0, std::abs(e))) {
          used[i] = true;
          found = true;
          break;
        }
      }
      lm.matched.push_back(found);
    }
    for (std::size_t i = 0; i < lm.eigenvalues.size(); ++i) {
      if (!used[i]) lm.unmatched.push_back(lm.eigenvalues[i]);
    }
    out.push_back(std::move(lm));
  }
  return out;
}

}  // namespace ecs
