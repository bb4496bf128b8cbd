// Copyright 2026 The ecs Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ECS_FOCK_HPP
#define ECS_FOCK_HPP

#include <Eigen/Dense>
#include <map>
#include <vector>

namespace ecs {

using CMatrix = Eigen::MatrixXcd;

/// States R^c rho(-mu_1) rho(-mu_2) ... Omega with |mu| <= L, graded by level
/// and in decreasing lex order within a level.
struct FockSector {
  int charge = 0;
  int max_level = 0;
  std::vector<std::vector<int>> basis;
  std::vector<int> level;
  /// prod_k k^{m_k} m_k! with m_k the multiplicity of part k
  std::vector<double> norm2;
  std::map<std::vector<int>, int> index;

  int dim() const { return static_cast<int>(basis.size()); }
  /// Indices of the level-l states.
  std::vector<int> level_indices(int l) const;
};

FockSector build_sector(int c, int L);

struct SectorOperator {
  CMatrix matrix;
  int level_shift = 0;
};

/// rho(n) on the sector; creation modes that leave the sector are dropped.
CMatrix rho_mode(const FockSector& s, int n);

SectorOperator op_Q(const FockSector& s);
/// lambda c^2/2 + level
SectorOperator op_H0(const FockSector& s, double lambda);
/// sum_i mu_i^2
SectorOperator op_C(const FockSector& s);
/// (1/3) sum_{a+b+c=0} :rho_a rho_b rho_c: with rho_0 = sqrt(lambda) Q
SectorOperator op_W3(const FockSector& s, double lambda);
/// sqrt(lambda) W3 - (3 lambda - 2) Q/12 + (1 - lambda) C + offset
SectorOperator op_H(const FockSector& s, double lambda, double offset = 0.0);
/// The quartic operator: local part (lambda/4):rho^4: + (1/4):rho'^2: -
/// (3 lambda - 2)/8 :rho^2: plus the non-local rho_-/rho_+ corrections,
/// averaged over an exact x-grid.
SectorOperator op_H3(const FockSector& s, double lambda);

/// Diagonal Gram matrix.
CMatrix gram(const FockSector& s);

/// max |G A - A^dagger G|
double hermiticity_defect(const FockSector& s, const CMatrix& a);
/// max |A_{ij}| over level(i) != level(j)
double off_level_norm(const FockSector& s, const CMatrix& a);
double commutator_norm(const CMatrix& a, const CMatrix& b);

/// Eigenvalues of the level-l block, computed on the Gram-orthonormalised
/// basis with a Hermitian solver; ascending.
std::vector<double> block_eigenvalues(const FockSector& s, const CMatrix& a, int l);

struct ZeroModeCalibration {
  /// Vacuum eigenvalue of H minus E0(0,...,0), fitted at lambda = 1 and 2.
  double fit_lambda1 = 0.0;
  double fit_lambda2 = 0.0;
  /// The frozen per-charge offset.
  double offset = 0.0;
};

ZeroModeCalibration calibrate_zero_mode(int charge);

struct LevelMatch {
  int level = 0;
  std::vector<double> eigenvalues;
  /// E0(n) for partitions n of the level with at most N parts.
  std::vector<double> candidates;
  std::vector<bool> matched;
  std::vector<double> unmatched;
};

/// Uniform shift of the charge-N spectrum relative to E0: N(lambda-1)(lambda-2)/12.
double spectral_shift(int N, double lambda);

/// Compares block spectra of H on (c = N, level <= L) against E0 + shift.
std::vector<LevelMatch> spectral_match(int N, double lambda, int L, double tol = 1e-8);

}  // namespace ecs

#endif  // ECS_FOCK_HPP
