#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "freeproj/ncpoly.hpp"
#include "freeproj/subspace.hpp"

namespace freeproj {

// Joint canonical decomposition of K^n under a pair of projections (P, Q)
// with principal angles between their ranges E and F:
//   - m copies of the block (1, 1)             directions in E inter F
//   - one 2x2 angle block per nonzero angle    P = [[1,0],[0,0]], Q = Q(theta)
//   - count_10 copies of (1, 0)                rest of E
//   - count_01 copies of (0, 1)                rest of F
//   - count_00 copies of (0, 0)                complement of E + F
// Multiplicities always add up to n.
struct BlockDecomposition {
  int n = 0;
  int k = 0;
  int l = 0;
  int m = 0;  // dim(E inter F), the zero-classified angles
  std::vector<double> nonzero_angles;  // in (0, pi/2], nondecreasing
  int count_10 = 0;
  int count_01 = 0;
  int count_00 = 0;
};

BlockDecomposition block_structure(int n, int k, int l, const PrincipalAngleSpectrum& spectrum);

// Eigenvalues merged to distinct values with multiplicities. Values closer
// than kEigenvalueMergeTol are merged (mass-weighted location).
inline constexpr double kEigenvalueMergeTol = 1e-10;

struct SpectrumWithMultiplicity {
  std::vector<std::pair<double, int>> entries;  // strictly increasing values

  int total_multiplicity() const;
  std::vector<double> expand() const;  // values repeated by multiplicity
};

SpectrumWithMultiplicity make_spectrum(std::vector<std::pair<double, int>> raw);

// Exact spectrum of a self-adjoint polynomial in (P, Q) on K^n, assembled
// block by block: the scalar blocks contribute poly(a, b) for
// (a, b) in {0,1}^2 and each angle block contributes the two eigenvalues of
// the 2x2 evaluation. Throws if the polynomial is not self-adjoint or the
// decomposition is inconsistent.
SpectrumWithMultiplicity exact_spectrum(const NCPolynomial& poly, const BlockDecomposition& blocks);

// Closed-form spectra of the four classical polynomials, written directly in
// terms of the angles (r nonzero angles, m zero angles):
//   PQP:          {0 ^ (n-m-r)} u {cos^2 theta_i} u {1 ^ m}
//   P + Q:        {0 ^ count_00} u {1 -+ cos theta_i} u {1 ^ (count_10+count_01)} u {2 ^ m}
//   i(PQ - QP):   {-cos sin} u {0 ^ (n - 2r)} u {+cos sin}
//   PQ + QP:      {cos^2 - cos} u {0 ^ (n - m - 2r)} u {cos^2 + cos} u {2 ^ m}
SpectrumWithMultiplicity spectrum_pqp(const BlockDecomposition& blocks);
SpectrumWithMultiplicity spectrum_sum(const BlockDecomposition& blocks);
SpectrumWithMultiplicity spectrum_commutator(const BlockDecomposition& blocks);
SpectrumWithMultiplicity spectrum_anticommutator(const BlockDecomposition& blocks);

// The two eigenvalues of P + QPQ on an angle block, ascending:
//   (1 + c -+ sqrt(5c^2 - 2c + 1)) / 2  with  c = cos^2 theta.
// At theta = 0 this gives (0, 2); at theta = pi/2 it gives (0, 1).
std::pair<double, double> eigs_p_plus_qpq(double theta);

}  // namespace freeproj
