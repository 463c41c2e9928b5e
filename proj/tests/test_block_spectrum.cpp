#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "freeproj/block_spectrum.hpp"
#include "freeproj/ncpoly.hpp"
#include "freeproj/subspace.hpp"

using namespace freeproj;

namespace {

constexpr double kPi = std::numbers::pi;

// Dense reference: evaluate the polynomial on the projectors and diagonalize.
std::vector<double> dense_eigenvalues(const NCPolynomial& poly, const Subspace& e,
                                      const Subspace& f) {
  const Eigen::MatrixXcd m = poly.evaluate(projector(e), projector(f));
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  REQUIRE(solver.info() == Eigen::Success);
  std::vector<double> out(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

BlockDecomposition blocks_for(const Subspace& e, const Subspace& f) {
  return block_structure(e.ambient, e.dim, f.dim, principal_angles(e, f));
}

}  // namespace

TEST_CASE("make_spectrum_sorts_merges_and_validates") {
  const SpectrumWithMultiplicity s =
      make_spectrum({{0.5 + 5e-11, 3}, {0.5, 2}, {1.0, 1}, {0.2, 0}});
  REQUIRE(s.entries.size() == 2);
  CHECK(s.entries[0].second == 5);
  CHECK(std::abs(s.entries[0].first - (0.5 + 3e-11)) < 1e-15);
  CHECK(s.entries[1] == std::pair<double, int>(1.0, 1));
  CHECK(s.total_multiplicity() == 6);

  const std::vector<double> flat = s.expand();
  REQUIRE(flat.size() == 6);
  CHECK(flat[0] == flat[4]);
  CHECK(flat[5] == 1.0);

  CHECK_THROWS_AS(make_spectrum({{0.0, -1}}), std::invalid_argument);
  CHECK_THROWS_AS(make_spectrum({{std::nan(""), 1}}), std::invalid_argument);
}

TEST_CASE("block_structure_counts_add_up") {
  for (auto [n, k, l] : std::vector<std::array<int, 3>>{
           {10, 7, 8}, {12, 3, 4}, {9, 0, 5}, {9, 9, 4}, {8, 4, 4}}) {
    const Subspace e = haar_subspace(n, k, 100 + static_cast<std::uint64_t>(n), Field::Complex);
    const Subspace f = haar_subspace(n, l, 200 + static_cast<std::uint64_t>(n), Field::Complex);
    const BlockDecomposition b = blocks_for(e, f);
    const int r = static_cast<int>(b.nonzero_angles.size());
    CHECK(b.m + r + b.count_10 == k);
    CHECK(b.m + r + b.count_01 == l);
    CHECK(b.m + 2 * r + b.count_10 + b.count_01 + b.count_00 == n);
    for (double t : b.nonzero_angles) {
      CHECK(t > 0.0);
      CHECK(t <= kPi / 2.0);
    }
  }
}

TEST_CASE("closed_form_spectra_match_exact_spectrum_of_their_polynomials") {
  const Subspace e = haar_subspace(14, 6, 7, Field::Real);
  const Subspace f = haar_subspace(14, 9, 8, Field::Real);
  const BlockDecomposition b = blocks_for(e, f);

  CHECK(max_diff(spectrum_pqp(b).expand(), exact_spectrum(parse_ncpoly("p*q*p"), b).expand()) <
        1e-13);
  CHECK(max_diff(spectrum_sum(b).expand(), exact_spectrum(parse_ncpoly("p+q"), b).expand()) <
        1e-13);
  CHECK(max_diff(spectrum_commutator(b).expand(),
                 exact_spectrum(parse_ncpoly("i*(p*q-q*p)"), b).expand()) < 1e-13);
  CHECK(max_diff(spectrum_anticommutator(b).expand(),
                 exact_spectrum(parse_ncpoly("p*q+q*p"), b).expand()) < 1e-13);
}

TEST_CASE("closed_form_spectra_match_the_dense_oracle") {
  std::uint64_t seed = 5000;
  for (auto [n, k, l] : std::vector<std::array<int, 3>>{{12, 5, 9}, {15, 7, 7}, {10, 10, 4}}) {
    const Subspace e = haar_subspace(n, k, seed++, Field::Complex);
    const Subspace f = haar_subspace(n, l, seed++, Field::Complex);
    const BlockDecomposition b = blocks_for(e, f);
    CHECK(max_diff(spectrum_pqp(b).expand(), dense_eigenvalues(parse_ncpoly("p*q*p"), e, f)) <
          1e-10);
    CHECK(max_diff(spectrum_sum(b).expand(), dense_eigenvalues(parse_ncpoly("p+q"), e, f)) <
          1e-10);
    CHECK(max_diff(spectrum_commutator(b).expand(),
                   dense_eigenvalues(parse_ncpoly("i*(p*q-q*p)"), e, f)) < 1e-10);
    CHECK(max_diff(spectrum_anticommutator(b).expand(),
                   dense_eigenvalues(parse_ncpoly("p*q+q*p"), e, f)) < 1e-10);
  }
}

TEST_CASE("generic_polynomials_match_the_dense_oracle") {
  const NCPolynomial p_plus_qpq = parse_ncpoly("p+q*p*q");
  const NCPolynomial deg4 = parse_ncpoly("p*q*p*q+q*p*q*p");
  std::uint64_t seed = 6000;
  for (auto [n, k, l] : std::vector<std::array<int, 3>>{{11, 4, 6}, {13, 8, 9}, {9, 3, 3}}) {
    for (Field field : {Field::Real, Field::Complex}) {
      const Subspace e = haar_subspace(n, k, seed++, field);
      const Subspace f = haar_subspace(n, l, seed++, field);
      const BlockDecomposition b = blocks_for(e, f);
      CHECK(max_diff(exact_spectrum(p_plus_qpq, b).expand(), dense_eigenvalues(p_plus_qpq, e, f)) <
            1e-10);
      CHECK(max_diff(exact_spectrum(deg4, b).expand(), dense_eigenvalues(deg4, e, f)) < 1e-10);
    }
  }
}

TEST_CASE("exact_spectrum_rejects_non_self_adjoint_polynomials") {
  const Subspace e = haar_subspace(6, 2, 1, Field::Real);
  const Subspace f = haar_subspace(6, 3, 2, Field::Real);
  const BlockDecomposition b = blocks_for(e, f);
  CHECK_THROWS_AS(exact_spectrum(parse_ncpoly("p*q"), b), std::invalid_argument);
}

TEST_CASE("exact_spectrum_of_constants_and_edge_dimensions") {
  // k = 0: PQP is identically zero.
  const Subspace e0 = haar_subspace(7, 0, 3, Field::Real);
  const Subspace f = haar_subspace(7, 4, 4, Field::Real);
  const BlockDecomposition b0 = blocks_for(e0, f);
  const SpectrumWithMultiplicity s0 = exact_spectrum(parse_ncpoly("p*q*p"), b0);
  REQUIRE(s0.entries.size() == 1);
  CHECK(s0.entries[0] == std::pair<double, int>(0.0, 7));

  // Constant polynomial: single eigenvalue n times.
  const SpectrumWithMultiplicity sc = exact_spectrum(parse_ncpoly("3"), b0);
  REQUIRE(sc.entries.size() == 1);
  CHECK(sc.entries[0] == std::pair<double, int>(3.0, 7));
}

TEST_CASE("sum_spectrum_lies_in_zero_two_with_correct_multiplicities") {
  // k + l > n forces eigenvalue 2 with multiplicity k + l - n on P + Q.
  const Subspace e = haar_subspace(10, 7, 11, Field::Real);
  const Subspace f = haar_subspace(10, 8, 12, Field::Real);
  const SpectrumWithMultiplicity s = spectrum_sum(blocks_for(e, f));
  CHECK(s.entries.front().first >= 0.0);
  CHECK(s.entries.back().first == 2.0);
  CHECK(s.entries.back().second == 5);
}

TEST_CASE("eigs_p_plus_qpq_endpoints_and_frozen_interior_value") {
  const auto [a0, b0] = eigs_p_plus_qpq(0.0);
  CHECK(std::abs(a0 - 0.0) < 1e-15);
  CHECK(std::abs(b0 - 2.0) < 1e-15);

  const auto [a1, b1] = eigs_p_plus_qpq(kPi / 2.0);
  CHECK(std::abs(a1 - 0.0) < 1e-15);
  CHECK(std::abs(b1 - 1.0) < 1e-15);

  // theta = pi/3: c = 1/4, eigenvalues (5 -+ sqrt(13)) / 8.
  const auto [lo, hi] = eigs_p_plus_qpq(kPi / 3.0);
  CHECK(std::abs(lo - 0.17430609056700134) < 1e-13);
  CHECK(std::abs(hi - 1.0756939094329987) < 1e-13);

  // They are the eigenvalues of the 2x2 angle-block evaluation.
  const Eigen::Matrix2cd m = evaluate_on_angle_block(parse_ncpoly("p+q*p*q"), kPi / 3.0);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(m, Eigen::EigenvaluesOnly);
  CHECK(std::abs(lo - solver.eigenvalues()(0)) < 1e-14);
  CHECK(std::abs(hi - solver.eigenvalues()(1)) < 1e-14);
}

TEST_CASE("block_structure_validates_its_inputs") {
  PrincipalAngleSpectrum s;
  s.angles = {0.3};
  s.k = 2;  // min(k, l) = 2 but only one angle given
  s.l = 3;
  s.n = 6;
  CHECK_THROWS_AS(block_structure(6, 2, 3, s), std::invalid_argument);
}
