#include "freeproj/block_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace freeproj {

namespace {

// An angle counts as zero when its cosine is within tol of 1; that matches
// the classification used by principal_angles, whose zero angles are snapped
// to exactly 0 (cos = 1). Right angles stay 2x2 blocks: the block formulas
// remain valid at theta = pi/2.
bool is_zero_angle(double theta, double tol) { return 1.0 - std::cos(theta) <= tol; }

double real_part_checked(const std::complex<double>& z) {
  if (std::abs(z.imag()) > 1e-12) {
    throw std::invalid_argument("scalar evaluation of a self-adjoint polynomial came out complex");
  }
  return z.real();
}

// Eigenvalues of a hermitian 2x2 matrix by the quadratic formula; the
// discriminant sqrt((a-d)^2 + 4|b|^2) is evaluated with hypot for stability.
std::pair<double, double> hermitian_2x2_eigs(const Eigen::Matrix2cd& m) {
  const Eigen::Matrix2cd h = 0.5 * (m + m.adjoint());
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const double b = std::abs(h(0, 1));
  const double tr = a + d;
  const double disc = std::hypot(a - d, 2.0 * b);
  return {(tr - disc) / 2.0, (tr + disc) / 2.0};
}

}  // namespace

BlockDecomposition block_structure(int n, int k, int l, const PrincipalAngleSpectrum& spectrum) {
  if (n < 1 || k < 0 || l < 0 || k > n || l > n) {
    throw std::invalid_argument("block_structure requires 0 <= k, l <= n");
  }
  if (static_cast<int>(spectrum.angles.size()) != std::min(k, l)) {
    throw std::invalid_argument("angle count does not match min(k, l)");
  }
  BlockDecomposition b;
  b.n = n;
  b.k = k;
  b.l = l;
  for (double theta : spectrum.angles) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0)) {
      throw std::invalid_argument("angles must lie in [0, pi/2]");
    }
    if (is_zero_angle(theta, spectrum.tol_zero)) {
      ++b.m;
    } else {
      b.nonzero_angles.push_back(theta);
    }
  }
  std::sort(b.nonzero_angles.begin(), b.nonzero_angles.end());
  const int r = static_cast<int>(b.nonzero_angles.size());
  b.count_10 = k - b.m - r;
  b.count_01 = l - b.m - r;
  b.count_00 = n - k - l + b.m;
  if (b.count_10 < 0 || b.count_01 < 0 || b.count_00 < 0) {
    throw std::invalid_argument("inconsistent dimensions: block counts would be negative");
  }
  return b;
}

int SpectrumWithMultiplicity::total_multiplicity() const {
  int sum = 0;
  for (const auto& [value, mult] : entries) sum += mult;
  return sum;
}

std::vector<double> SpectrumWithMultiplicity::expand() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(total_multiplicity()));
  for (const auto& [value, mult] : entries) {
    for (int i = 0; i < mult; ++i) out.push_back(value);
  }
  return out;
}

SpectrumWithMultiplicity make_spectrum(std::vector<std::pair<double, int>> raw) {
  SpectrumWithMultiplicity out;
  std::erase_if(raw, [](const auto& e) { return e.second == 0; });
  for (const auto& [value, mult] : raw) {
    if (mult < 0) throw std::invalid_argument("negative multiplicity");
    if (!std::isfinite(value)) throw std::invalid_argument("non-finite eigenvalue");
  }
  std::sort(raw.begin(), raw.end());
  // Merge runs of consecutive values closer than the tolerance; the merged
  // location is the multiplicity-weighted mean.
  std::size_t i = 0;
  while (i < raw.size()) {
    double sum = raw[i].first * raw[i].second;
    int mult = raw[i].second;
    std::size_t j = i + 1;
    while (j < raw.size() && raw[j].first - raw[j - 1].first <= kEigenvalueMergeTol) {
      sum += raw[j].first * raw[j].second;
      mult += raw[j].second;
      ++j;
    }
    out.entries.emplace_back(sum / mult, mult);
    i = j;
  }
  return out;
}

SpectrumWithMultiplicity exact_spectrum(const NCPolynomial& poly,
                                        const BlockDecomposition& blocks) {
  if (!poly.is_self_adjoint()) {
    throw std::invalid_argument("exact_spectrum requires a self-adjoint polynomial");
  }
  std::vector<std::pair<double, int>> raw;
  if (blocks.m > 0) raw.emplace_back(real_part_checked(poly.evaluate_scalar(1.0, 1.0)), blocks.m);
  if (blocks.count_10 > 0) {
    raw.emplace_back(real_part_checked(poly.evaluate_scalar(1.0, 0.0)), blocks.count_10);
  }
  if (blocks.count_01 > 0) {
    raw.emplace_back(real_part_checked(poly.evaluate_scalar(0.0, 1.0)), blocks.count_01);
  }
  if (blocks.count_00 > 0) {
    raw.emplace_back(real_part_checked(poly.evaluate_scalar(0.0, 0.0)), blocks.count_00);
  }
  for (double theta : blocks.nonzero_angles) {
    const auto [lo, hi] = hermitian_2x2_eigs(evaluate_on_angle_block(poly, theta));
    raw.emplace_back(lo, 1);
    raw.emplace_back(hi, 1);
  }
  SpectrumWithMultiplicity out = make_spectrum(std::move(raw));
  if (out.total_multiplicity() != blocks.n) {
    throw std::logic_error("spectrum multiplicities do not add up to n");
  }
  return out;
}

SpectrumWithMultiplicity spectrum_pqp(const BlockDecomposition& blocks) {
  // Valid for PQP and QPQ alike: both have the same spectrum, so no swap
  // convention is needed.
  const int r = static_cast<int>(blocks.nonzero_angles.size());
  std::vector<std::pair<double, int>> raw;
  raw.emplace_back(0.0, blocks.n - blocks.m - r);
  for (double theta : blocks.nonzero_angles) {
    const double c = std::cos(theta);
    raw.emplace_back(c * c, 1);
  }
  raw.emplace_back(1.0, blocks.m);
  return make_spectrum(std::move(raw));
}

SpectrumWithMultiplicity spectrum_sum(const BlockDecomposition& blocks) {
  std::vector<std::pair<double, int>> raw;
  raw.emplace_back(0.0, blocks.count_00);
  raw.emplace_back(1.0, blocks.count_10 + blocks.count_01);
  raw.emplace_back(2.0, blocks.m);
  for (double theta : blocks.nonzero_angles) {
    const double c = std::cos(theta);
    raw.emplace_back(1.0 - c, 1);
    raw.emplace_back(1.0 + c, 1);
  }
  return make_spectrum(std::move(raw));
}

SpectrumWithMultiplicity spectrum_commutator(const BlockDecomposition& blocks) {
  const int r = static_cast<int>(blocks.nonzero_angles.size());
  std::vector<std::pair<double, int>> raw;
  raw.emplace_back(0.0, blocks.n - 2 * r);
  for (double theta : blocks.nonzero_angles) {
    const double cs = std::cos(theta) * std::sin(theta);
    raw.emplace_back(-cs, 1);
    raw.emplace_back(cs, 1);
  }
  return make_spectrum(std::move(raw));
}

SpectrumWithMultiplicity spectrum_anticommutator(const BlockDecomposition& blocks) {
  const int r = static_cast<int>(blocks.nonzero_angles.size());
  std::vector<std::pair<double, int>> raw;
  raw.emplace_back(0.0, blocks.n - blocks.m - 2 * r);
  raw.emplace_back(2.0, blocks.m);
  for (double theta : blocks.nonzero_angles) {
    const double c = std::cos(theta);
    raw.emplace_back(c * c - c, 1);
    raw.emplace_back(c * c + c, 1);
  }
  return make_spectrum(std::move(raw));
}

std::pair<double, double> eigs_p_plus_qpq(double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0)) {
    throw std::domain_error("angle must lie in [0, pi/2]");
  }
  const double c = std::cos(theta);
  const double cc = c * c;
  const double disc = std::sqrt(std::max(5.0 * cc * cc - 2.0 * cc + 1.0, 0.0));
  return {(1.0 + cc - disc) / 2.0, (1.0 + cc + disc) / 2.0};
}

}  // namespace freeproj
