#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "freeproj/limit_laws.hpp"
#include "freeproj/ncpoly.hpp"
#include "freeproj/subspace.hpp"

namespace freeproj {

enum class SpectrumPath { ExactBlocks, DenseOracle };

const char* path_name(SpectrumPath p);
SpectrumPath path_from_name(const std::string& name);

// Named spectral targets. "poly" means config.poly is used directly.
// polynomial_for_target throws for "angles", which is not a polynomial target.
std::vector<std::string> known_targets();
NCPolynomial polynomial_for_target(const std::string& target);
SpectralLaw law_for_target(const std::string& target, double alpha, double beta);

struct ExperimentConfig {
  int n = 0;
  int k = 0;
  int l = 0;
  long long trials = 1;
  std::uint64_t seed = 0;
  Field field = Field::Real;
  std::string target = "pqp";  // named target, or "poly" with poly set
  NCPolynomial poly;
  SpectrumPath path = SpectrumPath::ExactBlocks;
  double tol_zero = kDefaultAngleTol;
  int threads = 0;  // 0 = hardware concurrency
};

// Pooled samples, sorted ascending. For eigenvalue targets every trial
// contributes n samples of weight 1/(n * trials) (total mass 1); the angle
// target contributes only the nonzero angles with the same weight, so the
// total mass approaches min(k, l, n-k, n-l)/n.
struct EmpiricalDistribution {
  std::vector<double> samples;
  double weight_per_sample = 0.0;
  double total_mass = 0.0;
};

// Runs the experiment. Per-trial streams are derived from seed XOR trial
// index, so results do not depend on scheduling order. The exact-blocks path
// computes principal angles and assembles the block spectrum; the dense
// oracle path (n <= 500) evaluates the polynomial on the projectors and
// diagonalizes it.
EmpiricalDistribution empirical_spectrum(const ExperimentConfig& config);

// Kolmogorov-Smirnov distance between the empirical (sub-)distribution and
// the law, as unnormalized CDFs: sup over sample points and atom locations of
// the one-sided differences.
double ks_distance(const EmpiricalDistribution& emp, const SpectralLaw& law);

// L1 distance between the CDFs (equals the 1-Wasserstein distance when total
// masses agree), by trapezoid sums over a grid refined with the law's
// edge-clustered points.
double w1_distance(const EmpiricalDistribution& emp, const SpectralLaw& law);

struct DistanceReport {
  double ks = 0.0;
  double w1 = 0.0;
  long long sample_count = 0;
  double total_mass = 0.0;
};

DistanceReport convergence_distances(const EmpiricalDistribution& emp, const SpectralLaw& law);

struct ConvergenceRow {
  int n = 0;
  int k = 0;
  int l = 0;
  long long trials = 0;
  double ks = 0.0;
  double w1 = 0.0;
};

// One experiment per ambient dimension with k = floor(alpha n),
// l = floor(beta n), distances against the limit law of the target.
std::vector<ConvergenceRow> convergence_report(double alpha, double beta,
                                               const std::string& target,
                                               const std::vector<int>& n_list, long long trials,
                                               std::uint64_t seed, Field field = Field::Real);

}  // namespace freeproj
