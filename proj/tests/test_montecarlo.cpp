#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "freeproj/montecarlo.hpp"

using namespace freeproj;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.n = 40;
  c.k = 12;
  c.l = 20;
  c.trials = 4;
  c.seed = 1234;
  c.field = Field::Complex;
  c.target = "pqp";
  return c;
}

}  // namespace

TEST_CASE("path_and_target_names_round_trip") {
  CHECK(path_from_name("exact-blocks") == SpectrumPath::ExactBlocks);
  CHECK(path_from_name("dense-oracle") == SpectrumPath::DenseOracle);
  CHECK(path_name(SpectrumPath::ExactBlocks) == std::string("exact-blocks"));
  CHECK(path_name(SpectrumPath::DenseOracle) == std::string("dense-oracle"));
  CHECK_THROWS_AS(path_from_name("sparse"), std::invalid_argument);

  const std::vector<std::string> targets = known_targets();
  CHECK(std::find(targets.begin(), targets.end(), "pqp") != targets.end());
  CHECK(std::find(targets.begin(), targets.end(), "angles") != targets.end());
  CHECK(std::find(targets.begin(), targets.end(), "poly") != targets.end());
}

TEST_CASE("polynomial_for_target_produces_the_documented_polynomials") {
  CHECK(polynomial_for_target("pqp").to_string() == parse_ncpoly("p*q*p").to_string());
  CHECK(polynomial_for_target("sum").to_string() == parse_ncpoly("p+q").to_string());
  CHECK(polynomial_for_target("commutator").to_string() ==
        parse_ncpoly("i*(p*q-q*p)").to_string());
  CHECK(polynomial_for_target("anticommutator").to_string() ==
        parse_ncpoly("p*q+q*p").to_string());
  CHECK(polynomial_for_target("p_plus_qpq").to_string() == parse_ncpoly("p+q*p*q").to_string());
  CHECK_THROWS_AS(polynomial_for_target("angles"), std::invalid_argument);
  CHECK_THROWS_AS(polynomial_for_target("poly"), std::invalid_argument);
  CHECK_THROWS_AS(polynomial_for_target("nonsense"), std::invalid_argument);
}

TEST_CASE("law_for_target_matches_the_limit_laws") {
  const SpectralLaw bt = law_for_target("pqp", 0.3, 0.6);
  CHECK(std::abs(bt.total_mass() - 1.0) < 1e-12);
  const SpectralLaw qpq = law_for_target("qpq", 0.3, 0.6);
  CHECK(std::abs(cdf(bt, 0.5) - cdf(qpq, 0.5)) < 1e-12);

  // The p + qpq law exists only at alpha = beta = 1/2.
  CHECK_NOTHROW(law_for_target("p_plus_qpq", 0.5, 0.5));
  CHECK_THROWS_AS(law_for_target("p_plus_qpq", 0.3, 0.6), std::domain_error);
  CHECK_THROWS_AS(law_for_target("poly", 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("empirical_spectrum_validates_configs") {
  ExperimentConfig c = small_config();
  c.n = 0;
  CHECK_THROWS_AS(empirical_spectrum(c), std::invalid_argument);
  c = small_config();
  c.k = 41;
  CHECK_THROWS_AS(empirical_spectrum(c), std::invalid_argument);
  c = small_config();
  c.trials = 0;
  CHECK_THROWS_AS(empirical_spectrum(c), std::invalid_argument);
  c = small_config();
  c.target = "poly";  // no polynomial supplied
  CHECK_THROWS_AS(empirical_spectrum(c), std::invalid_argument);
  c = small_config();
  c.n = 600;
  c.path = SpectrumPath::DenseOracle;
  CHECK_THROWS_AS(empirical_spectrum(c), std::invalid_argument);
}

TEST_CASE("empirical_spectrum_is_deterministic_and_thread_invariant") {
  ExperimentConfig c = small_config();
  const EmpiricalDistribution a = empirical_spectrum(c);
  const EmpiricalDistribution b = empirical_spectrum(c);
  CHECK(a.samples == b.samples);

  c.threads = 3;  // scheduling must not change the merged result
  const EmpiricalDistribution d = empirical_spectrum(c);
  CHECK(a.samples == d.samples);

  c.threads = 0;
  c.seed = 4321;
  const EmpiricalDistribution e = empirical_spectrum(c);
  CHECK(a.samples != e.samples);
}

TEST_CASE("empirical_spectrum_mass_accounting") {
  ExperimentConfig c = small_config();
  const EmpiricalDistribution eig = empirical_spectrum(c);
  // Every trial contributes n eigenvalues of weight 1/(n * trials).
  CHECK(eig.samples.size() == static_cast<std::size_t>(c.n * c.trials));
  CHECK(std::abs(eig.total_mass - 1.0) < 1e-12);
  CHECK(std::is_sorted(eig.samples.begin(), eig.samples.end()));

  c.target = "angles";
  const EmpiricalDistribution ang = empirical_spectrum(c);
  // Only the strictly interior angles are kept: min(k, l, n-k, n-l) = 12.
  CHECK(ang.samples.size() == static_cast<std::size_t>(12 * c.trials));
  CHECK(std::abs(ang.total_mass - 12.0 / 40.0) < 1e-12);
  for (double t : ang.samples) {
    CHECK(t > 0.0);
    CHECK(t < std::numbers::pi / 2.0);
  }
}

TEST_CASE("exact_blocks_and_dense_oracle_agree_sample_by_sample") {
  for (const char* target : {"pqp", "sum", "commutator", "anticommutator", "p_plus_qpq"}) {
    ExperimentConfig c = small_config();
    c.target = target;
    c.trials = 2;
    const EmpiricalDistribution blocks = empirical_spectrum(c);
    c.path = SpectrumPath::DenseOracle;
    const EmpiricalDistribution oracle = empirical_spectrum(c);
    REQUIRE(blocks.samples.size() == oracle.samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < blocks.samples.size(); ++i) {
      worst = std::max(worst, std::abs(blocks.samples[i] - oracle.samples[i]));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("custom_polynomial_target_runs_both_paths") {
  ExperimentConfig c = small_config();
  c.target = "poly";
  c.poly = parse_ncpoly("p*q*p*q+q*p*q*p");
  c.trials = 2;
  const EmpiricalDistribution blocks = empirical_spectrum(c);
  c.path = SpectrumPath::DenseOracle;
  const EmpiricalDistribution oracle = empirical_spectrum(c);
  REQUIRE(blocks.samples.size() == oracle.samples.size());
  for (std::size_t i = 0; i < blocks.samples.size(); ++i) {
    CHECK(std::abs(blocks.samples[i] - oracle.samples[i]) < 1e-8);
  }

  c.poly = parse_ncpoly("p*q");  // not self-adjoint
  CHECK_THROWS_AS(empirical_spectrum(c), std::invalid_argument);
}

TEST_CASE("distances_vanish_for_a_point_mass_match") {
  // All samples at the atom location: both distances are zero.
  SpectralLaw point;
  point.atoms.push_back({0.0, 1.0});
  EmpiricalDistribution emp;
  emp.samples = {0.0, 0.0, 0.0, 0.0};
  emp.weight_per_sample = 0.25;
  emp.total_mass = 1.0;
  CHECK(ks_distance(emp, point) < 1e-15);
  CHECK(w1_distance(emp, point) < 1e-15);

  // All samples displaced by 1: KS is the full mass, W1 the full distance.
  EmpiricalDistribution off;
  off.samples = {1.0, 1.0, 1.0, 1.0};
  off.weight_per_sample = 0.25;
  off.total_mass = 1.0;
  CHECK(std::abs(ks_distance(off, point) - 1.0) < 1e-15);
  CHECK(std::abs(w1_distance(off, point) - 1.0) < 1e-12);
}

TEST_CASE("empirical_distribution_converges_to_the_law") {
  ExperimentConfig c;
  c.n = 120;
  c.k = 36;   // alpha = 0.3
  c.l = 72;   // beta = 0.6
  c.trials = 6;
  c.seed = 777;
  c.field = Field::Complex;
  c.target = "sum";
  const EmpiricalDistribution emp = empirical_spectrum(c);
  const SpectralLaw law = law_for_target("sum", 0.3, 0.6);
  const DistanceReport report = convergence_distances(emp, law);
  CHECK(report.sample_count == 720);
  CHECK(std::abs(report.total_mass - 1.0) < 1e-12);
  // Finite-size fluctuations at n = 120 with 6 trials sit far below these.
  CHECK(report.ks < 0.05);
  CHECK(report.w1 < 0.05);
}

TEST_CASE("convergence_report_uses_floor_dimensions") {
  const std::vector<ConvergenceRow> rows =
      convergence_report(0.3, 0.6, "pqp", {25, 50}, 2, 42, Field::Real);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].n == 25);
  CHECK(rows[0].k == 7);   // floor(0.3 * 25)
  CHECK(rows[0].l == 15);
  CHECK(rows[1].k == 15);
  CHECK(rows[1].l == 30);
  CHECK(rows[0].trials == 2);
  // Distances shrink (or at least do not explode) as n grows.
  CHECK(rows[1].w1 < rows[0].w1 + 0.05);

  CHECK_THROWS_AS(convergence_report(0.3, 0.6, "pqp", {}, 2, 42, Field::Real),
                  std::invalid_argument);
}
