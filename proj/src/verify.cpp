#include "freeproj/verify.hpp"

#include <sys/wait.h>

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "freeproj/block_spectrum.hpp"
#include "freeproj/limit_laws.hpp"
#include "freeproj/montecarlo.hpp"
#include "freeproj/ncpoly.hpp"
#include "freeproj/rng.hpp"
#include "freeproj/subspace.hpp"

namespace freeproj {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

CheckResult bound_check(std::string name, double value, double threshold,
                        std::string detail = "") {
  CheckResult c;
  c.name = std::move(name);
  c.value = value;
  c.threshold = threshold;
  c.pass = std::isfinite(value) && value <= threshold;
  c.detail = std::move(detail);
  return c;
}

std::string describe(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------- oracles --

std::vector<double> dense_eigs(const NCPolynomial& poly, const Eigen::MatrixXcd& P,
                               const Eigen::MatrixXcd& Q) {
  const Eigen::MatrixXcd M = poly.evaluate(P, Q);
  const Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("dense eigensolver failed to converge");
  }
  const Eigen::VectorXd ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

struct RandomConfig {
  int n = 0, k = 0, l = 0;
  Field field = Field::Real;
  std::uint64_t seed_e = 0, seed_f = 0;
};

// Cycles through the five dimension regimes: k + l < n, k + l > n, k = l,
// k = 0, k = n.
RandomConfig draw_config(SplitMix64& sm, int index, int nmin, int nmax) {
  RandomConfig c;
  c.n = nmin + static_cast<int>(sm.next() % static_cast<std::uint64_t>(nmax - nmin + 1));
  c.field = (index % 2 == 0) ? Field::Real : Field::Complex;
  const int n = c.n;
  switch (index % 5) {
    case 0: {
      c.k = 1 + static_cast<int>(sm.next() % static_cast<std::uint64_t>(std::max(1, (n - 1) / 2)));
      const int lmax = std::max(1, n - 1 - c.k);
      c.l = 1 + static_cast<int>(sm.next() % static_cast<std::uint64_t>(lmax));
      break;
    }
    case 1: {
      c.k = 1 + static_cast<int>(sm.next() % static_cast<std::uint64_t>(n - 1));
      const int lmin = std::min(n, n - c.k + 1);
      c.l = lmin + static_cast<int>(sm.next() % static_cast<std::uint64_t>(n - lmin + 1));
      break;
    }
    case 2: {
      c.k = 1 + static_cast<int>(sm.next() % static_cast<std::uint64_t>(n - 1));
      c.l = c.k;
      break;
    }
    case 3: {
      c.k = 0;
      c.l = static_cast<int>(sm.next() % static_cast<std::uint64_t>(n + 1));
      break;
    }
    default: {
      c.k = n;
      c.l = 1 + static_cast<int>(sm.next() % static_cast<std::uint64_t>(n - 1));
      break;
    }
  }
  c.seed_e = sm.next();
  c.seed_f = sm.next();
  return c;
}

// ----------------------------------------------------------------- suites --

SuiteResult suite_closed_forms(bool quick) {
  SuiteResult r;
  r.suite = "closed-forms";
  const int configs = quick ? 15 : 50;
  const int nmin = quick ? 20 : 40;
  const int nmax = quick ? 80 : 200;
  const std::vector<std::string> targets = {"pqp", "sum", "commutator", "anticommutator"};
  std::vector<double> worst(targets.size(), 0.0);

  const auto start = std::chrono::steady_clock::now();
  SplitMix64 sm(101);
  for (int i = 0; i < configs; ++i) {
    const RandomConfig c = draw_config(sm, i, nmin, nmax);
    const Subspace E = haar_subspace(c.n, c.k, c.seed_e, c.field);
    const Subspace F = haar_subspace(c.n, c.l, c.seed_f, c.field);
    const PrincipalAngleSpectrum ang = principal_angles(E, F);
    const BlockDecomposition blocks = block_structure(c.n, c.k, c.l, ang);
    const Eigen::MatrixXcd P = projector(E);
    const Eigen::MatrixXcd Q = projector(F);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      SpectrumWithMultiplicity closed;
      if (targets[t] == "pqp") closed = spectrum_pqp(blocks);
      if (targets[t] == "sum") closed = spectrum_sum(blocks);
      if (targets[t] == "commutator") closed = spectrum_commutator(blocks);
      if (targets[t] == "anticommutator") closed = spectrum_anticommutator(blocks);
      const std::vector<double> dense = dense_eigs(polynomial_for_target(targets[t]), P, Q);
      worst[t] = std::max(worst[t], max_abs_diff(closed.expand(), dense));
    }
  }
  const double elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start).count();

  for (std::size_t t = 0; t < targets.size(); ++t) {
    r.checks.push_back(bound_check(targets[t] + "-vs-oracle", worst[t], 1e-8,
                                   std::to_string(configs) + " random configurations"));
  }
  r.checks.push_back(bound_check("runtime-seconds", elapsed, 30.0));
  return r;
}

SuiteResult suite_generic_spectrum(bool quick) {
  SuiteResult r;
  r.suite = "generic-spectrum";
  const int configs = quick ? 12 : 50;
  const int nmin = quick ? 20 : 40;
  const int nmax = quick ? 60 : 160;
  const std::vector<std::pair<std::string, std::string>> polys = {
      {"p-plus-qpq", "p+q*p*q"}, {"pqpq-plus-qpqp", "p*q*p*q+q*p*q*p"}};
  std::vector<double> worst(polys.size(), 0.0);

  const auto start = std::chrono::steady_clock::now();
  SplitMix64 sm(202);
  for (int i = 0; i < configs; ++i) {
    const RandomConfig c = draw_config(sm, i, nmin, nmax);
    const Subspace E = haar_subspace(c.n, c.k, c.seed_e, c.field);
    const Subspace F = haar_subspace(c.n, c.l, c.seed_f, c.field);
    const PrincipalAngleSpectrum ang = principal_angles(E, F);
    const BlockDecomposition blocks = block_structure(c.n, c.k, c.l, ang);
    const Eigen::MatrixXcd P = projector(E);
    const Eigen::MatrixXcd Q = projector(F);
    for (std::size_t t = 0; t < polys.size(); ++t) {
      const NCPolynomial poly = parse_ncpoly(polys[t].second);
      const std::vector<double> closed = exact_spectrum(poly, blocks).expand();
      const std::vector<double> dense = dense_eigs(poly, P, Q);
      worst[t] = std::max(worst[t], max_abs_diff(closed, dense));
    }
  }
  const double elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start).count();

  for (std::size_t t = 0; t < polys.size(); ++t) {
    r.checks.push_back(bound_check(polys[t].first + "-vs-oracle", worst[t], 1e-8,
                                   std::to_string(configs) + " random configurations"));
  }
  r.checks.push_back(bound_check("runtime-seconds", elapsed, 30.0));
  return r;
}

SuiteResult suite_angle_recovery(bool quick) {
  SuiteResult r;
  r.suite = "angle-recovery";

  std::vector<std::vector<double>> lists;
  lists.push_back({std::numbers::pi / 4.0});
  lists.push_back({0.0, kHalfPi});
  lists.push_back({0.0, 0.0, 0.3, 0.6, kHalfPi});
  {
    std::vector<double> spread;
    for (int i = 0; i < 8; ++i) spread.push_back(0.15 + (1.35 - 0.15) * i / 7.0);
    lists.push_back(spread);
  }
  lists.push_back({0.5, 0.5, 0.5});
  lists.push_back({0.015, kHalfPi - 0.015});
  lists.push_back({kHalfPi});
  lists.push_back(std::vector<double>(8, std::numbers::pi / 4.0));
  lists.push_back({0.0, 0.2, 0.9, 1.3, kHalfPi});
  {
    std::vector<double> dense;
    for (int i = 0; i < 20; ++i) dense.push_back(0.05 + (kHalfPi - 0.1) * i / 19.0);
    lists.push_back(dense);
  }

  SplitMix64 sm(303);
  double worst_recovery = 0.0;
  std::string fail_note;
  for (std::size_t i = 0; i < lists.size(); ++i) {
    std::vector<double> planted = lists[i];
    std::sort(planted.begin(), planted.end());
    const int n = static_cast<int>(2 * planted.size()) + 7;
    const Field field = (i % 2 == 0) ? Field::Real : Field::Complex;
    const auto [E, F] = planted_subspace_pair(n, planted, sm.next(), field);
    const PrincipalAngleSpectrum rec = principal_angles(E, F);
    if (rec.angles.size() != planted.size()) {
      worst_recovery = std::numeric_limits<double>::infinity();
      fail_note = "angle count mismatch on list " + std::to_string(i + 1);
      break;
    }
    for (std::size_t j = 0; j < planted.size(); ++j) {
      worst_recovery = std::max(worst_recovery, std::abs(rec.angles[j] - planted[j]));
    }
  }
  r.checks.push_back(bound_check("planted-angle-recovery", worst_recovery, 1e-10,
                                 fail_note.empty() ? "10 planted angle lists" : fail_note));

  const int pairs = quick ? 3 : 5;
  double worst_gram = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const int n = 10 + static_cast<int>(sm.next() % 51);
    const int k = 1 + static_cast<int>(sm.next() % static_cast<std::uint64_t>(n / 2));
    const int l = 1 + static_cast<int>(sm.next() % static_cast<std::uint64_t>(n / 2));
    const Field field = (i % 2 == 0) ? Field::Real : Field::Complex;
    const Subspace E = haar_subspace(n, k, sm.next(), field);
    const Subspace F = haar_subspace(n, l, sm.next(), field);
    const PrincipalVectorPair pv = principal_vectors(E, F);
    const Eigen::MatrixXcd G = pv.e_basis.adjoint() * pv.f_basis;
    for (Eigen::Index a = 0; a < G.rows(); ++a) {
      for (Eigen::Index b = 0; b < G.cols(); ++b) {
        const double expected =
            (a == b) ? std::cos(pv.angles.angles[static_cast<std::size_t>(a)]) : 0.0;
        worst_gram = std::max(worst_gram, std::abs(G(a, b) - std::complex<double>(expected)));
      }
    }
  }
  r.checks.push_back(bound_check("principal-vector-gram", worst_gram, 1e-10,
                                 std::to_string(pairs) + " random pairs"));
  return r;
}

SuiteResult suite_law_masses(bool quick) {
  SuiteResult r;
  r.suite = "law-masses";
  const int grid = quick ? 11 : 21;
  double bt_ac = 0.0, bt_total = 0.0, bp_ac = 0.0, bp_total = 0.0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double alpha = static_cast<double>(i) / (grid - 1);
      const double beta = static_cast<double>(j) / (grid - 1);
      const double min4 = std::min(std::min(alpha, beta), std::min(1.0 - alpha, 1.0 - beta));

      const SpectralLaw bt = boxtimes_bernoulli({alpha, beta});
      double ac = 0.0;
      for (const ACPiece& p : bt.pieces) ac += piece_mass_quadrature(p);
      double atoms = 0.0;
      for (const Atom& a : bt.atoms) atoms += a.mass;
      bt_ac = std::max(bt_ac, std::abs(ac - min4));
      bt_total = std::max(bt_total, std::abs(atoms + ac - 1.0));

      const SpectralLaw bp = boxplus_bernoulli({alpha, beta});
      ac = 0.0;
      for (const ACPiece& p : bp.pieces) ac += piece_mass_quadrature(p);
      atoms = 0.0;
      for (const Atom& a : bp.atoms) atoms += a.mass;
      bp_ac = std::max(bp_ac, std::abs(ac - 2.0 * min4));
      bp_total = std::max(bp_total, std::abs(atoms + ac - 1.0));
    }
  }
  const std::string note = std::to_string(grid) + "x" + std::to_string(grid) + " parameter grid";
  r.checks.push_back(bound_check("boxtimes-ac-mass", bt_ac, 1e-6, note));
  r.checks.push_back(bound_check("boxtimes-total-mass", bt_total, 1e-6, note));
  r.checks.push_back(bound_check("boxplus-ac-mass", bp_ac, 1e-6, note));
  r.checks.push_back(bound_check("boxplus-total-mass", bp_total, 1e-6, note));
  return r;
}

SuiteResult suite_law_moments(bool quick) {
  SuiteResult r;
  r.suite = "law-moments";
  const std::vector<double> params =
      quick ? std::vector<double>{0.1, 0.5, 0.9}
            : std::vector<double>{0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95};
  double bp_err = 0.0, bt_err = 0.0;
  for (double alpha : params) {
    for (double beta : params) {
      bp_err = std::max(bp_err,
                        std::abs(law_moment(boxplus_bernoulli({alpha, beta}), 1) - (alpha + beta)));
      bt_err = std::max(bt_err,
                        std::abs(law_moment(boxtimes_bernoulli({alpha, beta}), 1) - alpha * beta));
    }
  }
  r.checks.push_back(bound_check("boxplus-mean", bp_err, 1e-8));
  r.checks.push_back(bound_check("boxtimes-mean", bt_err, 1e-6));

  // Monte Carlo cross-check of the boxtimes mean against normalized traces of
  // P Q P; the finite-n expectation equals k l / n^2 = alpha beta exactly.
  const int n = quick ? 200 : 500;
  const int trials = quick ? 8 : 20;
  const double alpha = 0.3, beta = 0.6;
  ExperimentConfig config;
  config.n = n;
  config.k = static_cast<int>(std::floor(alpha * n));
  config.l = static_cast<int>(std::floor(beta * n));
  config.trials = 1;
  config.target = "pqp";
  SplitMix64 sm(555);
  std::vector<double> means;
  means.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    config.seed = sm.next();
    const EmpiricalDistribution emp = empirical_spectrum(config);
    const double sum = std::accumulate(emp.samples.begin(), emp.samples.end(), 0.0);
    means.push_back(sum / static_cast<double>(config.n));
  }
  const double mean = std::accumulate(means.begin(), means.end(), 0.0) / trials;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= (trials - 1);
  const double se = std::max(std::sqrt(var / trials), 1e-15);
  const double z = std::abs(mean - alpha * beta) / se;
  r.checks.push_back(bound_check(
      "boxtimes-mean-mc", z, 3.0,
      "mean " + describe(mean) + " target " + describe(alpha * beta) + " se " + describe(se)));
  return r;
}

SuiteResult suite_uniform_angles(bool quick) {
  SuiteResult r;
  r.suite = "uniform-angles";
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig config;
  config.n = quick ? 400 : 2000;
  config.k = config.n / 2;
  config.l = config.n / 2;
  config.trials = 1;
  config.seed = 606;
  config.target = "angles";
  const EmpiricalDistribution emp = empirical_spectrum(config);
  const SpectralLaw law = angle_law({0.5, 0.5});
  const double ks = ks_distance(emp, law);
  const double elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start).count();
  r.checks.push_back(bound_check("angle-ks", ks, 0.05,
                                 std::to_string(emp.samples.size()) + " angles, ambient " +
                                     std::to_string(config.n)));
  r.checks.push_back(bound_check("runtime-seconds", elapsed, 60.0));
  return r;
}

SuiteResult suite_histogram_w1(bool quick) {
  SuiteResult r;
  r.suite = "histogram-w1";
  ExperimentConfig config;
  config.n = quick ? 400 : 2000;
  config.k = config.n / 2;
  config.l = config.n / 2;
  config.trials = 1;
  config.seed = 707;
  config.target = "p_plus_qpq";
  const EmpiricalDistribution emp = empirical_spectrum(config);
  const SpectralLaw law = p_plus_qpq_law();
  const double w1 = w1_distance(emp, law);
  r.checks.push_back(bound_check("p-plus-qpq-w1", w1, 0.05,
                                 std::to_string(emp.samples.size()) + " eigenvalues, ambient " +
                                     std::to_string(config.n)));

  // The spectrum must stay inside a small window around [0, 1/5] and [1, 2].
  double outside = 0.0;
  for (double x : emp.samples) {
    double d = 0.0;
    if (x < -0.02) {
      d = -0.02 - x;
    } else if (x > 0.22 && x < 0.98) {
      d = std::min(x - 0.22, 0.98 - x);
    } else if (x > 2.02) {
      d = x - 2.02;
    }
    outside = std::max(outside, d);
  }
  r.checks.push_back(bound_check("support-window", outside, 0.0,
                                 "max distance outside [-0.02, 0.22] u [0.98, 2.02]"));
  return r;
}

SuiteResult suite_dual_paths(bool quick) {
  SuiteResult r;
  r.suite = "dual-paths";
  const int points = quick ? 25 : 50;

  {
    const SpectralLaw closed = anticommutator_half_closed_form();
    const SpectralLaw pushed = anticommutator_law({0.5, 0.5});
    double err = 0.0;
    for (int i = 0; i < points; ++i) {
      const double x = -0.25 + 2.25 * (i + 0.5) / points;
      err = std::max(err, std::abs(cdf(closed, x) - cdf(pushed, x)));
    }
    r.checks.push_back(bound_check("anticommutator-dual", err, 1e-8,
                                   std::to_string(points) + " grid points"));
  }

  {
    double err = 0.0;
    for (const auto& [alpha, beta] : std::vector<std::pair<double, double>>{
             {0.35, 0.6}, {0.5, 0.5}}) {
      const SpectralLaw ang = angle_law({alpha, beta});
      const SpectralLaw bt = boxtimes_bernoulli({alpha, beta});
      SpectralLaw bt_ac;
      bt_ac.pieces = bt.pieces;
      const double theta_lo = ang.pieces.front().lo;
      const double theta_hi = ang.pieces.front().hi;
      MonotoneBranch branch;
      branch.lo = theta_lo;
      branch.hi = theta_hi;
      branch.map = [](double th) { return std::cos(th) * std::cos(th); };
      branch.inverse = [](double t) {
        return std::acos(std::sqrt(std::clamp(t, 0.0, 1.0)));
      };
      branch.inverse_derivative = [](double t) {
        const double tt = std::clamp(t, 1e-300, 1.0);
        return -1.0 / (2.0 * std::sqrt(tt * std::max(1.0 - tt, 1e-300)));
      };
      const SpectralLaw pushed = pushforward(ang, {branch});
      const double lo = bt_ac.pieces.front().lo;
      const double hi = bt_ac.pieces.back().hi;
      for (int i = 0; i < points; ++i) {
        const double x = lo + (hi - lo) * (i + 0.5) / points;
        err = std::max(err, std::abs(cdf(pushed, x) - cdf(bt_ac, x)));
      }
    }
    r.checks.push_back(bound_check("angle-boxtimes-dual", err, 1e-8,
                                   "pushforward under cos^2 at two parameter points"));
  }

  {
    const SpectralLaw closed = p_plus_qpq_law();
    const SpectralLaw bt = boxtimes_bernoulli({0.5, 0.5});
    SpectralLaw bt_ac;
    bt_ac.pieces = bt.pieces;

    const auto disc_plus = [](double y) {
      return std::sqrt(std::max((5.0 * y - 1.0) * (y - 1.0), 0.0));
    };
    const auto disc_minus = [](double y) {
      return std::sqrt(std::max((1.0 - 5.0 * y) * (1.0 - y), 0.0));
    };
    const auto dinv = [](double y, double c) { return (2.0 * y - c - 1.0) / (2.0 * c + y - 1.0); };

    MonotoneBranch rho_plus;
    rho_plus.lo = 0.0;
    rho_plus.hi = 1.0;
    rho_plus.map = [](double c) {
      return 0.5 * (1.0 + c + std::sqrt((5.0 * c - 2.0) * c + 1.0));
    };
    rho_plus.inverse = [disc_plus](double y) { return 0.5 * (disc_plus(y) - (y - 1.0)); };
    rho_plus.inverse_derivative = [disc_plus, dinv](double y) {
      return dinv(y, 0.5 * (disc_plus(y) - (y - 1.0)));
    };

    // rho_minus written as 2c(1-c) / (1 + c + sqrt(5c^2 - 2c + 1)) to stay
    // stable near both ends of [0, 1]; it increases on [0, 0.4] and
    // decreases on [0.4, 1], peaking at exactly 0.2.
    const auto rho_minus = [](double c) {
      return 2.0 * c * (1.0 - c) / (1.0 + c + std::sqrt((5.0 * c - 2.0) * c + 1.0));
    };
    MonotoneBranch lower;
    lower.lo = 0.0;
    lower.hi = 0.4;
    lower.map = rho_minus;
    lower.inverse = [disc_minus](double y) {
      return 2.0 * y * (1.0 - y) / ((1.0 - y) + disc_minus(y));
    };
    lower.inverse_derivative = [disc_minus, dinv](double y) {
      return dinv(y, 2.0 * y * (1.0 - y) / ((1.0 - y) + disc_minus(y)));
    };
    MonotoneBranch upper;
    upper.lo = 0.4;
    upper.hi = 1.0;
    upper.map = rho_minus;
    upper.inverse = [disc_minus](double y) { return 0.5 * ((1.0 - y) + disc_minus(y)); };
    upper.inverse_derivative = [disc_minus, dinv](double y) {
      return dinv(y, 0.5 * ((1.0 - y) + disc_minus(y)));
    };

    const SpectralLaw dual =
        law_sum(pushforward(bt_ac, {rho_plus}), pushforward(bt_ac, {lower, upper}));
    double err = 0.0;
    for (int i = 0; i < points; ++i) {
      const double x1 = 0.2 * (i + 0.5) / points;
      const double x2 = 1.0 + (i + 0.5) / points;
      err = std::max(err, std::abs(cdf(closed, x1) - cdf(dual, x1)));
      err = std::max(err, std::abs(cdf(closed, x2) - cdf(dual, x2)));
    }
    r.checks.push_back(bound_check("p-plus-qpq-dual", err, 1e-8,
                                   std::to_string(2 * points) + " grid points"));
  }
  return r;
}

SuiteResult suite_special_cases(bool quick) {
  SuiteResult r;
  r.suite = "special-cases";
  const int points = quick ? 25 : 50;

  {
    const SpectralLaw bt = boxtimes_bernoulli({0.5, 0.5});
    double err = 0.0;
    for (int i = 0; i < points; ++i) {
      const double x = (i + 0.5) / points;
      const double analytic = 0.5 + std::asin(std::sqrt(x)) / std::numbers::pi;
      err = std::max(err, std::abs(cdf(bt, x) - analytic));
    }
    r.checks.push_back(bound_check("boxtimes-arcsine", err, 1e-8,
                                   "atom 1/2 at 0 plus half arcsine on [0, 1]"));
  }
  {
    const SpectralLaw bp = boxplus_bernoulli({0.5, 0.5});
    double err = 0.0;
    for (int i = 0; i < points; ++i) {
      const double x = 2.0 * (i + 0.5) / points;
      const double analytic = (2.0 / std::numbers::pi) * std::asin(std::sqrt(0.5 * x));
      err = std::max(err, std::abs(cdf(bp, x) - analytic));
    }
    r.checks.push_back(bound_check("boxplus-arcsine", err, 1e-8, "arcsine on [0, 2]"));
  }
  {
    const SpectralLaw cm = commutator_law({0.5, 0.5});
    double err = 0.0;
    for (int i = 0; i < points; ++i) {
      const double y = -0.5 + (i + 0.5) / points;
      const double analytic =
          (2.0 / std::numbers::pi) * std::asin(std::sqrt(0.5 * (1.0 + 2.0 * y)));
      err = std::max(err, std::abs(cdf(cm, y) - analytic));
    }
    r.checks.push_back(bound_check("commutator-arcsine", err, 1e-8,
                                   "rescaled arcsine on [-1/2, 1/2]"));
  }
  return r;
}

// ----------------------------------------------------------- determinism --

struct CommandResult {
  int exit_code = 127;
  std::string output;
};

CommandResult run_command(const std::string& cmd) {
  CommandResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof(buf), pipe)) > 0) r.output.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string make_temp_dir() {
  std::string tmpl = "/tmp/freeproj-verify-XXXXXX";
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  if (mkdtemp(buf.data()) == nullptr) {
    throw std::runtime_error("failed to create a scratch directory");
  }
  return std::string(buf.data());
}

CheckResult repeat_command_check(const std::string& name, const std::string& cmd) {
  const CommandResult a = run_command(cmd);
  const CommandResult b = run_command(cmd);
  CheckResult c;
  c.name = name;
  c.threshold = 0.0;
  const bool ok = (a.exit_code == 0 && b.exit_code == 0 && a.output == b.output &&
                   !a.output.empty());
  c.value = ok ? 0.0 : 1.0;
  c.pass = ok;
  c.detail = ok ? std::to_string(a.output.size()) + " bytes, identical"
                : "exit codes " + std::to_string(a.exit_code) + "/" +
                      std::to_string(b.exit_code) + ", sizes " +
                      std::to_string(a.output.size()) + "/" + std::to_string(b.output.size());
  return c;
}

SuiteResult suite_determinism(const std::string& cli_path) {
  SuiteResult r;
  r.suite = "determinism";
  if (cli_path.empty()) {
    CheckResult c;
    c.name = "cli-available";
    c.pass = false;
    c.detail = "no CLI binary path configured";
    r.checks.push_back(c);
    return r;
  }
  const std::string cli = "\"" + cli_path + "\"";
  r.checks.push_back(repeat_command_check(
      "angles-bytes", cli + " angles --n 40 --k 12 --l 17 --seed 7 --field complex"));
  r.checks.push_back(repeat_command_check(
      "law-bytes", cli + " law boxplus --alpha 0.3 --beta 0.6 --grid 64"));
  r.checks.push_back(repeat_command_check(
      "simulate-bytes", cli + " simulate --target pqp --n 60 --k 20 --l 30 --trials 3 --seed 11"));

  // The figure subcommand writes files; compare the written bytes across two
  // runs in separate scratch directories.
  CheckResult fig;
  fig.name = "figure-bytes";
  fig.threshold = 0.0;
  try {
    const std::string d1 = make_temp_dir();
    const std::string d2 = make_temp_dir();
    const std::string args =
        " figure --target anticommutator --n 80 --k 40 --l 40 --trials 1 --seed 5 --out ";
    const CommandResult r1 = run_command(cli + args + d1 + "/fig");
    const CommandResult r2 = run_command(cli + args + d2 + "/fig");
    bool ok = (r1.exit_code == 0 && r2.exit_code == 0);
    std::size_t bytes = 0;
    for (const char* suffix : {".svg", "_hist.csv", "_overlay.csv"}) {
      const std::string a = slurp(d1 + "/fig" + suffix);
      const std::string b = slurp(d2 + "/fig" + suffix);
      ok = ok && !a.empty() && a == b;
      bytes += a.size();
    }
    fig.value = ok ? 0.0 : 1.0;
    fig.pass = ok;
    fig.detail = ok ? std::to_string(bytes) + " bytes, identical"
                    : "outputs differ or the command failed (exit " +
                          std::to_string(r1.exit_code) + "/" + std::to_string(r2.exit_code) + ")";
  } catch (const std::exception& e) {
    fig.pass = false;
    fig.value = 1.0;
    fig.detail = e.what();
  }
  r.checks.push_back(fig);
  return r;
}

}  // namespace

bool SuiteResult::ok() const {
  if (checks.empty()) return false;
  for (const CheckResult& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::vector<std::string> verify_suite_names() {
  return {"closed-forms", "generic-spectrum", "angle-recovery", "law-masses",
          "law-moments",  "uniform-angles",   "histogram-w1",   "dual-paths",
          "special-cases", "determinism"};
}

SuiteResult run_verify_suite(const std::string& suite, bool quick, const std::string& cli_path) {
  const auto start = std::chrono::steady_clock::now();
  SuiteResult r;
  if (suite == "closed-forms") {
    r = suite_closed_forms(quick);
  } else if (suite == "generic-spectrum") {
    r = suite_generic_spectrum(quick);
  } else if (suite == "angle-recovery") {
    r = suite_angle_recovery(quick);
  } else if (suite == "law-masses") {
    r = suite_law_masses(quick);
  } else if (suite == "law-moments") {
    r = suite_law_moments(quick);
  } else if (suite == "uniform-angles") {
    r = suite_uniform_angles(quick);
  } else if (suite == "histogram-w1") {
    r = suite_histogram_w1(quick);
  } else if (suite == "dual-paths") {
    r = suite_dual_paths(quick);
  } else if (suite == "special-cases") {
    r = suite_special_cases(quick);
  } else if (suite == "determinism") {
    r = suite_determinism(cli_path);
  } else {
    throw std::invalid_argument("unknown verification suite '" + suite + "'");
  }
  r.quick = quick;
  r.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace freeproj
