#include "freeproj/montecarlo.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "freeproj/block_spectrum.hpp"
#include "freeproj/rng.hpp"

namespace freeproj {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void validate_config(const ExperimentConfig& c) {
  if (c.n < 1) throw std::invalid_argument("ambient dimension must be at least 1");
  if (c.k < 0 || c.k > c.n || c.l < 0 || c.l > c.n) {
    throw std::invalid_argument("subspace dimensions must lie in [0, n]");
  }
  if (c.trials < 1) throw std::invalid_argument("trial count must be at least 1");
  if (!(c.tol_zero >= 0.0) || c.tol_zero >= 1.0) {
    throw std::invalid_argument("tol_zero must lie in [0, 1)");
  }
  const std::vector<std::string> targets = known_targets();
  if (std::find(targets.begin(), targets.end(), c.target) == targets.end()) {
    throw std::invalid_argument("unknown target '" + c.target + "'");
  }
  if (c.target == "poly" && c.poly.is_zero()) {
    throw std::invalid_argument("target 'poly' requires a nonzero polynomial");
  }
  if (c.target != "angles" && c.path == SpectrumPath::DenseOracle && c.n > 500) {
    throw std::invalid_argument("the dense oracle path is limited to n <= 500");
  }
}

}  // namespace

const char* path_name(SpectrumPath p) {
  switch (p) {
    case SpectrumPath::ExactBlocks:
      return "exact-blocks";
    case SpectrumPath::DenseOracle:
      return "dense-oracle";
  }
  return "exact-blocks";
}

SpectrumPath path_from_name(const std::string& name) {
  if (name == "exact-blocks") return SpectrumPath::ExactBlocks;
  if (name == "dense-oracle") return SpectrumPath::DenseOracle;
  throw std::invalid_argument("unknown spectrum path '" + name + "'");
}

std::vector<std::string> known_targets() {
  return {"pqp", "qpq", "sum", "commutator", "anticommutator", "p_plus_qpq", "angles", "poly"};
}

NCPolynomial polynomial_for_target(const std::string& target) {
  if (target == "pqp") return parse_ncpoly("p*q*p");
  if (target == "qpq") return parse_ncpoly("q*p*q");
  if (target == "sum") return parse_ncpoly("p+q");
  if (target == "commutator") return parse_ncpoly("i*(p*q-q*p)");
  if (target == "anticommutator") return parse_ncpoly("p*q+q*p");
  if (target == "p_plus_qpq") return parse_ncpoly("p+q*p*q");
  if (target == "angles") {
    throw std::invalid_argument("the angle target is not a polynomial target");
  }
  if (target == "poly") {
    throw std::invalid_argument("target 'poly' supplies its own polynomial");
  }
  throw std::invalid_argument("unknown target '" + target + "'");
}

SpectralLaw law_for_target(const std::string& target, double alpha, double beta) {
  const BernoulliParams p{alpha, beta};
  if (target == "pqp" || target == "qpq") return boxtimes_bernoulli(p);
  if (target == "sum") return boxplus_bernoulli(p);
  if (target == "commutator") return commutator_law(p);
  if (target == "anticommutator") return anticommutator_law(p);
  if (target == "angles") return angle_law(p);
  if (target == "p_plus_qpq") {
    validate_params(p);
    if (std::abs(alpha - 0.5) > 1e-12 || std::abs(beta - 0.5) > 1e-12) {
      throw std::domain_error("the p + qpq law is available only at alpha = beta = 1/2");
    }
    return p_plus_qpq_law();
  }
  if (target == "poly") {
    throw std::invalid_argument("target 'poly' has no closed-form limit law");
  }
  throw std::invalid_argument("unknown target '" + target + "'");
}

EmpiricalDistribution empirical_spectrum(const ExperimentConfig& config) {
  validate_config(config);
  const bool angle_target = (config.target == "angles");
  NCPolynomial poly;
  if (!angle_target) {
    poly = (config.target == "poly") ? config.poly : polynomial_for_target(config.target);
    if (!poly.is_self_adjoint()) {
      throw std::invalid_argument("the target polynomial must be self-adjoint");
    }
  }

  const long long trials = config.trials;
  std::vector<std::vector<double>> per_trial(static_cast<std::size_t>(trials));

  auto run_trial = [&](long long t) {
    SplitMix64 sm(config.seed ^ static_cast<std::uint64_t>(t));
    const std::uint64_t seed_e = sm.next();
    const std::uint64_t seed_f = sm.next();
    const Subspace E = haar_subspace(config.n, config.k, seed_e, config.field);
    const Subspace F = haar_subspace(config.n, config.l, seed_f, config.field);
    const PrincipalAngleSpectrum spectrum = principal_angles(E, F, config.tol_zero);
    std::vector<double>& out = per_trial[static_cast<std::size_t>(t)];
    if (angle_target) {
      out.reserve(spectrum.angles.size());
      for (double theta : spectrum.angles) {
        if (theta > 0.0 && theta < kHalfPi) out.push_back(theta);
      }
      return;
    }
    if (config.path == SpectrumPath::ExactBlocks) {
      const BlockDecomposition blocks = block_structure(config.n, config.k, config.l, spectrum);
      out = exact_spectrum(poly, blocks).expand();
    } else {
      const Eigen::MatrixXcd P = projector(E);
      const Eigen::MatrixXcd Q = projector(F);
      const Eigen::MatrixXcd M = poly.evaluate(P, Q);
      const Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H, Eigen::EigenvaluesOnly);
      if (solver.info() != Eigen::Success) {
        throw std::runtime_error("dense eigensolver failed to converge");
      }
      const Eigen::VectorXd ev = solver.eigenvalues();
      out.assign(ev.data(), ev.data() + ev.size());
    }
  };

  int workers = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<long long>(workers, trials));
  if (workers <= 1) {
    for (long long t = 0; t < trials; ++t) run_trial(t);
  } else {
    // Striped trial assignment; per-trial seeds make the result independent of
    // the scheduling, so the merged output is deterministic.
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        try {
          for (long long t = w; t < trials; t += workers) run_trial(t);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  EmpiricalDistribution emp;
  std::size_t count = 0;
  for (const std::vector<double>& v : per_trial) count += v.size();
  emp.samples.reserve(count);
  for (const std::vector<double>& v : per_trial) {
    emp.samples.insert(emp.samples.end(), v.begin(), v.end());
  }
  std::sort(emp.samples.begin(), emp.samples.end());
  emp.weight_per_sample = 1.0 / (static_cast<double>(config.n) * static_cast<double>(trials));
  emp.total_mass = emp.weight_per_sample * static_cast<double>(emp.samples.size());
  return emp;
}

double ks_distance(const EmpiricalDistribution& emp, const SpectralLaw& law) {
  const LawCdf cdf(law);
  const double w = emp.weight_per_sample;
  const std::vector<double>& s = emp.samples;
  double sup = std::abs(emp.total_mass - cdf.total());
  for (std::size_t i = 0; i < s.size();) {
    std::size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    const double x = s[i];
    sup = std::max(sup, std::abs(static_cast<double>(j) * w - cdf(x)));
    sup = std::max(sup, std::abs(static_cast<double>(i) * w - cdf.left(x)));
    i = j;
  }
  for (const Atom& atom : law.atoms) {
    const double x = atom.location;
    const auto lb = std::lower_bound(s.begin(), s.end(), x) - s.begin();
    const auto ub = std::upper_bound(s.begin(), s.end(), x) - s.begin();
    sup = std::max(sup, std::abs(static_cast<double>(ub) * w - cdf(x)));
    sup = std::max(sup, std::abs(static_cast<double>(lb) * w - cdf.left(x)));
  }
  return sup;
}

double w1_distance(const EmpiricalDistribution& emp, const SpectralLaw& law) {
  const LawCdf cdf(law);
  const double w = emp.weight_per_sample;
  const std::vector<double>& s = emp.samples;

  std::vector<double> xs;
  xs.reserve(s.size() + 64 * law.pieces.size() + law.atoms.size() + 2 * law.pieces.size());
  xs.insert(xs.end(), s.begin(), s.end());
  for (const Atom& a : law.atoms) xs.push_back(a.location);
  for (const ACPiece& p : law.pieces) {
    xs.push_back(p.lo);
    xs.push_back(p.hi);
  }
  for (const auto& [x, d] : density_grid(law, 128)) {
    (void)d;
    xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (xs.size() < 2) return 0.0;

  // The integral runs over the hull of both supports; outside it both CDFs
  // are constant (0 below, the respective totals above), so when the masses
  // agree this is the full L1 distance between the CDFs.
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double x0 = xs[i];
    const double x1 = xs[i + 1];
    const double emp_c =
        static_cast<double>(std::upper_bound(s.begin(), s.end(), x0) - s.begin()) * w;
    const double d0 = std::abs(emp_c - cdf(x0));
    const double d1 = std::abs(emp_c - cdf.left(x1));
    total += 0.5 * (d0 + d1) * (x1 - x0);
  }
  return total;
}

DistanceReport convergence_distances(const EmpiricalDistribution& emp, const SpectralLaw& law) {
  DistanceReport r;
  r.ks = ks_distance(emp, law);
  r.w1 = w1_distance(emp, law);
  r.sample_count = static_cast<long long>(emp.samples.size());
  r.total_mass = emp.total_mass;
  return r;
}

std::vector<ConvergenceRow> convergence_report(double alpha, double beta,
                                               const std::string& target,
                                               const std::vector<int>& n_list, long long trials,
                                               std::uint64_t seed, Field field) {
  if (n_list.empty()) throw std::invalid_argument("the list of dimensions is empty");
  const SpectralLaw law = law_for_target(target, alpha, beta);
  std::vector<ConvergenceRow> rows;
  rows.reserve(n_list.size());
  SplitMix64 sm(seed);
  for (int n : n_list) {
    ExperimentConfig config;
    config.n = n;
    config.k = static_cast<int>(std::floor(alpha * n));
    config.l = static_cast<int>(std::floor(beta * n));
    config.trials = trials;
    config.seed = sm.next();
    config.field = field;
    config.target = target;
    const EmpiricalDistribution emp = empirical_spectrum(config);
    ConvergenceRow row;
    row.n = n;
    row.k = config.k;
    row.l = config.l;
    row.trials = trials;
    row.ks = ks_distance(emp, law);
    row.w1 = w1_distance(emp, law);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace freeproj
