// Command-line front end: principal angles, exact spectra, limit laws,
// Monte Carlo experiments, histogram figures, and verification suites.
//
// Exit codes: 0 success, 2 usage error, 3 domain error, 4 verification
// failure, 1 other runtime failure.

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "freeproj/block_spectrum.hpp"
#include "freeproj/csv.hpp"
#include "freeproj/figure.hpp"
#include "freeproj/json_io.hpp"
#include "freeproj/limit_laws.hpp"
#include "freeproj/montecarlo.hpp"
#include "freeproj/ncpoly.hpp"
#include "freeproj/rng.hpp"
#include "freeproj/subspace.hpp"
#include "freeproj/verify.hpp"

namespace {

using freeproj::ExperimentConfig;

struct CommonFlags {
  std::string config_path;
  int n = 0, k = 0, l = 0, threads = 0;
  long long trials = 1;
  std::uint64_t seed = 0;
  std::string field = "real", target = "pqp", poly, path = "exact-blocks";
  double tol_zero = freeproj::kDefaultAngleTol;
};

// Registers the flags that mirror the JSON config keys one-to-one.
void add_config_flags(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config_path, "JSON config file; flags override its keys");
  sub->add_option("--n", f.n, "ambient dimension");
  sub->add_option("--k", f.k, "dimension of the first subspace");
  sub->add_option("--l", f.l, "dimension of the second subspace");
  sub->add_option("--trials", f.trials, "number of independent trials");
  sub->add_option("--seed", f.seed, "base RNG seed (per-trial streams derive from it)");
  sub->add_option("--field", f.field, "scalar field: real | complex");
  sub->add_option("--target", f.target,
                  "spectral target: pqp | qpq | sum | commutator | anticommutator | "
                  "p_plus_qpq | angles | poly");
  sub->add_option("--poly", f.poly, "polynomial in p, q, p*, q* (used with --target poly)");
  sub->add_option("--path", f.path, "spectrum path: exact-blocks | dense-oracle");
  sub->add_option("--tol_zero", f.tol_zero, "cosine-domain tolerance for angle snapping");
  sub->add_option("--threads", f.threads, "worker threads (0 = hardware concurrency)");
}

ExperimentConfig assemble_config(const CLI::App* sub, const CommonFlags& f) {
  ExperimentConfig c;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw std::invalid_argument("cannot open config file '" + f.config_path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config parse error: " + std::string(e.what()));
    }
    c = freeproj::experiment_config_from_json(j);
  }
  if (sub->count("--n") > 0) c.n = f.n;
  if (sub->count("--k") > 0) c.k = f.k;
  if (sub->count("--l") > 0) c.l = f.l;
  if (sub->count("--trials") > 0) c.trials = f.trials;
  if (sub->count("--seed") > 0) c.seed = f.seed;
  if (sub->count("--field") > 0) c.field = freeproj::field_from_name(f.field);
  if (sub->count("--target") > 0) c.target = f.target;
  if (sub->count("--poly") > 0) c.poly = freeproj::parse_ncpoly(f.poly);
  if (sub->count("--path") > 0) c.path = freeproj::path_from_name(f.path);
  if (sub->count("--tol_zero") > 0) c.tol_zero = f.tol_zero;
  if (sub->count("--threads") > 0) c.threads = f.threads;
  return c;
}

// The same seed derivation as trial 0 of an experiment, so single-shot
// commands reproduce the first trial of a simulate run with the same seed.
std::pair<freeproj::Subspace, freeproj::Subspace> draw_pair(int n, int k, int l,
                                                            std::uint64_t seed,
                                                            freeproj::Field field) {
  freeproj::SplitMix64 sm(seed);
  const std::uint64_t seed_e = sm.next();
  const std::uint64_t seed_f = sm.next();
  return {freeproj::haar_subspace(n, k, seed_e, field),
          freeproj::haar_subspace(n, l, seed_f, field)};
}

freeproj::SpectralLaw law_from_name(const std::string& name, double alpha, double beta) {
  if (name == "boxtimes" || name == "pqp" || name == "qpq") {
    return freeproj::boxtimes_bernoulli({alpha, beta});
  }
  if (name == "boxplus" || name == "sum") return freeproj::boxplus_bernoulli({alpha, beta});
  if (name == "commutator") return freeproj::commutator_law({alpha, beta});
  if (name == "anticommutator") return freeproj::anticommutator_law({alpha, beta});
  if (name == "angle" || name == "angles") return freeproj::angle_law({alpha, beta});
  if (name == "p_plus_qpq") return freeproj::law_for_target("p_plus_qpq", alpha, beta);
  throw std::invalid_argument("unknown law name '" + name + "'");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed while writing '" + path + "'");
}

// ------------------------------------------------------------ subcommands --

int cmd_angles(int n, int k, int l, std::uint64_t seed, const std::string& field,
               double tol) {
  const auto [E, F] = draw_pair(n, k, l, seed, freeproj::field_from_name(field));
  const freeproj::PrincipalAngleSpectrum s = freeproj::principal_angles(E, F, tol);
  std::string out = "angle\n";
  for (double a : s.angles) {
    out += freeproj::format_double(a);
    out.push_back('\n');
  }
  std::cout << out;
  return 0;
}

int cmd_spectrum(int n, int k, int l, std::uint64_t seed, const std::string& field,
                 const std::string& poly_str, const std::string& path_str, double tol) {
  const freeproj::NCPolynomial poly = freeproj::parse_ncpoly(poly_str);
  if (!poly.is_self_adjoint()) {
    throw std::domain_error("the polynomial must be self-adjoint to have a real spectrum");
  }
  const freeproj::Field field_v = freeproj::field_from_name(field);
  const freeproj::SpectrumPath path = freeproj::path_from_name(path_str);
  const auto [E, F] = draw_pair(n, k, l, seed, field_v);

  std::string out = "eigenvalue,multiplicity\n";
  if (path == freeproj::SpectrumPath::ExactBlocks) {
    const freeproj::PrincipalAngleSpectrum ang = freeproj::principal_angles(E, F, tol);
    const freeproj::BlockDecomposition blocks = freeproj::block_structure(n, k, l, ang);
    const freeproj::SpectrumWithMultiplicity s = freeproj::exact_spectrum(poly, blocks);
    for (const auto& [value, mult] : s.entries) {
      out += freeproj::csv_join({freeproj::format_double(value), std::to_string(mult)});
      out.push_back('\n');
    }
  } else {
    const Eigen::MatrixXcd P = freeproj::projector(E);
    const Eigen::MatrixXcd Q = freeproj::projector(F);
    const Eigen::MatrixXcd M = poly.evaluate(P, Q);
    const Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("dense eigensolver failed to converge");
    }
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      out += freeproj::csv_join({freeproj::format_double(solver.eigenvalues()[i]), "1"});
      out.push_back('\n');
    }
  }
  std::cout << out;
  return 0;
}

int cmd_law(const std::string& name, double alpha, double beta, int grid) {
  if (grid < 2) throw std::invalid_argument("--grid must be at least 2");
  const freeproj::SpectralLaw law = law_from_name(name, alpha, beta);
  std::string out = "x,density,cdf\n";
  for (const auto& [x, density] : freeproj::density_grid(law, grid)) {
    out += freeproj::csv_join({freeproj::format_double(x), freeproj::format_double(density),
                               freeproj::format_double(freeproj::cdf(law, x))});
    out.push_back('\n');
  }
  out += "\natom_location,atom_mass\n";
  for (const freeproj::Atom& a : law.atoms) {
    out += freeproj::csv_join(
        {freeproj::format_double(a.location), freeproj::format_double(a.mass)});
    out.push_back('\n');
  }
  std::cout << out;
  return 0;
}

int cmd_simulate(const ExperimentConfig& config, const std::vector<int>& n_list, double alpha,
                 double beta) {
  if (!n_list.empty()) {
    const std::vector<freeproj::ConvergenceRow> rows = freeproj::convergence_report(
        alpha, beta, config.target, n_list, config.trials, config.seed, config.field);
    std::string out = "n,k,l,trials,ks,w1\n";
    for (const freeproj::ConvergenceRow& r : rows) {
      out += freeproj::csv_join({std::to_string(r.n), std::to_string(r.k), std::to_string(r.l),
                                 std::to_string(r.trials), freeproj::format_double(r.ks),
                                 freeproj::format_double(r.w1)});
      out.push_back('\n');
    }
    std::cout << out;
    return 0;
  }
  const freeproj::EmpiricalDistribution emp = freeproj::empirical_spectrum(config);
  std::string out = "sample\n";
  for (double x : emp.samples) {
    out += freeproj::format_double(x);
    out.push_back('\n');
  }
  std::cout << out;
  return 0;
}

int cmd_figure(const ExperimentConfig& config, const std::string& out_prefix, int bins,
               std::string title, int overlay_points) {
  if (config.target == "poly") {
    throw std::domain_error("no closed-form overlay law is available for --target poly");
  }
  if (config.n <= 0) throw std::invalid_argument("ambient dimension must be positive");
  const double alpha = static_cast<double>(config.k) / config.n;
  const double beta = static_cast<double>(config.l) / config.n;
  const freeproj::SpectralLaw law = freeproj::law_for_target(config.target, alpha, beta);
  const freeproj::EmpiricalDistribution emp = freeproj::empirical_spectrum(config);
  const freeproj::Histogram hist = freeproj::build_histogram(emp, &law, bins);

  if (title.empty()) {
    title = config.target + " spectrum (n=" + std::to_string(config.n) +
            ", k=" + std::to_string(config.k) + ", l=" + std::to_string(config.l) + ")";
  }
  freeproj::FigureSpec spec;
  spec.title = title;
  spec.bins = bins;
  spec.overlay_points = overlay_points;

  write_file(out_prefix + ".svg", freeproj::render_figure_svg(hist, &law, spec));
  write_file(out_prefix + "_hist.csv", freeproj::histogram_csv(hist));
  write_file(out_prefix + "_overlay.csv", freeproj::overlay_csv(law, overlay_points));
  std::cout << "wrote " << out_prefix << ".svg, " << out_prefix << "_hist.csv, " << out_prefix
            << "_overlay.csv\n";
  return 0;
}

int cmd_verify(const std::string& suite, bool quick, const std::string& report_path,
               const std::string& cli_path) {
  std::vector<std::string> suites;
  if (suite.empty() || suite == "all") {
    suites = freeproj::verify_suite_names();
  } else {
    suites.push_back(suite);
  }

  nlohmann::json report;
  report["quick"] = quick;
  report["suites"] = nlohmann::json::array();
  bool all_ok = true;
  for (const std::string& name : suites) {
    const freeproj::SuiteResult r = freeproj::run_verify_suite(name, quick, cli_path);
    nlohmann::json js;
    js["suite"] = r.suite;
    js["elapsed_seconds"] = r.elapsed_seconds;
    js["ok"] = r.ok();
    js["checks"] = nlohmann::json::array();
    for (const freeproj::CheckResult& c : r.checks) {
      std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << r.suite << "/" << c.name
                << " value=" << freeproj::format_double(c.value)
                << " threshold=" << freeproj::format_double(c.threshold);
      if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
      std::cout << "\n";
      js["checks"].push_back(nlohmann::json{{"name", c.name},
                                            {"pass", c.pass},
                                            {"value", c.value},
                                            {"threshold", c.threshold},
                                            {"detail", c.detail}});
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", r.elapsed_seconds);
    std::cout << "suite " << r.suite << ": " << (r.ok() ? "ok" : "FAILED") << " (" << buf
              << " s)\n";
    report["suites"].push_back(js);
    all_ok = all_ok && r.ok();
  }
  report["ok"] = all_ok;
  if (!report_path.empty()) write_file(report_path, report.dump(2) + "\n");
  return all_ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Principal angles, exact two-projection spectra, and free-probability "
               "limit laws"};
  app.require_subcommand(1);

  // angles
  auto* angles = app.add_subcommand("angles", "principal angles of a Haar-random pair");
  int a_n = 0, a_k = 0, a_l = 0;
  std::uint64_t a_seed = 0;
  std::string a_field = "real";
  double a_tol = freeproj::kDefaultAngleTol;
  angles->add_option("--n", a_n, "ambient dimension")->required();
  angles->add_option("--k", a_k, "dimension of the first subspace")->required();
  angles->add_option("--l", a_l, "dimension of the second subspace")->required();
  angles->add_option("--seed", a_seed, "RNG seed");
  angles->add_option("--field", a_field, "scalar field: real | complex");
  angles->add_option("--tol", a_tol, "cosine-domain tolerance for angle snapping");

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "exact spectrum of a polynomial in the "
                                                  "two projections");
  int s_n = 0, s_k = 0, s_l = 0;
  std::uint64_t s_seed = 0;
  std::string s_field = "real", s_poly = "p*q*p", s_path = "exact-blocks";
  double s_tol = freeproj::kDefaultAngleTol;
  spectrum->add_option("--n", s_n, "ambient dimension")->required();
  spectrum->add_option("--k", s_k, "dimension of the first subspace")->required();
  spectrum->add_option("--l", s_l, "dimension of the second subspace")->required();
  spectrum->add_option("--seed", s_seed, "RNG seed");
  spectrum->add_option("--field", s_field, "scalar field: real | complex");
  spectrum->add_option("--poly", s_poly, "self-adjoint polynomial in p, q, p*, q*");
  spectrum->add_option("--path", s_path, "exact-blocks | dense-oracle");
  spectrum->add_option("--tol", s_tol, "cosine-domain tolerance for angle snapping");

  // law
  auto* law = app.add_subcommand("law", "closed-form limit law as a density/CDF grid");
  std::string w_name;
  double w_alpha = 0.5, w_beta = 0.5;
  int w_grid = 256;
  law->add_option("name", w_name,
                  "law name: boxtimes | boxplus | commutator | anticommutator | angle | "
                  "p_plus_qpq")
      ->required();
  law->add_option("--alpha", w_alpha, "normalized trace of the first projection");
  law->add_option("--beta", w_beta, "normalized trace of the second projection");
  law->add_option("--grid", w_grid, "density grid points per piece");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo spectra: raw samples, or a "
                                                  "KS/W1 convergence table with --n-list");
  CommonFlags sim_flags;
  add_config_flags(simulate, sim_flags);
  std::vector<int> sim_n_list;
  double sim_alpha = 0.5, sim_beta = 0.5;
  simulate->add_option("--n-list", sim_n_list, "comma-separated ambient dimensions; "
                                               "emits a convergence table (k = floor(alpha n))")
      ->delimiter(',');
  simulate->add_option("--alpha", sim_alpha, "trace parameter for --n-list mode");
  simulate->add_option("--beta", sim_beta, "trace parameter for --n-list mode");

  // figure
  auto* figure = app.add_subcommand("figure", "histogram of an empirical spectrum with the "
                                              "limit density overlaid (SVG + CSV pair)");
  CommonFlags fig_flags;
  add_config_flags(figure, fig_flags);
  std::string fig_out, fig_title;
  int fig_bins = 0, fig_overlay_points = 512;
  figure->add_option("--out", fig_out, "output path prefix (writes .svg, _hist.csv, "
                                       "_overlay.csv)")
      ->required();
  figure->add_option("--bins", fig_bins, "histogram bins (0 = automatic)");
  figure->add_option("--title", fig_title, "figure title");
  figure->add_option("--overlay-points", fig_overlay_points, "overlay grid points per piece");

  // verify
  auto* verify = app.add_subcommand("verify", "run verification suites");
  std::string v_suite, v_report;
  bool v_quick = false;
  verify->add_option("suite", v_suite,
                     "suite name (default: all): closed-forms | generic-spectrum | "
                     "angle-recovery | law-masses | law-moments | uniform-angles | "
                     "histogram-w1 | dual-paths | special-cases | determinism");
  verify->add_flag("--quick", v_quick, "smaller sizes for interactive runs");
  verify->add_option("--report", v_report, "write a JSON report to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*angles) return cmd_angles(a_n, a_k, a_l, a_seed, a_field, a_tol);
    if (*spectrum) return cmd_spectrum(s_n, s_k, s_l, s_seed, s_field, s_poly, s_path, s_tol);
    if (*law) return cmd_law(w_name, w_alpha, w_beta, w_grid);
    if (*simulate) {
      return cmd_simulate(assemble_config(simulate, sim_flags), sim_n_list, sim_alpha,
                          sim_beta);
    }
    if (*figure) {
      return cmd_figure(assemble_config(figure, fig_flags), fig_out, fig_bins, fig_title,
                        fig_overlay_points);
    }
    if (*verify) {
      std::string cli_path = argv[0];
      std::error_code ec;
      const std::filesystem::path self = std::filesystem::canonical("/proc/self/exe", ec);
      if (!ec) cli_path = self.string();
      return cmd_verify(v_suite, v_quick, v_report, cli_path);
    }
  } catch (const freeproj::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
