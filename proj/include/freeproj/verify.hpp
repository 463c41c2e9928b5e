#pragma once

#include <string>
#include <vector>

namespace freeproj {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;      // measured quantity
  double threshold = 0.0;  // bound it was compared against
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  bool quick = false;
  double elapsed_seconds = 0.0;
  std::vector<CheckResult> checks;

  bool ok() const;
};

// Verification suites, one per acceptance criterion:
//   closed-forms      closed-form spectra vs the dense eigensolver oracle
//   generic-spectrum  exact_spectrum of degree-4 polynomials vs the oracle
//   angle-recovery    planted-angle recovery and the principal-vector pattern
//   law-masses        atom/AC mass bookkeeping over a parameter grid
//   law-moments       law means (quadrature) with a Monte Carlo cross-check
//   uniform-angles    half-dimensional angle statistics vs the uniform law
//   histogram-w1      half-dimensional P + QPQ samples vs the limit density
//   dual-paths        closed-form densities vs their pushforward construction
//   special-cases     arcsine special cases of the laws at alpha = beta = 1/2
//   determinism       byte-identical CLI outputs for identical seeds
// quick mode shrinks sizes for interactive runs; thresholds stay honest.
// cli_path is the binary used by the determinism suite.
std::vector<std::string> verify_suite_names();
SuiteResult run_verify_suite(const std::string& suite, bool quick, const std::string& cli_path);

}  // namespace freeproj
