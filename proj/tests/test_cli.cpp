#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "freeproj/csv.hpp"

#ifndef FREEPROJ_CLI_PATH
#error "FREEPROJ_CLI_PATH must point at the freeproj binary"
#endif

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(FREEPROJ_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult res;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) res.output.append(buf, got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::filesystem::path make_temp_dir() {
  std::string tmpl = (std::filesystem::temp_directory_path() / "freeproj_cli_XXXXXX").string();
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  REQUIRE(mkdtemp(buf.data()) != nullptr);
  return std::filesystem::path(buf.data());
}

}  // namespace

TEST_CASE("cli_usage_errors_exit_with_2") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("angles --no-such-flag 3").exit_code == 2);
  CHECK(run_cli("unknown-subcommand").exit_code == 2);
  CHECK(run_cli("angles --n ten").exit_code == 2);
}

TEST_CASE("cli_domain_errors_exit_with_3") {
  CHECK(run_cli("angles --n 10 --k 20 --l 8").exit_code == 3);
  CHECK(run_cli("spectrum --n 12 --k 4 --l 6 --seed 5 --poly p*q").exit_code == 3);
  CHECK(run_cli("law no-such-law").exit_code == 3);
  CHECK(run_cli("law boxplus --alpha 1.5 --beta 0.5").exit_code == 3);
  CHECK(run_cli("simulate --target pqp --n 40 --k 12 --l 20 --trials 0").exit_code == 3);
  CHECK(run_cli("verify no-such-suite").exit_code == 3);
}

TEST_CASE("cli_angles_reports_the_generic_pattern") {
  const CliResult res = run_cli("angles --n 10 --k 7 --l 8 --seed 3");
  REQUIRE(res.exit_code == 0);
  const auto rows = freeproj::csv_read(res.output);
  REQUIRE(rows.size() >= 8);
  CHECK(rows[0] == std::vector<std::string>{"angle"});
  int zeros = 0, interior = 0;
  for (std::size_t i = 1; i < 8; ++i) {
    const double v = std::strtod(rows[i][0].c_str(), nullptr);
    if (v == 0.0) {
      ++zeros;
    } else if (v > 0.0 && v < 1.5707963267948966) {
      ++interior;
    }
  }
  CHECK(zeros == 5);
  CHECK(interior == 2);
}

TEST_CASE("cli_spectrum_emits_multiplicity_rows_adding_to_n") {
  const CliResult res = run_cli("spectrum --n 12 --k 4 --l 6 --seed 5 --poly p+q");
  REQUIRE(res.exit_code == 0);
  const auto rows = freeproj::csv_read(res.output);
  REQUIRE(rows.size() >= 2);
  CHECK(rows[0] == std::vector<std::string>{"eigenvalue", "multiplicity"});
  long long total = 0;
  double prev = -1e300;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() < 2) continue;  // trailing blank line
    const double v = std::strtod(rows[i][0].c_str(), nullptr);
    CHECK(v > prev);
    prev = v;
    total += std::strtoll(rows[i][1].c_str(), nullptr, 10);
  }
  CHECK(total == 12);
}

TEST_CASE("cli_spectrum_paths_agree") {
  const CliResult blocks =
      run_cli("spectrum --n 30 --k 9 --l 18 --seed 11 --poly p*q+q*p --path exact-blocks");
  const CliResult oracle =
      run_cli("spectrum --n 30 --k 9 --l 18 --seed 11 --poly p*q+q*p --path dense-oracle");
  REQUIRE(blocks.exit_code == 0);
  REQUIRE(oracle.exit_code == 0);
  // Expand multiplicities and compare the sorted eigenvalue lists.
  auto expand = [](const std::string& text) {
    std::vector<double> out;
    for (const auto& row : freeproj::csv_read(text)) {
      if (row.size() < 2 || row[0] == "eigenvalue") continue;
      const double v = std::strtod(row[0].c_str(), nullptr);
      const long long m = std::strtoll(row[1].c_str(), nullptr, 10);
      for (long long i = 0; i < m; ++i) out.push_back(v);
    }
    return out;
  };
  const std::vector<double> a = expand(blocks.output);
  const std::vector<double> b = expand(oracle.output);
  REQUIRE(a.size() == 30);
  REQUIRE(b.size() == 30);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-8);
}

TEST_CASE("cli_law_grid_and_atom_table") {
  const CliResult res = run_cli("law boxplus --alpha 0.5 --beta 0.5 --grid 32");
  REQUIRE(res.exit_code == 0);
  CHECK(res.output.find("x,density,cdf\n") == 0);
  CHECK(res.output.find("\n\natom_location,atom_mass") != std::string::npos);

  // Fully atomic law: no grid rows, a single atom row of mass 1 at 0.
  const CliResult atom = run_cli("law boxtimes --alpha 0 --beta 0.3");
  REQUIRE(atom.exit_code == 0);
  const auto rows = freeproj::csv_read(atom.output);
  bool found = false;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    if (rows[i].size() == 1 && rows[i][0] == "atom_location,atom_mass") continue;
    if (rows[i].size() == 2 && rows[i][0] == "atom_location") {
      REQUIRE(i + 1 < rows.size());
      CHECK(rows[i + 1] == std::vector<std::string>{"0", "1"});
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("cli_law_cdf_column_is_consistent") {
  const CliResult res = run_cli("law boxtimes --alpha 0.3 --beta 0.6 --grid 200");
  REQUIRE(res.exit_code == 0);
  const auto rows = freeproj::csv_read(res.output);
  double prev_cdf = -1.0;
  for (const auto& row : rows) {
    if (row.size() != 3 || row[0] == "x") continue;
    const double c = std::strtod(row[2].c_str(), nullptr);
    CHECK(c >= prev_cdf - 1e-12);  // nondecreasing
    prev_cdf = c;
    CHECK(c <= 1.0 + 1e-9);
  }
  CHECK(prev_cdf > 0.99);  // reaches the full mass near the upper edge
}

TEST_CASE("cli_simulate_convergence_table") {
  const CliResult res =
      run_cli("simulate --target pqp --alpha 0.3 --beta 0.6 --n-list 20,40 --trials 2 --seed 9");
  REQUIRE(res.exit_code == 0);
  const auto rows = freeproj::csv_read(res.output);
  REQUIRE(rows.size() >= 3);
  CHECK(rows[0] == std::vector<std::string>{"n", "k", "l", "trials", "ks", "w1"});
  CHECK(rows[1][0] == "20");
  CHECK(rows[2][0] == "40");
}

TEST_CASE("cli_config_file_with_flag_overrides") {
  const std::filesystem::path dir = make_temp_dir();
  const std::filesystem::path cfg = dir / "config.json";
  {
    std::ofstream out(cfg);
    out << R"({"n": 30, "k": 9, "l": 15, "trials": 2, "seed": 5, "target": "sum"})";
  }
  const CliResult res = run_cli("simulate --config " + cfg.string() + " --trials 1");
  REQUIRE(res.exit_code == 0);
  const auto rows = freeproj::csv_read(res.output);
  // Header plus one trial of 30 samples.
  CHECK(rows[0] == std::vector<std::string>{"sample"});
  long long samples = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!rows[i].empty() && !rows[i][0].empty()) ++samples;
  }
  CHECK(samples == 30);

  // Unknown config keys are rejected.
  const std::filesystem::path bad = dir / "bad.json";
  {
    std::ofstream out(bad);
    out << R"({"dimension": 30})";
  }
  CHECK(run_cli("simulate --config " + bad.string()).exit_code == 3);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli_figure_writes_svg_and_csv_pair") {
  const std::filesystem::path dir = make_temp_dir();
  const std::string prefix = (dir / "fig").string();
  const CliResult res = run_cli(
      "figure --target sum --n 40 --k 12 --l 24 --trials 2 --seed 31 --bins 24 --out " + prefix);
  REQUIRE(res.exit_code == 0);
  for (const char* suffix : {".svg", "_hist.csv", "_overlay.csv"}) {
    const std::filesystem::path p(prefix + suffix);
    CHECK(std::filesystem::exists(p));
    CHECK(std::filesystem::file_size(p) > 0);
  }
  std::ifstream svg(prefix + ".svg");
  std::string first_line;
  std::getline(svg, first_line);
  CHECK(first_line.rfind("<svg", 0) == 0);

  // The empty experiment is rejected before any file is written.
  const std::string prefix2 = (dir / "fig2").string();
  CHECK(run_cli("figure --target sum --n 40 --k 12 --l 24 --trials 0 --out " + prefix2)
            .exit_code == 3);
  CHECK_FALSE(std::filesystem::exists(prefix2 + ".svg"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli_verify_quick_suite_reports_and_exits_zero") {
  const std::filesystem::path dir = make_temp_dir();
  const std::filesystem::path report = dir / "report.json";
  const CliResult res = run_cli("verify law-masses --quick --report " + report.string());
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("[PASS]") != std::string::npos);
  CHECK(res.output.find("law-masses") != std::string::npos);

  std::ifstream in(report);
  REQUIRE(in.good());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("\"checks\"") != std::string::npos);
  CHECK(text.find("\"pass\"") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli_outputs_are_seed_deterministic") {
  const std::string cmd = "angles --n 25 --k 8 --l 13 --seed 77 --field complex";
  const CliResult a = run_cli(cmd);
  const CliResult b = run_cli(cmd);
  REQUIRE(a.exit_code == 0);
  CHECK(a.output == b.output);
  const CliResult c = run_cli("angles --n 25 --k 8 --l 13 --seed 78 --field complex");
  CHECK(a.output != c.output);
}
