#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "freeproj/csv.hpp"
#include "freeproj/json_io.hpp"
#include "freeproj/subspace.hpp"

using namespace freeproj;

TEST_CASE("format_double_round_trips_exactly") {
  const std::vector<double> values = {0.0,
                                      0.5,
                                      1.0 / 3.0,
                                      0.1,
                                      -2.718281828459045,
                                      1e-300,
                                      6.02214076e23,
                                      std::numeric_limits<double>::min(),
                                      std::numeric_limits<double>::epsilon()};
  for (double v : values) {
    const std::string text = format_double(v);
    const double back = std::strtod(text.c_str(), nullptr);
    CHECK(back == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("csv_join_and_read_round_trip") {
  const std::string line1 = csv_join({"a", "b", "c"});
  CHECK(line1 == "a,b,c");
  const std::string text = line1 + "\n" + csv_join({"1.5", "2"}) + "\n";
  const auto rows = csv_read(text);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"a", "b", "c"});
  CHECK(rows[1] == std::vector<std::string>{"1.5", "2"});

  // Carriage returns are tolerated, a missing trailing newline keeps the row.
  const auto crlf = csv_read("x,y\r\n3,4");
  REQUIRE(crlf.size() == 2);
  CHECK(crlf[1] == std::vector<std::string>{"3", "4"});
}

TEST_CASE("subspace_json_round_trip_preserves_the_basis") {
  for (Field field : {Field::Real, Field::Complex}) {
    const Subspace s = haar_subspace(9, 4, 77, field);
    const nlohmann::json j = to_json(s);
    CHECK(j.at("n") == 9);
    CHECK(j.at("k") == 4);
    CHECK(j.at("field") == field_name(field));
    // Real-field bases serialize as plain numbers.
    if (field == Field::Real) CHECK(j.at("basis").at(0).is_number());
    const Subspace back = subspace_from_json(j);
    CHECK(back.ambient == s.ambient);
    CHECK(back.dim == s.dim);
    CHECK(back.field == s.field);
    CHECK(back.basis == s.basis);
  }
}

TEST_CASE("subspace_json_validates_shapes") {
  nlohmann::json j = to_json(haar_subspace(4, 2, 1, Field::Real));
  j["k"] = 3;  // basis length no longer matches
  CHECK_THROWS_AS(subspace_from_json(j), std::invalid_argument);
  nlohmann::json missing = {{"n", 4}, {"k", 2}, {"field", "real"}};
  CHECK_THROWS_AS(subspace_from_json(missing), std::invalid_argument);
}

TEST_CASE("angle_spectrum_json_round_trip") {
  const Subspace e = haar_subspace(10, 4, 5, Field::Complex);
  const Subspace f = haar_subspace(10, 7, 6, Field::Complex);
  const PrincipalAngleSpectrum s = principal_angles(e, f);
  const PrincipalAngleSpectrum back = angle_spectrum_from_json(to_json(s));
  CHECK(back.angles == s.angles);
  CHECK(back.dim_intersection == s.dim_intersection);
  CHECK(back.dim_right == s.dim_right);
  CHECK(back.k == s.k);
  CHECK(back.l == s.l);
  CHECK(back.n == s.n);
  CHECK(back.tol_zero == s.tol_zero);
}

TEST_CASE("ncpoly_json_round_trip_uses_1_for_the_empty_word") {
  const NCPolynomial p = parse_ncpoly("i*(p*q-q*p)+2");
  const nlohmann::json j = to_json(p);
  CHECK(j.contains("1"));
  CHECK(j.contains("pq"));
  const NCPolynomial back = ncpoly_from_json(j);
  CHECK(back.terms() == p.terms());
  CHECK_THROWS_AS(ncpoly_from_json(nlohmann::json::array()), std::invalid_argument);
}

TEST_CASE("spectral_law_json_shape") {
  const nlohmann::json j = to_json(boxplus_bernoulli({0.3, 0.6}));
  REQUIRE(j.contains("atoms"));
  REQUIRE(j.contains("pieces"));
  CHECK(j.at("atoms").size() == 2);
  CHECK(j.at("pieces").size() == 2);
  const auto& piece = j.at("pieces").at(0);
  CHECK(piece.contains("a"));
  CHECK(piece.contains("b"));
  CHECK(piece.contains("mass"));
  CHECK(piece.contains("kind"));
}

TEST_CASE("experiment_config_json_parses_and_rejects_unknown_keys") {
  const nlohmann::json j = {{"n", 100},        {"k", 30},          {"l", 60},
                            {"trials", 5},     {"seed", 42},       {"field", "complex"},
                            {"target", "sum"}, {"tol_zero", 1e-9}, {"path", "dense-oracle"},
                            {"threads", 2}};
  const ExperimentConfig c = experiment_config_from_json(j);
  CHECK(c.n == 100);
  CHECK(c.k == 30);
  CHECK(c.l == 60);
  CHECK(c.trials == 5);
  CHECK(c.seed == 42);
  CHECK(c.field == Field::Complex);
  CHECK(c.target == "sum");
  CHECK(c.tol_zero == 1e-9);
  CHECK(c.path == SpectrumPath::DenseOracle);
  CHECK(c.threads == 2);

  CHECK_THROWS_AS(experiment_config_from_json({{"dimension", 10}}), std::invalid_argument);

  // Polynomials may be given as text or as the JSON object form.
  const ExperimentConfig t =
      experiment_config_from_json({{"target", "poly"}, {"poly", "p*q+q*p"}});
  CHECK(t.poly.is_self_adjoint());
  const ExperimentConfig o = experiment_config_from_json(
      {{"target", "poly"}, {"poly", {{"pq", {1.0, 0.0}}, {"qp", {1.0, 0.0}}}}});
  CHECK(o.poly.terms() == t.poly.terms());
}
