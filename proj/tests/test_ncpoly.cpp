#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "freeproj/ncpoly.hpp"

using namespace freeproj;

namespace {
constexpr double kPi = std::numbers::pi;
using C = std::complex<double>;
}  // namespace

TEST_CASE("parse_canonical_text_round_trip") {
  for (const char* text : {"p*q*p", "p+q", "i*(p*q-q*p)", "p*q+q*p", "p+q*p*q",
                           "p*q*p*q+q*p*q*p", "2.5*p-0.5", "(p+q)^2"}) {
    const NCPolynomial a = parse_ncpoly(text);
    const NCPolynomial b = parse_ncpoly(a.to_string());
    CHECK(a.terms() == b.terms());
  }
}

TEST_CASE("parse_expands_powers_and_products") {
  const NCPolynomial sq = parse_ncpoly("(p+q)^2");
  // (p+q)^2 = pp + pq + qp + qq in the free algebra.
  REQUIRE(sq.terms().size() == 4);
  CHECK(sq.terms().at("pp") == C(1.0, 0.0));
  CHECK(sq.terms().at("pq") == C(1.0, 0.0));
  CHECK(sq.terms().at("qp") == C(1.0, 0.0));
  CHECK(sq.terms().at("qq") == C(1.0, 0.0));
  CHECK(sq.degree() == 2);

  const NCPolynomial cancel = parse_ncpoly("p*q-p*q");
  CHECK(cancel.is_zero());
}

TEST_CASE("parse_handles_constants_and_the_imaginary_unit") {
  const NCPolynomial two = parse_ncpoly("2");
  REQUIRE(two.terms().size() == 1);
  CHECK(two.terms().at("") == C(2.0, 0.0));
  CHECK(two.degree() == 0);

  const NCPolynomial unit = parse_ncpoly("i");
  CHECK(unit.terms().at("") == C(0.0, 1.0));
  CHECK_FALSE(unit.is_self_adjoint());

  const NCPolynomial neg = parse_ncpoly("-p");
  CHECK(neg.terms().at("p") == C(-1.0, 0.0));
}

TEST_CASE("parse_reports_position_on_syntax_errors") {
  CHECK_THROWS_AS(parse_ncpoly(""), ParseError);
  CHECK_THROWS_AS(parse_ncpoly("p*"), ParseError);
  CHECK_THROWS_AS(parse_ncpoly("p q"), ParseError);
  CHECK_THROWS_AS(parse_ncpoly("2p"), ParseError);
  CHECK_THROWS_AS(parse_ncpoly("p^0"), ParseError);
  CHECK_THROWS_AS(parse_ncpoly("(p+q"), ParseError);

  try {
    parse_ncpoly("p*x");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.position() == 2);
  }
}

TEST_CASE("parse_enforces_the_word_length_cap") {
  CHECK_NOTHROW(parse_ncpoly("p^64"));
  CHECK_THROWS_AS(parse_ncpoly("p^65"), ParseError);
}

TEST_CASE("adjoint_reverses_words_and_conjugates") {
  const NCPolynomial pq = parse_ncpoly("p*q");
  const NCPolynomial qp = parse_ncpoly("q*p");
  CHECK(pq.adjoint().terms() == qp.terms());
  CHECK_FALSE(pq.is_self_adjoint());

  // The canonical self-adjoint examples.
  CHECK(parse_ncpoly("p*q*p").is_self_adjoint());
  CHECK(parse_ncpoly("p+q").is_self_adjoint());
  CHECK(parse_ncpoly("i*(p*q-q*p)").is_self_adjoint());
  CHECK(parse_ncpoly("p*q+q*p").is_self_adjoint());
  CHECK(parse_ncpoly("p+q*p*q").is_self_adjoint());
  CHECK_FALSE(parse_ncpoly("i*(p*q+q*p)").is_self_adjoint());
}

TEST_CASE("evaluate_scalar_matches_commuting_substitution") {
  const NCPolynomial poly = parse_ncpoly("p*q*p+2*q-3");
  const C value = poly.evaluate_scalar(C(0.5, 0.0), C(2.0, 0.0));
  // 0.5 * 2 * 0.5 + 4 - 3 = 1.5
  CHECK(std::abs(value - C(1.5, 0.0)) < 1e-15);
}

TEST_CASE("evaluate_on_matrices_matches_direct_arithmetic") {
  const NCPolynomial poly = parse_ncpoly("p*q+q*p");
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(3, 3);
  p(0, 0) = 1.0;
  p(1, 1) = 1.0;
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(3, 3);
  q(1, 1) = 1.0;
  q(2, 2) = 1.0;
  const Eigen::MatrixXcd direct = p * q + q * p;
  const Eigen::MatrixXcd via_poly = poly.evaluate(p, q);
  CHECK((direct - via_poly).cwiseAbs().maxCoeff() < 1e-15);

  Eigen::MatrixXcd wrong = Eigen::MatrixXcd::Zero(2, 2);
  CHECK_THROWS_AS(poly.evaluate(p, wrong), std::invalid_argument);
}

TEST_CASE("angle_block_matrices_are_projections") {
  const Eigen::Matrix2cd p = angle_block_p();
  CHECK((p * p - p).cwiseAbs().maxCoeff() == 0.0);

  for (double theta : {0.0, 0.3, kPi / 4.0, 1.2, kPi / 2.0}) {
    const Eigen::Matrix2cd q = angle_block_q(theta);
    CHECK((q - q.adjoint()).cwiseAbs().maxCoeff() < 1e-16);
    CHECK((q * q - q).cwiseAbs().maxCoeff() < 1e-15);
    // Top-left entry is cos^2 theta.
    CHECK(std::abs(q(0, 0).real() - std::cos(theta) * std::cos(theta)) < 1e-15);
  }
  CHECK_THROWS_AS(evaluate_on_angle_block(parse_ncpoly("p"), -0.1), std::domain_error);
}

TEST_CASE("evaluate_on_angle_block_reproduces_pqp") {
  const NCPolynomial pqp = parse_ncpoly("p*q*p");
  const double theta = 0.7;
  const Eigen::Matrix2cd m = evaluate_on_angle_block(pqp, theta);
  const double c2 = std::cos(theta) * std::cos(theta);
  // PQP on the angle block is diag(cos^2 theta, 0).
  CHECK(std::abs(m(0, 0) - C(c2, 0.0)) < 1e-15);
  CHECK(std::abs(m(0, 1)) < 1e-15);
  CHECK(std::abs(m(1, 0)) < 1e-15);
  CHECK(std::abs(m(1, 1)) < 1e-15);
}

TEST_CASE("add_term_validates_words") {
  NCPolynomial poly;
  CHECK_THROWS_AS(poly.add_term("px", C(1.0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(poly.add_term(std::string(65, 'p'), C(1.0, 0.0)), std::invalid_argument);
  poly.add_term("pq", C(1.0, 0.0));
  poly.add_term("pq", C(-1.0, 0.0));
  CHECK(poly.is_zero());
}
