#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>

namespace freeproj {

// Words over the two letters are capped so parser input cannot blow up the
// evaluation cost. A word is stored as a string over {'p','q'}; the empty
// word is the unit of the algebra.
inline constexpr int kMaxWordLength = 64;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Noncommutative *-polynomial in two letters p, q with complex coefficients.
// Terms are kept in a canonical map keyed by the word (lexicographic order,
// p < q), with exact-zero coefficients dropped.
class NCPolynomial {
 public:
  using Coeff = std::complex<double>;
  using Terms = std::map<std::string, Coeff>;

  NCPolynomial() = default;

  static NCPolynomial zero() { return NCPolynomial(); }
  static NCPolynomial constant(Coeff c);
  static NCPolynomial letter(char letter);  // 'p' or 'q'

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // length of the longest word, 0 for constants

  void add_term(const std::string& word, Coeff c);

  NCPolynomial operator+(const NCPolynomial& rhs) const;
  NCPolynomial operator-(const NCPolynomial& rhs) const;
  NCPolynomial operator*(const NCPolynomial& rhs) const;
  NCPolynomial operator*(Coeff scalar) const;
  NCPolynomial operator-() const;
  NCPolynomial pow(int exponent) const;  // exponent >= 1

  // Adjoint: reverse each word and conjugate its coefficient (p and q are
  // self-adjoint letters).
  NCPolynomial adjoint() const;
  bool is_self_adjoint() const;

  // Substitute commuting scalars for the letters. Valid because only the
  // letter counts of each word matter in that case.
  Coeff evaluate_scalar(Coeff p_value, Coeff q_value) const;

  // Substitute square matrices of equal size for the letters.
  Eigen::MatrixXcd evaluate(const Eigen::MatrixXcd& P, const Eigen::MatrixXcd& Q) const;

  // Canonical text form. Parsing the result reproduces the polynomial.
  std::string to_string() const;

 private:
  Terms terms_;
};

// Grammar (whitespace free between tokens):
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' positive-integer)?
//   atom   := number | 'i' | 'p' | 'q' | '(' expr ')' | '-' atom
// Numbers are decimal doubles; 'i' is the imaginary unit. Multiplication must
// be written explicitly. Throws ParseError with the character position on
// syntax errors and unknown letters.
NCPolynomial parse_ncpoly(const std::string& text);

// The two-projection pair acting on a single principal-angle plane:
// P = [[1,0],[0,0]] and Q = Q(theta) = [[c^2, cs],[cs, s^2]] with
// c = cos(theta), s = sin(theta).
Eigen::Matrix2cd angle_block_p();
Eigen::Matrix2cd angle_block_q(double theta);

// Evaluate the polynomial on the 2x2 pair above. Requires theta in [0, pi/2].
Eigen::Matrix2cd evaluate_on_angle_block(const NCPolynomial& poly, double theta);

}  // namespace freeproj
