#include "freeproj/ncpoly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "freeproj/csv.hpp"

namespace freeproj {

namespace {

bool is_word(const std::string& w) {
  return std::all_of(w.begin(), w.end(), [](char c) { return c == 'p' || c == 'q'; });
}

bool nonzero(const NCPolynomial::Coeff& c) { return c.real() != 0.0 || c.imag() != 0.0; }

}  // namespace

NCPolynomial NCPolynomial::constant(Coeff c) {
  NCPolynomial out;
  out.add_term("", c);
  return out;
}

NCPolynomial NCPolynomial::letter(char letter) {
  if (letter != 'p' && letter != 'q') {
    throw std::invalid_argument("letters are 'p' and 'q'");
  }
  NCPolynomial out;
  out.add_term(std::string(1, letter), 1.0);
  return out;
}

int NCPolynomial::degree() const {
  std::size_t deg = 0;
  for (const auto& [word, coeff] : terms_) deg = std::max(deg, word.size());
  return static_cast<int>(deg);
}

void NCPolynomial::add_term(const std::string& word, Coeff c) {
  if (!is_word(word)) throw std::invalid_argument("word may only contain 'p' and 'q'");
  if (word.size() > static_cast<std::size_t>(kMaxWordLength)) {
    throw std::invalid_argument("word length exceeds the cap of 64 letters");
  }
  auto it = terms_.find(word);
  if (it == terms_.end()) {
    if (nonzero(c)) terms_.emplace(word, c);
    return;
  }
  it->second += c;
  if (!nonzero(it->second)) terms_.erase(it);
}

NCPolynomial NCPolynomial::operator+(const NCPolynomial& rhs) const {
  NCPolynomial out = *this;
  for (const auto& [word, coeff] : rhs.terms_) out.add_term(word, coeff);
  return out;
}

NCPolynomial NCPolynomial::operator-(const NCPolynomial& rhs) const {
  NCPolynomial out = *this;
  for (const auto& [word, coeff] : rhs.terms_) out.add_term(word, -coeff);
  return out;
}

NCPolynomial NCPolynomial::operator*(const NCPolynomial& rhs) const {
  NCPolynomial out;
  for (const auto& [w1, c1] : terms_) {
    for (const auto& [w2, c2] : rhs.terms_) {
      out.add_term(w1 + w2, c1 * c2);
    }
  }
  return out;
}

NCPolynomial NCPolynomial::operator*(Coeff scalar) const {
  NCPolynomial out;
  if (!nonzero(scalar)) return out;
  for (const auto& [word, coeff] : terms_) out.add_term(word, coeff * scalar);
  return out;
}

NCPolynomial NCPolynomial::operator-() const { return *this * Coeff(-1.0); }

NCPolynomial NCPolynomial::pow(int exponent) const {
  if (exponent < 1) throw std::invalid_argument("exponent must be a positive integer");
  NCPolynomial out = *this;
  for (int i = 1; i < exponent; ++i) out = out * *this;
  return out;
}

NCPolynomial NCPolynomial::adjoint() const {
  NCPolynomial out;
  for (const auto& [word, coeff] : terms_) {
    std::string rev(word.rbegin(), word.rend());
    out.add_term(rev, std::conj(coeff));
  }
  return out;
}

bool NCPolynomial::is_self_adjoint() const {
  const NCPolynomial adj = adjoint();
  return terms_ == adj.terms_;
}

NCPolynomial::Coeff NCPolynomial::evaluate_scalar(Coeff p_value, Coeff q_value) const {
  Coeff sum = 0.0;
  for (const auto& [word, coeff] : terms_) {
    Coeff val = 1.0;
    for (char c : word) val *= (c == 'p' ? p_value : q_value);
    sum += coeff * val;
  }
  return sum;
}

Eigen::MatrixXcd NCPolynomial::evaluate(const Eigen::MatrixXcd& P,
                                        const Eigen::MatrixXcd& Q) const {
  if (P.rows() != P.cols() || Q.rows() != Q.cols() || P.rows() != Q.rows()) {
    throw std::invalid_argument("evaluate needs square matrices of equal size");
  }
  const Eigen::Index n = P.rows();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [word, coeff] : terms_) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n);
    for (char c : word) m = m * (c == 'p' ? P : Q);
    sum += coeff * m;
  }
  return sum;
}

std::string NCPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [word, coeff] : terms_) {
    // Pull a real sign out of the coefficient so terms join with " + " and
    // " - "; complex coefficients with nonzero real and imaginary part stay
    // parenthesized.
    const double re = coeff.real();
    const double im = coeff.imag();
    bool negative = false;
    std::string cs;
    if (im == 0.0) {
      negative = std::signbit(re) && re != 0.0;
      const double a = negative ? -re : re;
      if (a != 1.0 || word.empty()) cs = format_double(a);
    } else if (re == 0.0) {
      negative = std::signbit(im);
      const double b = negative ? -im : im;
      cs = (b == 1.0) ? "i" : format_double(b) + "*i";
    } else {
      std::string ims = (std::abs(im) == 1.0) ? "i" : format_double(std::abs(im)) + "*i";
      cs = "(" + format_double(re) + (im < 0.0 ? " - " : " + ") + ims + ")";
    }
    if (first) {
      if (negative) out += "-";
      first = false;
    } else {
      out += negative ? " - " : " + ";
    }
    if (!cs.empty()) {
      out += cs;
      if (!word.empty()) out += "*";
    }
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (i > 0) out += "*";
      out += word[i];
    }
  }
  return out;
}

namespace {

// Recursive-descent parser for the grammar in the header.
class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NCPolynomial run() {
    NCPolynomial value = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return value;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ == text_.size();
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NCPolynomial expr() {
    NCPolynomial value = term();
    while (true) {
      const char c = peek();
      if (c == '+' || c == '-') {
        ++pos_;
        const NCPolynomial rhs = term();
        value = (c == '+') ? value + rhs : value - rhs;
      } else {
        return value;
      }
    }
  }

  NCPolynomial term() {
    NCPolynomial value = factor();
    while (peek() == '*') {
      ++pos_;
      value = value * factor();
    }
    return value;
  }

  NCPolynomial factor() {
    NCPolynomial value = atom();
    if (peek() == '^') {
      ++pos_;
      value = value.pow(positive_integer());
    }
    return value;
  }

  NCPolynomial atom() {
    const char c = peek();
    if (c == '\0') fail("unexpected end of input");
    if (c == '-') {
      ++pos_;
      return -atom();
    }
    if (c == '(') {
      ++pos_;
      NCPolynomial value = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return value;
    }
    if (c == 'i') {
      ++pos_;
      return NCPolynomial::constant({0.0, 1.0});
    }
    if (c == 'p' || c == 'q') {
      ++pos_;
      return NCPolynomial::letter(c);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) fail("unknown letter (expected p, q or i)");
    fail("expected a number, letter or '('");
  }

  NCPolynomial number() {
    double value = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return NCPolynomial::constant(value);
  }

  int positive_integer() {
    skip_space();
    int value = 0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin || value < 1) fail("expected a positive integer");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

NCPolynomial parse_ncpoly(const std::string& text) {
  Parser parser(text);
  try {
    return parser.run();
  } catch (const std::invalid_argument& e) {
    // Word-cap and letter violations surface as parse errors with position 0
    // context lost; rethrow with the message intact.
    throw ParseError(e.what(), 0);
  }
}

Eigen::Matrix2cd angle_block_p() {
  Eigen::Matrix2cd p;
  p << 1.0, 0.0, 0.0, 0.0;
  return p;
}

Eigen::Matrix2cd angle_block_q(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2cd q;
  q << c * c, c * s, c * s, s * s;
  return q;
}

Eigen::Matrix2cd evaluate_on_angle_block(const NCPolynomial& poly, double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0)) {
    throw std::domain_error("angle must lie in [0, pi/2]");
  }
  return poly.evaluate(angle_block_p(), angle_block_q(theta));
}

}  // namespace freeproj
