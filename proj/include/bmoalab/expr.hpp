#pragma once

// A small recursive-descent parser turning expression strings into
// AnalyticFn trees: catalog calls like mobius(0.5), complex literals
// ("0.5+0.5i", "2i", "i"), parentheses, and the operators + - * with
// composition written either as the infix ring operator or comp(f, g).
//
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|compose) factor)*
//   factor  := '-' factor | primary
//   primary := number['i'] | 'i' | ident | ident '(' args ')' | '(' expr ')'
//
// Catalog parameters are complex scalars (signed sums of real/imaginary
// atoms), not function expressions; comp() takes function expressions.

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "bmoalab/analytic.hpp"
#include "bmoalab/core.hpp"

namespace bmoalab {

namespace exprdetail {

inline constexpr const char* kComposeUtf8 = "\xe2\x88\x98";

class Parser {
 public:
  explicit Parser(const std::string& src) : src_(src) {}

  AnalyticFn parse() {
    skip_space();
    if (at_end()) fail("empty expression");
    AnalyticFn f = parse_expr();
    skip_space();
    if (!at_end()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParameterError("expression error at position " +
                         std::to_string(pos_) + ": " + what);
  }

  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return at_end() ? '\0' : src_[pos_]; }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
  }

  bool consume(char c) {
    skip_space();
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  bool consume_compose() {
    skip_space();
    if (src_.compare(pos_, 3, kComposeUtf8) == 0) {
      pos_ += 3;
      return true;
    }
    return false;
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  AnalyticFn parse_expr() {
    AnalyticFn f = parse_term();
    for (;;) {
      if (consume('+')) {
        f = add(f, parse_term());
      } else if (consume('-')) {
        f = subtract(f, parse_term());
      } else {
        return f;
      }
    }
  }

  AnalyticFn parse_term() {
    AnalyticFn f = parse_factor();
    for (;;) {
      if (consume('*')) {
        f = multiply(f, parse_factor());
      } else if (consume_compose()) {
        f = compose(f, parse_factor());
      } else {
        return f;
      }
    }
  }

  AnalyticFn parse_factor() {
    if (consume('-')) {
      return scale(Complex(-1.0, 0.0), parse_factor());
    }
    return parse_primary();
  }

  AnalyticFn parse_primary() {
    skip_space();
    if (at_end()) fail("unexpected end of input");
    const char c = peek();
    if (consume('(')) {
      AnalyticFn f = parse_expr();
      expect(')');
      return f;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return make_const(parse_number_atom());
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return parse_call_or_ident();
    }
    fail("unexpected character");
  }

  /// Unsigned numeric literal, optionally suffixed by 'i'.
  Complex parse_number_atom() {
    skip_space();
    const char* begin = src_.data() + pos_;
    const char* end = src_.data() + src_.size();
    double v = 0.0;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{}) fail("malformed number");
    pos_ = static_cast<std::size_t>(res.ptr - src_.data());
    if (peek() == 'i' &&
        (pos_ + 1 >= src_.size() || !ident_char(src_[pos_ + 1]))) {
      ++pos_;
      return Complex(0.0, v);
    }
    return Complex(v, 0.0);
  }

  /// Signed sum of numeric atoms: "-0.5", "0.5+0.5i", "2i".
  Complex parse_scalar() {
    skip_space();
    Complex v(0.0, 0.0);
    double sign = consume('-') ? -1.0 : 1.0;
    for (;;) {
      skip_space();
      Complex atom;
      if (peek() == 'i' &&
          (pos_ + 1 >= src_.size() || !ident_char(src_[pos_ + 1]))) {
        ++pos_;
        atom = Complex(0.0, 1.0);
      } else if (std::isdigit(static_cast<unsigned char>(peek())) ||
                 peek() == '.') {
        atom = parse_number_atom();
      } else {
        fail("expected a numeric parameter");
      }
      v += sign * atom;
      if (consume('+')) {
        sign = 1.0;
      } else if (consume('-')) {
        sign = -1.0;
      } else {
        return v;
      }
    }
  }

  double parse_real_scalar() {
    const Complex v = parse_scalar();
    if (v.imag() != 0.0) fail("parameter must be real");
    return v.real();
  }

  int parse_int_scalar() {
    const double v = parse_real_scalar();
    if (v != std::floor(v) || std::abs(v) > 1e9) {
      fail("parameter must be an integer");
    }
    return static_cast<int>(v);
  }

  AnalyticFn parse_call_or_ident() {
    const std::size_t start = pos_;
    while (!at_end() && ident_char(src_[pos_])) ++pos_;
    const std::string id = src_.substr(start, pos_ - start);

    if (!consume('(')) {
      if (id == "z" || id == "identity") return make_identity();
      if (id == "i") return make_const(Complex(0.0, 1.0));
      fail("unknown identifier '" + id + "'");
    }

    AnalyticFn f = build_call(id);
    expect(')');
    return f;
  }

  AnalyticFn build_call(const std::string& id) {
    if (id == "comp") {
      AnalyticFn outer = parse_expr();
      expect(',');
      AnalyticFn inner = parse_expr();
      return compose(outer, inner);
    }
    if (id == "const") return make_const(parse_scalar());
    if (id == "monomial") return make_monomial(parse_int_scalar());
    if (id == "mobius") return make_mobius(parse_scalar());
    if (id == "logrecip") return make_log_recip_one_minus(parse_scalar());
    if (id == "inner") {
      const double gamma = parse_real_scalar();
      expect(',');
      const Complex w = parse_scalar();
      return make_inner_singular(gamma, w);
    }
    if (id == "pow1m") return make_power_one_minus(parse_real_scalar());
    if (id == "poly") {
      std::vector<Complex> coeffs;
      coeffs.push_back(parse_scalar());
      while (consume(',')) coeffs.push_back(parse_scalar());
      return make_polynomial(std::move(coeffs));
    }
    fail("unknown function '" + id + "'");
  }

  const std::string& src_;
  std::size_t pos_ = 0;
};

}  // namespace exprdetail

/// Parse an expression string over the function catalog into an AnalyticFn.
/// Malformed input and out-of-range catalog parameters raise ParameterError;
/// a composition whose inner part is not a disc self-map raises SelfMapError.
[[nodiscard]] inline AnalyticFn parse_expression(const std::string& src) {
  return exprdetail::Parser(src).parse();
}

}  // namespace bmoalab
