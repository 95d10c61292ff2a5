#include "duval/expr.hpp"

#include <cctype>

namespace duval::expr {

using poly::Polynomial;

namespace {

// Recursive-descent parser producing an exact Polynomial.
class Parser {
 public:
  Parser(const std::string& text, std::vector<std::string> vars)
      : text_(text), vars_(std::move(vars)) {}

  Polynomial parse() {
    Polynomial p = expression();
    skip_ws();
    if (pos_ != text_.size())
      throw Error(errc::parse, "unexpected trailing input", pos_);
    return p;
  }

 private:
  const std::string& text_;
  std::vector<std::string> vars_;
  size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) pos_++;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      pos_++;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Polynomial expression() {
    bool neg = false;
    skip_ws();
    if (eat('-')) neg = true;
    else eat('+');
    Polynomial acc = term();
    if (neg) acc = -acc;
    for (;;) {
      skip_ws();
      if (eat('+')) acc = acc + term();
      else if (eat('-')) acc = acc - term();
      else return acc;
    }
  }

  Polynomial term() {
    Polynomial acc = factor();
    while (eat('*')) acc = acc * factor();
    return acc;
  }

  Polynomial factor() {
    Polynomial base = atom();
    if (eat('^')) {
      skip_ws();
      size_t at = pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw Error(errc::parse, "expected a nonnegative integer exponent", at);
      long e = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        e = e * 10 + (text_[pos_] - '0');
        if (e > 1'000'000) throw Error(errc::parse, "exponent too large", at);
        pos_++;
      }
      return poly::pow(base, e);
    }
    return base;
  }

  Polynomial atom() {
    skip_ws();
    size_t at = pos_;
    if (pos_ >= text_.size()) throw Error(errc::parse, "unexpected end of input", at);
    char c = text_[pos_];
    if (c == '(') {
      pos_++;
      Polynomial inner = expression();
      skip_ws();
      if (!eat(')')) throw Error(errc::parse, "expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number(at);
    if (c == 'i' && !is_var("i")) {
      pos_++;
      return Polynomial::constant(vars_, scalar_i());
    }
    // variable names are single letters from the grammar alphabet
    std::string name(1, c);
    if (is_var(name)) {
      pos_++;
      return Polynomial::variable(vars_, name);
    }
    throw Error(errc::parse, std::string("unexpected character '") + c + "'", at);
  }

  bool is_var(const std::string& name) const {
    for (const auto& v : vars_)
      if (v == name) return true;
    return false;
  }

  Polynomial number(size_t at) {
    Int num = read_int(at);
    if (eat('/')) {
      skip_ws();
      size_t dat = pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw Error(errc::parse, "expected a denominator", dat);
      Int den = read_int(dat);
      if (den == 0) throw Error(errc::parse, "zero denominator", dat);
      Rat r(num, den);
      r.canonicalize();
      return Polynomial::constant(vars_, Scalar(r));
    }
    return Polynomial::constant(vars_, Scalar(Rat(num)));
  }

  Int read_int(size_t at) {
    std::string digits;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      digits += text_[pos_];
      pos_++;
    }
    if (digits.empty()) throw Error(errc::parse, "expected digits", at);
    return Int(digits);
  }
};

std::string monomial_to_string(const series::Exps& e, const std::vector<std::string>& vars) {
  std::string out;
  for (size_t i = 0; i < vars.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += vars[i];
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
  return out;
}

// Renders terms in canonical (graded-lex) order; parse(to_string(p)) == p.
std::string terms_to_string(const series::TermMap& terms, const std::vector<std::string>& vars) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms) {
    std::string mono = monomial_to_string(e, vars);
    // Decide the printed sign: pull a leading '-' out of purely
    // rational/imaginary coefficients.
    Scalar coef = c;
    bool negative = false;
    if (coef.im == 0 && coef.re < 0) {
      negative = true;
      coef = -coef;
    } else if (coef.re == 0 && coef.im < 0) {
      negative = true;
      coef = -coef;
    }
    std::string cs;
    if (coef.im == 0) {
      cs = rat_to_string(coef.re);
    } else if (coef.re == 0) {
      cs = (coef.im == 1) ? "i" : rat_to_string(coef.im) + "*i";
    } else {
      cs = "(" + scalar_to_string(coef) + ")";
    }
    std::string body;
    if (mono.empty()) body = cs;
    else if (cs == "1") body = mono;
    else body = cs + "*" + mono;

    if (first) {
      out += negative ? "-" : "";
      out += body;
      first = false;
    } else {
      out += negative ? " - " : " + ";
      out += body;
    }
  }
  return out;
}

}  // namespace

Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars) {
  Parser p(text, vars);
  return p.parse();
}

series::TruncSeries parse_series(const std::string& text, const std::vector<std::string>& vars,
                                 int precision) {
  return parse_polynomial(text, vars).to_series(precision);
}

std::string scalar_to_string(const Scalar& c) {
  if (c.im == 0) return rat_to_string(c.re);
  if (c.re == 0) return c.im == 1 ? "i" : rat_to_string(c.im) + "*i";
  std::string out = rat_to_string(c.re);
  if (c.im > 0)
    out += c.im == 1 ? "+i" : "+" + rat_to_string(c.im) + "*i";
  else
    out += c.im == -1 ? "-i" : "-" + rat_to_string(Rat(-c.im)) + "*i";
  return out;
}

std::string to_string(const poly::Polynomial& p) { return terms_to_string(p.terms(), p.vars()); }

std::string to_string(const series::TruncSeries& s) { return terms_to_string(s.terms(), s.vars()); }

}  // namespace duval::expr
