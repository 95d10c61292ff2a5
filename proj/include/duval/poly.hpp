#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "duval/series.hpp"

namespace duval::poly {

using series::Exps;
using series::GrlexLess;
using series::TermMap;
using series::total_degree;

// Sparse exact multivariate polynomial over the Gaussian rationals. Unlike
// TruncSeries there is no precision: arithmetic is exact.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<std::string> vars);

  static Polynomial constant(const std::vector<std::string>& vars, Scalar c);
  static Polynomial variable(const std::vector<std::string>& vars, const std::string& name);
  static Polynomial monomial(const std::vector<std::string>& vars, Exps e, Scalar c);

  const std::vector<std::string>& vars() const { return vars_; }
  const TermMap& terms() const { return terms_; }
  int nvars() const { return static_cast<int>(vars_.size()); }
  int var_index(const std::string& name) const;

  bool is_zero() const { return terms_.empty(); }
  Scalar coeff(const Exps& e) const;
  Scalar constant_term() const { return coeff(Exps(vars_.size(), 0)); }
  std::optional<int> order() const;  // min total degree; nullopt for 0
  int degree() const;                // max total degree; -1 for 0
  int degree_in(int var_index) const;

  void add_term(const Exps& e, const Scalar& c);

  Polynomial derivative(int var_index) const;
  Polynomial homogeneous_part(int degree) const;

  // Substitute a polynomial for one variable (over the same variable list).
  Polynomial substitute(int var_index, const Polynomial& value) const;
  // x_i -> x_i + p_i for all variables simultaneously.
  Polynomial translate(const std::vector<Scalar>& point) const;
  // x_i -> sum_j m[i][j] x_j.
  Polynomial linear_change(const std::vector<std::vector<Scalar>>& m) const;
  Scalar eval(const std::vector<Scalar>& point) const;

  // Exact division by (var)^m; nullopt if any term has a smaller exponent.
  std::optional<Polynomial> divide_by_var_power(int var_index, int m) const;

  series::TruncSeries to_series(int precision) const;
  static Polynomial from_series(const series::TruncSeries& s);

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Scalar& c, const Polynomial& a);
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

 private:
  std::vector<std::string> vars_;
  TermMap terms_;
};

Polynomial pow(const Polynomial& f, long e);

// f(p_1(t), ..., p_n(t)) as a polynomial in the p_i's variable.
Polynomial compose_curve(const Polynomial& f, const std::vector<Polynomial>& components);

}  // namespace duval::poly
