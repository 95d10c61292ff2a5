#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "duval/error.hpp"
#include "duval/scalar.hpp"

namespace duval::series {

using Exps = std::vector<int>;

inline int total_degree(const Exps& e) {
  int d = 0;
  for (int x : e) d += x;
  return d;
}

// Graded lexicographic order: by total degree, then by exponent tuple with
// earlier variables weighted first (x^2 < x*y < y^2).
struct GrlexLess {
  bool operator()(const Exps& a, const Exps& b) const {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  }
};

using TermMap = std::map<Exps, Scalar, GrlexLess>;

// Multivariate formal power series truncated at a total degree. Exact
// Gaussian-rational coefficients; no zero terms stored; term order canonical.
class TruncSeries {
 public:
  TruncSeries(std::vector<std::string> vars, int precision);

  static TruncSeries constant(const std::vector<std::string>& vars, int precision, Scalar c);
  static TruncSeries variable(const std::vector<std::string>& vars, int precision,
                              const std::string& name);
  static TruncSeries monomial(const std::vector<std::string>& vars, int precision, Exps e,
                              Scalar c);

  const std::vector<std::string>& vars() const { return vars_; }
  int precision() const { return precision_; }
  const TermMap& terms() const { return terms_; }
  int nvars() const { return static_cast<int>(vars_.size()); }

  bool is_zero() const { return terms_.empty(); }
  Scalar coeff(const Exps& e) const;
  Scalar constant_term() const { return coeff(Exps(vars_.size(), 0)); }
  bool is_unit() const { return !constant_term().is_zero(); }

  // Minimal total degree of a nonzero term; nullopt encodes +infinity.
  std::optional<int> order() const;

  void set_coeff(const Exps& e, const Scalar& c);
  void add_term(const Exps& e, const Scalar& c);

  TruncSeries truncated(int new_precision) const;
  TruncSeries homogeneous_part(int degree) const;
  TruncSeries derivative(int var_index) const;
  TruncSeries derivative(const std::string& var) const;

  int var_index(const std::string& name) const;

  friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b);
  friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b);
  friend TruncSeries operator-(const TruncSeries& a);
  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b);
  friend TruncSeries operator*(const Scalar& c, const TruncSeries& a);
  friend bool operator==(const TruncSeries& a, const TruncSeries& b);
  friend bool operator!=(const TruncSeries& a, const TruncSeries& b) { return !(a == b); }

 private:
  std::vector<std::string> vars_;
  int precision_;
  TermMap terms_;
};

TruncSeries pow(const TruncSeries& f, long e);

// Multiplicative inverse of a unit.
TruncSeries inverse_unit(const TruncSeries& u);

// A change of coordinates: one series per source variable, zero constant
// terms, invertible linear part.
struct CoordChange {
  std::vector<TruncSeries> components;

  const std::vector<std::string>& target_vars() const { return components.at(0).vars(); }
  int precision() const { return components.at(0).precision(); }
};

CoordChange identity_change(const std::vector<std::string>& vars, int precision);
void validate_change(const CoordChange& c);

// Substitute c's components for f's variables; exact modulo degree > N.
TruncSeries compose(const TruncSeries& f, const CoordChange& c);

// (outer ∘ inner): first apply inner, then outer; i.e. components of outer
// with inner substituted in.
CoordChange compose_changes(const CoordChange& outer, const CoordChange& inner);

// Truncated inverse: change d with compose_changes(c, d) = identity mod
// degree > N (and the other way around).
CoordChange inverse_change(const CoordChange& c);

// Hensel/Newton n-th root: a with a^n = u mod degree > N and a = a0 mod m^k.
// Requires a0^n equal to u's constant term exactly and u = a0^n mod m^k.
TruncSeries nth_root_of_unit(const TruncSeries& u, long n, const Scalar& a0, int k);

struct MembershipWitness {
  std::vector<TruncSeries> q;  // h = sum q_j * gens_j  (mod degree > N)
};

// Does h agree, modulo degree > N, with an element of the ideal generated by
// gens? Dense linear algebra over the scalar field on the graded pieces up to
// degree N; returns the multipliers on success.
std::optional<MembershipWitness> graded_ideal_membership(const TruncSeries& h,
                                                         const std::vector<TruncSeries>& gens,
                                                         int degree);

// Generators x_k * f_i * f_j of m * J_f^2 (J_f the Jacobian ideal).
std::vector<TruncSeries> m_jf2_generators(const TruncSeries& f);

// Ruiz's sufficient criterion: f - g in m * J_f^2 up to the carried
// precision. True implies formal equivalence; false decides nothing.
bool ruiz_equivalent(const TruncSeries& f, const TruncSeries& g);

}  // namespace duval::series
