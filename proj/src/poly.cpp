#include "duval/poly.hpp"

#include <algorithm>

namespace duval::poly {

Polynomial::Polynomial(std::vector<std::string> vars) : vars_(std::move(vars)) {}

Polynomial Polynomial::constant(const std::vector<std::string>& vars, Scalar c) {
  Polynomial p(vars);
  if (!c.is_zero()) p.terms_[Exps(vars.size(), 0)] = std::move(c);
  return p;
}

Polynomial Polynomial::variable(const std::vector<std::string>& vars, const std::string& name) {
  Polynomial p(vars);
  Exps e(vars.size(), 0);
  e[p.var_index(name)] = 1;
  p.terms_[e] = Scalar(1);
  return p;
}

Polynomial Polynomial::monomial(const std::vector<std::string>& vars, Exps e, Scalar c) {
  Polynomial p(vars);
  if (e.size() != vars.size()) fail(errc::domain, "exponent arity mismatch");
  for (int x : e)
    if (x < 0) fail(errc::domain, "negative exponent");
  if (!c.is_zero()) p.terms_[std::move(e)] = std::move(c);
  return p;
}

int Polynomial::var_index(const std::string& name) const {
  for (size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) return static_cast<int>(i);
  fail(errc::domain, "unknown variable '" + name + "'");
}

Scalar Polynomial::coeff(const Exps& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Scalar(0) : it->second;
}

std::optional<int> Polynomial::order() const {
  if (terms_.empty()) return std::nullopt;
  return total_degree(terms_.begin()->first);
}

int Polynomial::degree() const {
  if (terms_.empty()) return -1;
  return total_degree(terms_.rbegin()->first);
}

int Polynomial::degree_in(int var_index) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var_index]);
  return d;
}

void Polynomial::add_term(const Exps& e, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial Polynomial::derivative(int var_index) const {
  Polynomial out(vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var_index] == 0) continue;
    Exps d = e;
    d[var_index] -= 1;
    out.terms_[d] = c * Scalar(e[var_index]);
  }
  return out;
}

Polynomial Polynomial::homogeneous_part(int degree) const {
  Polynomial out(vars_);
  for (const auto& [e, c] : terms_)
    if (total_degree(e) == degree) out.terms_[e] = c;
  return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  if (a.vars_ != b.vars_) fail(errc::domain, "variable mismatch");
  Polynomial out = a;
  for (const auto& [e, c] : b.terms_) out.add_term(e, c);
  return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  if (a.vars_ != b.vars_) fail(errc::domain, "variable mismatch");
  Polynomial out = a;
  for (const auto& [e, c] : b.terms_) out.add_term(e, -c);
  return out;
}

Polynomial operator-(const Polynomial& a) {
  Polynomial out(a.vars_);
  for (const auto& [e, c] : a.terms_) out.terms_[e] = -c;
  return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.vars_ != b.vars_) fail(errc::domain, "variable mismatch");
  Polynomial out(a.vars_);
  int n = a.nvars();
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Exps e(n);
      for (int i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

Polynomial operator*(const Scalar& c, const Polynomial& a) {
  Polynomial out(a.vars_);
  if (c.is_zero()) return out;
  for (const auto& [e, t] : a.terms_) out.terms_[e] = c * t;
  return out;
}

Polynomial pow(const Polynomial& f, long e) {
  if (e < 0) fail(errc::domain, "negative power");
  Polynomial acc = Polynomial::constant(f.vars(), Scalar(1));
  Polynomial base = f;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

Polynomial Polynomial::substitute(int vi, const Polynomial& value) const {
  if (value.vars_ != vars_) fail(errc::domain, "variable mismatch in substitution");
  // Horner grouping on the powers of x_vi.
  std::map<int, Polynomial> by_power;
  for (const auto& [e, c] : terms_) {
    Exps rest = e;
    int k = rest[vi];
    rest[vi] = 0;
    auto [it, fresh] = by_power.try_emplace(k, Polynomial(vars_));
    it->second.add_term(rest, c);
  }
  Polynomial out(vars_);
  Polynomial vp = Polynomial::constant(vars_, Scalar(1));
  int prev = 0;
  for (const auto& [k, part] : by_power) {
    for (; prev < k; ++prev) vp = vp * value;
    out = out + part * vp;
  }
  return out;
}

Polynomial Polynomial::translate(const std::vector<Scalar>& point) const {
  if (static_cast<int>(point.size()) != nvars()) fail(errc::domain, "point arity mismatch");
  Polynomial out = *this;
  for (int i = 0; i < nvars(); ++i) {
    if (point[i].is_zero()) continue;
    Polynomial repl = Polynomial::variable(vars_, vars_[i]) + Polynomial::constant(vars_, point[i]);
    out = out.substitute(i, repl);
  }
  return out;
}

Polynomial Polynomial::linear_change(const std::vector<std::vector<Scalar>>& m) const {
  int n = nvars();
  if (static_cast<int>(m.size()) != n) fail(errc::domain, "matrix arity mismatch");
  std::vector<Polynomial> images;
  for (int i = 0; i < n; ++i) {
    Polynomial img(vars_);
    for (int j = 0; j < n; ++j) {
      Exps e(n, 0);
      e[j] = 1;
      img.add_term(e, m[i][j]);
    }
    images.push_back(img);
  }
  // substitute simultaneously: route through fresh placeholder slots by
  // evaluating term-by-term (power caching).
  Polynomial out(vars_);
  std::vector<std::vector<Polynomial>> pw(n);
  for (int i = 0; i < n; ++i) pw[i].push_back(Polynomial::constant(vars_, Scalar(1)));
  auto power = [&](int i, int e) -> const Polynomial& {
    while (static_cast<int>(pw[i].size()) <= e) pw[i].push_back(pw[i].back() * images[i]);
    return pw[i][e];
  };
  for (const auto& [e, c] : terms_) {
    Polynomial t = Polynomial::constant(vars_, c);
    for (int i = 0; i < n; ++i)
      if (e[i] > 0) t = t * power(i, e[i]);
    out = out + t;
  }
  return out;
}

Scalar Polynomial::eval(const std::vector<Scalar>& point) const {
  if (static_cast<int>(point.size()) != nvars()) fail(errc::domain, "point arity mismatch");
  Scalar acc(0);
  for (const auto& [e, c] : terms_) {
    Scalar t = c;
    for (int i = 0; i < nvars(); ++i)
      if (e[i] > 0) t *= point[i].pow(e[i]);
    acc += t;
  }
  return acc;
}

std::optional<Polynomial> Polynomial::divide_by_var_power(int vi, int m) const {
  Polynomial out(vars_);
  for (const auto& [e, c] : terms_) {
    if (e[vi] < m) return std::nullopt;
    Exps d = e;
    d[vi] -= m;
    out.terms_[d] = c;
  }
  return out;
}

series::TruncSeries Polynomial::to_series(int precision) const {
  series::TruncSeries s(vars_, precision);
  for (const auto& [e, c] : terms_) {
    if (total_degree(e) > precision) break;
    s.set_coeff(e, c);
  }
  return s;
}

Polynomial Polynomial::from_series(const series::TruncSeries& s) {
  Polynomial p(s.vars());
  for (const auto& [e, c] : s.terms()) p.terms_[e] = c;
  return p;
}

Polynomial compose_curve(const Polynomial& f, const std::vector<Polynomial>& components) {
  if (static_cast<int>(components.size()) != f.nvars())
    fail(errc::domain, "curve component arity mismatch");
  const auto& tvars = components[0].vars();
  std::vector<std::vector<Polynomial>> pw(components.size());
  for (size_t i = 0; i < components.size(); ++i)
    pw[i].push_back(Polynomial::constant(tvars, Scalar(1)));
  auto power = [&](int i, int e) -> const Polynomial& {
    while (static_cast<int>(pw[i].size()) <= e) pw[i].push_back(pw[i].back() * components[i]);
    return pw[i][e];
  };
  Polynomial out(tvars);
  for (const auto& [e, c] : f.terms()) {
    Polynomial t = Polynomial::constant(tvars, c);
    for (int i = 0; i < f.nvars(); ++i)
      if (e[i] > 0) t = t * power(i, e[i]);
    out = out + t;
  }
  return out;
}

}  // namespace duval::poly
