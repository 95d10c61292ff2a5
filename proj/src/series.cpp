#include "duval/series.hpp"

#include <algorithm>

namespace duval::series {

TruncSeries::TruncSeries(std::vector<std::string> vars, int precision)
    : vars_(std::move(vars)), precision_(precision) {
  if (precision_ < 0) fail(errc::domain, "negative precision");
}

TruncSeries TruncSeries::constant(const std::vector<std::string>& vars, int precision, Scalar c) {
  TruncSeries s(vars, precision);
  if (!c.is_zero()) s.terms_[Exps(vars.size(), 0)] = std::move(c);
  return s;
}

TruncSeries TruncSeries::variable(const std::vector<std::string>& vars, int precision,
                                  const std::string& name) {
  TruncSeries s(vars, precision);
  Exps e(vars.size(), 0);
  e[s.var_index(name)] = 1;
  if (precision >= 1) s.terms_[e] = Scalar(1);
  return s;
}

TruncSeries TruncSeries::monomial(const std::vector<std::string>& vars, int precision, Exps e,
                                  Scalar c) {
  TruncSeries s(vars, precision);
  if (e.size() != vars.size()) fail(errc::domain, "exponent arity mismatch");
  for (int x : e)
    if (x < 0) fail(errc::domain, "negative exponent");
  if (!c.is_zero() && total_degree(e) <= precision) s.terms_[std::move(e)] = std::move(c);
  return s;
}

int TruncSeries::var_index(const std::string& name) const {
  for (size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) return static_cast<int>(i);
  fail(errc::domain, "unknown variable '" + name + "'");
}

Scalar TruncSeries::coeff(const Exps& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Scalar(0) : it->second;
}

std::optional<int> TruncSeries::order() const {
  if (terms_.empty()) return std::nullopt;
  return total_degree(terms_.begin()->first);
}

void TruncSeries::set_coeff(const Exps& e, const Scalar& c) {
  if (total_degree(e) > precision_) return;
  if (c.is_zero())
    terms_.erase(e);
  else
    terms_[e] = c;
}

void TruncSeries::add_term(const Exps& e, const Scalar& c) {
  if (total_degree(e) > precision_ || c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

TruncSeries TruncSeries::truncated(int new_precision) const {
  TruncSeries out(vars_, new_precision);
  for (const auto& [e, c] : terms_) {
    if (total_degree(e) > new_precision) break;  // grlex order: degrees ascend
    out.terms_[e] = c;
  }
  return out;
}

TruncSeries TruncSeries::homogeneous_part(int degree) const {
  TruncSeries out(vars_, precision_);
  for (const auto& [e, c] : terms_) {
    int d = total_degree(e);
    if (d > degree) break;
    if (d == degree) out.terms_[e] = c;
  }
  return out;
}

TruncSeries TruncSeries::derivative(int var_index) const {
  TruncSeries out(vars_, precision_);
  for (const auto& [e, c] : terms_) {
    if (e[var_index] == 0) continue;
    Exps d = e;
    d[var_index] -= 1;
    out.terms_[d] = c * Scalar(e[var_index]);
  }
  return out;
}

TruncSeries TruncSeries::derivative(const std::string& var) const {
  return derivative(var_index(var));
}

static void require_same_vars(const TruncSeries& a, const TruncSeries& b) {
  if (a.vars() != b.vars()) fail(errc::domain, "variable mismatch between operands");
}

TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
  require_same_vars(a, b);
  TruncSeries out(a.vars(), std::min(a.precision(), b.precision()));
  for (const auto& [e, c] : a.terms()) out.add_term(e, c);
  for (const auto& [e, c] : b.terms()) out.add_term(e, c);
  return out;
}

TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
  require_same_vars(a, b);
  TruncSeries out(a.vars(), std::min(a.precision(), b.precision()));
  for (const auto& [e, c] : a.terms()) out.add_term(e, c);
  for (const auto& [e, c] : b.terms()) out.add_term(e, -c);
  return out;
}

TruncSeries operator-(const TruncSeries& a) {
  TruncSeries out(a.vars(), a.precision());
  for (const auto& [e, c] : a.terms()) out.set_coeff(e, -c);
  return out;
}

TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
  require_same_vars(a, b);
  int prec = std::min(a.precision(), b.precision());
  TruncSeries out(a.vars(), prec);
  int n = a.nvars();
  for (const auto& [ea, ca] : a.terms()) {
    int da = total_degree(ea);
    if (da > prec) break;
    for (const auto& [eb, cb] : b.terms()) {
      if (da + total_degree(eb) > prec) break;
      Exps e(n);
      for (int i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

TruncSeries operator*(const Scalar& c, const TruncSeries& a) {
  TruncSeries out(a.vars(), a.precision());
  if (c.is_zero()) return out;
  for (const auto& [e, t] : a.terms()) out.set_coeff(e, c * t);
  return out;
}

bool operator==(const TruncSeries& a, const TruncSeries& b) {
  return a.vars_ == b.vars_ && a.precision_ == b.precision_ && a.terms_ == b.terms_;
}

TruncSeries pow(const TruncSeries& f, long e) {
  if (e < 0) fail(errc::domain, "negative series power");
  TruncSeries acc = TruncSeries::constant(f.vars(), f.precision(), Scalar(1));
  TruncSeries base = f;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

TruncSeries inverse_unit(const TruncSeries& u) {
  Scalar c0 = u.constant_term();
  if (c0.is_zero()) fail(errc::domain, "series is not a unit");
  int prec = u.precision();
  TruncSeries v = TruncSeries::constant(u.vars(), prec, c0.inverse());
  TruncSeries two = TruncSeries::constant(u.vars(), prec, Scalar(2));
  // Newton: v <- v(2 - u v); precision doubles each round.
  for (int reached = 0; reached < prec; reached = std::max(1, reached) * 2)
    v = v * (two - u * v);
  return v;
}

CoordChange identity_change(const std::vector<std::string>& vars, int precision) {
  CoordChange c;
  for (const auto& v : vars) c.components.push_back(TruncSeries::variable(vars, precision, v));
  return c;
}

void validate_change(const CoordChange& c) {
  if (c.components.empty()) fail(errc::domain, "empty coordinate change");
  int n = static_cast<int>(c.components.size());
  const auto& tvars = c.components[0].vars();
  if (static_cast<int>(tvars.size()) != n)
    fail(errc::domain, "coordinate change must be square");
  for (const auto& comp : c.components) {
    if (comp.vars() != tvars) fail(errc::domain, "variable mismatch in coordinate change");
    if (!comp.constant_term().is_zero())
      fail(errc::domain, "coordinate change component has nonzero constant term");
  }
  // Invertible linear part.
  std::vector<std::vector<Scalar>> lin(n, std::vector<Scalar>(n, Scalar(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Exps e(n, 0);
      e[j] = 1;
      lin[i][j] = c.components[i].coeff(e);
    }
  // Determinant by fraction-free-ish elimination over Q(i).
  Scalar det(1);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (!lin[r][col].is_zero()) { piv = r; break; }
    if (piv < 0) fail(errc::domain, "coordinate change has singular linear part");
    if (piv != col) {
      std::swap(lin[piv], lin[col]);
      det = -det;
    }
    det *= lin[col][col];
    Scalar inv = lin[col][col].inverse();
    for (int r = col + 1; r < n; ++r) {
      if (lin[r][col].is_zero()) continue;
      Scalar f = lin[r][col] * inv;
      for (int cc = col; cc < n; ++cc) lin[r][cc] -= f * lin[col][cc];
    }
  }
  if (det.is_zero()) fail(errc::domain, "coordinate change has singular linear part");
}

TruncSeries compose(const TruncSeries& f, const CoordChange& c) {
  validate_change(c);
  if (f.nvars() != static_cast<int>(c.components.size()))
    fail(errc::domain, "coordinate change arity mismatch");
  int prec = std::min(f.precision(), c.precision());
  const auto& tvars = c.target_vars();
  int n = f.nvars();

  // Power tables, grown lazily per variable.
  std::vector<std::vector<TruncSeries>> pw(n);
  for (int i = 0; i < n; ++i)
    pw[i].push_back(TruncSeries::constant(tvars, prec, Scalar(1)));
  auto power = [&](int i, int e) -> const TruncSeries& {
    while (static_cast<int>(pw[i].size()) <= e)
      pw[i].push_back(pw[i].back() * c.components[i].truncated(prec));
    return pw[i][e];
  };

  // Group by the exponent of the first variable to share multiplications:
  // f o c = sum_a pow0^a * (sum over tails).
  TruncSeries out(tvars, prec);
  std::map<int, TruncSeries> by_first;
  for (const auto& [e, coef] : f.terms()) {
    if (total_degree(e) > prec) break;
    TruncSeries tail = TruncSeries::constant(tvars, prec, coef);
    for (int i = 1; i < n; ++i)
      if (e[i] > 0) tail = tail * power(i, e[i]);
    auto [it, fresh] = by_first.try_emplace(e[0], tail);
    if (!fresh) it->second = it->second + tail;
  }
  for (const auto& [a, sum] : by_first) out = out + power(0, a) * sum;
  return out;
}

CoordChange compose_changes(const CoordChange& outer, const CoordChange& inner) {
  CoordChange out;
  for (const auto& comp : outer.components) out.components.push_back(compose(comp, inner));
  return out;
}

CoordChange inverse_change(const CoordChange& c) {
  validate_change(c);
  int n = static_cast<int>(c.components.size());
  const auto& tvars = c.target_vars();
  int prec = c.precision();

  // Split c = L + H with L linear; invert L exactly, then iterate
  // psi <- L^{-1}(x - H(psi)), an m-adic contraction.
  std::vector<std::vector<Scalar>> lin(n, std::vector<Scalar>(n, Scalar(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Exps e(n, 0);
      e[j] = 1;
      lin[i][j] = c.components[i].coeff(e);
    }
  // Invert the linear matrix over Q(i).
  std::vector<std::vector<Scalar>> a(n, std::vector<Scalar>(2 * n, Scalar(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = lin[i][j];
    a[i][n + i] = Scalar(1);
  }
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (!a[r][col].is_zero()) { piv = r; break; }
    if (piv < 0) fail(errc::domain, "singular linear part");
    std::swap(a[piv], a[col]);
    Scalar inv = a[col][col].inverse();
    for (int j = 0; j < 2 * n; ++j) a[col][j] *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      Scalar f = a[r][col];
      for (int j = 0; j < 2 * n; ++j) a[r][j] -= f * a[col][j];
    }
  }

  auto linear_apply = [&](const std::vector<TruncSeries>& comps) {
    std::vector<TruncSeries> out;
    for (int i = 0; i < n; ++i) {
      TruncSeries acc(tvars, prec);
      for (int j = 0; j < n; ++j) acc = acc + a[i][n + j] * comps[j];
      out.push_back(acc);
    }
    return out;
  };

  std::vector<TruncSeries> high;  // H components
  for (int i = 0; i < n; ++i) {
    TruncSeries h = c.components[i];
    for (int j = 0; j < n; ++j) {
      Exps e(n, 0);
      e[j] = 1;
      h.set_coeff(e, Scalar(0));
    }
    high.push_back(h);
  }

  std::vector<TruncSeries> xs;
  for (const auto& v : tvars) xs.push_back(TruncSeries::variable(tvars, prec, v));
  std::vector<TruncSeries> psi = linear_apply(xs);
  for (int round = 0; round < prec; ++round) {
    CoordChange cur{psi};
    std::vector<TruncSeries> rhs;
    for (int i = 0; i < n; ++i) rhs.push_back(xs[i] - compose(high[i], cur));
    std::vector<TruncSeries> next = linear_apply(rhs);
    if (next == psi) break;
    psi = next;
  }
  CoordChange out{psi};
  return out;
}

TruncSeries nth_root_of_unit(const TruncSeries& u, long n, const Scalar& a0, int k) {
  if (n < 1) fail(errc::domain, "root exponent must be >= 1");
  if (k < 1) fail(errc::domain, "congruence level must be >= 1");
  Scalar u0 = u.constant_term();
  if (u0.is_zero()) fail(errc::domain, "series is not a unit");
  if (a0.pow(n) != u0)
    fail(errc::domain, "a0^n does not equal the constant term of u");
  // u = a0^n mod m^k
  TruncSeries diff = u - TruncSeries::constant(u.vars(), u.precision(), u0);
  auto ord = diff.order();
  if (ord && *ord < k) fail(errc::domain, "u is not congruent to a0^n at the requested level");

  int prec = u.precision();
  TruncSeries a = TruncSeries::constant(u.vars(), prec, a0);
  Scalar ninv = Scalar(n).inverse();
  // Newton on a^n - u; each round at least doubles the contact order.
  for (int reached = k; reached <= prec; reached *= 2) {
    TruncSeries an1 = pow(a, n - 1);
    TruncSeries err = an1 * a - u;
    if (err.is_zero()) break;
    a = a - ninv * (err * inverse_unit(an1));
  }
  return a;
}

// ---------------------------------------------------------------------------
// Graded ideal membership by sparse elimination on the monomial basis.

namespace {

struct SparseCol {
  // monomial -> coefficient, in grlex order
  std::map<Exps, Scalar, GrlexLess> entries;
  // column combination in terms of (generator index, multiplier monomial)
  std::map<std::pair<int, Exps>, Scalar> comb;
};

void col_axpy(SparseCol& dst, const Scalar& f, const SparseCol& src) {
  for (const auto& [e, c] : src.entries) {
    auto [it, fresh] = dst.entries.try_emplace(e, f * c);
    if (!fresh) {
      it->second += f * c;
      if (it->second.is_zero()) dst.entries.erase(it);
    }
  }
  for (const auto& [key, c] : src.comb) {
    auto [it, fresh] = dst.comb.try_emplace(key, f * c);
    if (!fresh) {
      it->second += f * c;
      if (it->second.is_zero()) dst.comb.erase(it);
    }
  }
}

}  // namespace

std::optional<MembershipWitness> graded_ideal_membership(const TruncSeries& h,
                                                         const std::vector<TruncSeries>& gens,
                                                         int degree) {
  for (const auto& g : gens) {
    if (g.vars() != h.vars()) fail(errc::domain, "variable mismatch in ideal generators");
    if (g.precision() < degree || h.precision() < degree)
      fail(errc::domain, "operands carry insufficient precision for the requested degree");
  }
  int n = h.nvars();

  // Enumerate multiplier monomials of degree <= degree - ord(gen).
  std::map<Exps, SparseCol, GrlexLess> pivots;  // leading monomial -> column

  auto reduce_insert = [&](SparseCol col) {
    for (;;) {
      if (col.entries.empty()) return;
      const Exps& lead = col.entries.begin()->first;
      auto it = pivots.find(lead);
      if (it == pivots.end()) {
        // normalize leading coefficient to 1
        Scalar inv = col.entries.begin()->second.inverse();
        SparseCol norm;
        col_axpy(norm, inv, col);
        pivots.emplace(lead, std::move(norm));
        return;
      }
      Scalar f = -col.entries.begin()->second;
      col_axpy(col, f, it->second);
    }
  };

  std::vector<Exps> mults;
  {
    // all exponent tuples of total degree <= degree (shared across gens)
    std::vector<Exps> acc;
    Exps cur(n, 0);
    auto rec = [&](auto&& self, int idx, int remaining) -> void {
      if (idx == n) {
        acc.push_back(cur);
        return;
      }
      for (int e = 0; e <= remaining; ++e) {
        cur[idx] = e;
        self(self, idx + 1, remaining - e);
      }
      cur[idx] = 0;
    };
    rec(rec, 0, degree);
    mults = std::move(acc);
  }

  for (int j = 0; j < static_cast<int>(gens.size()); ++j) {
    auto gord = gens[j].order();
    if (!gord) continue;  // zero generator contributes nothing
    int max_mult = degree - *gord;
    if (max_mult < 0) continue;
    TruncSeries gt = gens[j].truncated(degree);
    for (const auto& mu : mults) {
      if (total_degree(mu) > max_mult) continue;
      SparseCol col;
      for (const auto& [e, c] : gt.terms()) {
        Exps sum(n);
        for (int i = 0; i < n; ++i) sum[i] = e[i] + mu[i];
        if (total_degree(sum) > degree) continue;
        col.entries[sum] = c;
      }
      if (col.entries.empty()) continue;
      col.comb[{j, mu}] = Scalar(1);
      reduce_insert(std::move(col));
    }
  }

  // Reduce h against the pivots.
  SparseCol target;
  for (const auto& [e, c] : h.terms()) {
    if (total_degree(e) > degree) break;
    target.entries[e] = c;
  }
  std::map<std::pair<int, Exps>, Scalar> solution;
  while (!target.entries.empty()) {
    const Exps& lead = target.entries.begin()->first;
    auto it = pivots.find(lead);
    if (it == pivots.end()) return std::nullopt;
    Scalar f = target.entries.begin()->second;
    // target -= f * pivot; the pivot's combination enters the solution.
    for (const auto& [key, c] : it->second.comb) {
      auto [sit, fresh] = solution.try_emplace(key, f * c);
      if (!fresh) {
        sit->second += f * c;
        if (sit->second.is_zero()) solution.erase(sit);
      }
    }
    col_axpy(target, -f, it->second);
  }

  MembershipWitness w;
  for (size_t j = 0; j < gens.size(); ++j)
    w.q.push_back(TruncSeries(h.vars(), degree));
  for (const auto& [key, c] : solution) {
    auto [j, mu] = key;
    w.q[j].add_term(mu, c);
  }
  return w;
}

std::vector<TruncSeries> m_jf2_generators(const TruncSeries& f) {
  int n = f.nvars();
  std::vector<TruncSeries> partials;
  for (int i = 0; i < n; ++i) partials.push_back(f.derivative(i));
  std::vector<TruncSeries> gens;
  for (int v = 0; v < n; ++v) {
    TruncSeries xv = TruncSeries::variable(f.vars(), f.precision(), f.vars()[v]);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) gens.push_back(xv * partials[i] * partials[j]);
  }
  return gens;
}

bool ruiz_equivalent(const TruncSeries& f, const TruncSeries& g) {
  require_same_vars(f, g);
  auto ord = f.order();
  if (ord && *ord < 2) fail(errc::domain, "ruiz_equivalent requires f in m^2");
  int degree = std::min(f.precision(), g.precision());
  TruncSeries h = f - g;
  if (h.is_zero()) return true;
  return graded_ideal_membership(h, m_jf2_generators(f), degree).has_value();
}

}  // namespace duval::series
