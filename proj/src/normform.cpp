#include "duval/normform.hpp"

#include <algorithm>

namespace duval::normform {

using lattice::DynkinType;
using lattice::Family;
using series::CoordChange;
using series::compose;
using series::Exps;
using series::identity_change;
using series::inverse_change;
using series::inverse_unit;
using series::nth_root_of_unit;
using series::pow;
using series::TruncSeries;

namespace {

Scalar binom(int n, int k) {
  Int num = 1, den = 1;
  for (int j = 0; j < k; ++j) {
    num *= n - j;
    den *= j + 1;
  }
  Rat r(num, den);
  r.canonicalize();
  return Scalar(r);
}

// Substitute `val` for variable vi of f (Horner on the vi-powers).
TruncSeries subst_var(const TruncSeries& f, int vi, const TruncSeries& val) {
  int prec = std::min(f.precision(), val.precision());
  std::map<int, TruncSeries> by_power;
  for (const auto& [e, c] : f.terms()) {
    Exps rest = e;
    int k = rest[vi];
    rest[vi] = 0;
    auto [it, fresh] = by_power.try_emplace(k, TruncSeries(f.vars(), prec));
    it->second.add_term(rest, c);
  }
  TruncSeries out(f.vars(), prec);
  TruncSeries vp = TruncSeries::constant(f.vars(), prec, Scalar(1));
  int cur = 0;
  for (const auto& [k, part] : by_power) {
    for (; cur < k; ++cur) vp = vp * val;
    out = out + part * vp;
  }
  return out;
}

int weighted_degree(const Exps& e, int wy, int wz) { return e[0] * wy + e[1] * wz; }

// Solve Ew = q1 * gy + q2 * gz on one weighted-graded piece (2 variables),
// with q1, q2 weighted-homogeneous of the prescribed degrees.
std::pair<TruncSeries, TruncSeries> solve_weighted_piece(const TruncSeries& ew, int a, int s,
                                                         int eta_w, int zeta_w) {
  const auto& vars = ew.vars();
  int prec = ew.precision();
  int wy = s - 1, wz = a;

  TruncSeries gy = TruncSeries::monomial(vars, prec, {a - 1, 1}, Scalar(a));
  TruncSeries gz = TruncSeries::monomial(vars, prec, {a, 0}, Scalar(1)) +
                   TruncSeries::monomial(vars, prec, {0, s - 1}, Scalar(s));

  auto weighted_monomials = [&](int w) {
    std::vector<Exps> out;
    if (w < 0) return out;
    for (int p = 0; p * wy <= w; ++p) {
      int rem = w - p * wy;
      if (rem % wz) continue;
      int q = rem / wz;
      if (p + q <= prec) out.push_back({p, q});
    }
    return out;
  };

  struct Col {
    TruncSeries image;
    int which;  // 0 = eta, 1 = zeta
    Exps mono;
  };
  std::vector<Col> cols;
  for (const auto& mu : weighted_monomials(eta_w))
    cols.push_back({TruncSeries::monomial(vars, prec, mu, Scalar(1)) * gy, 0, mu});
  for (const auto& mu : weighted_monomials(zeta_w))
    cols.push_back({TruncSeries::monomial(vars, prec, mu, Scalar(1)) * gz, 1, mu});

  // Row space: all monomials occurring anywhere.
  std::map<Exps, int, series::GrlexLess> row_of;
  auto note_rows = [&](const TruncSeries& t) {
    for (const auto& [e, c] : t.terms())
      row_of.try_emplace(e, static_cast<int>(row_of.size()));
  };
  for (const auto& c : cols) note_rows(c.image);
  note_rows(ew);

  int nr = static_cast<int>(row_of.size());
  int nc = static_cast<int>(cols.size());
  std::vector<std::vector<Scalar>> mat(nr, std::vector<Scalar>(nc + 1, Scalar(0)));
  for (int j = 0; j < nc; ++j)
    for (const auto& [e, c] : cols[j].image.terms()) mat[row_of[e]][j] = c;
  for (const auto& [e, c] : ew.terms()) mat[row_of[e]][nc] = c;

  std::vector<int> pivot_col(nr, -1);
  int rank = 0;
  for (int j = 0; j < nc && rank < nr; ++j) {
    int piv = -1;
    for (int i = rank; i < nr; ++i)
      if (!mat[i][j].is_zero()) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(mat[piv], mat[rank]);
    Scalar inv = mat[rank][j].inverse();
    for (int k = j; k <= nc; ++k) mat[rank][k] *= inv;
    for (int i = 0; i < nr; ++i) {
      if (i == rank || mat[i][j].is_zero()) continue;
      Scalar f = mat[i][j];
      for (int k = j; k <= nc; ++k) mat[i][k] -= f * mat[rank][k];
    }
    pivot_col[rank] = j;
    rank++;
  }
  for (int i = rank; i < nr; ++i)
    if (!mat[i][nc].is_zero()) fail(errc::domain, "weighted normal-form step obstructed");

  TruncSeries eta(vars, prec), zeta(vars, prec);
  for (int i = 0; i < rank; ++i) {
    int j = pivot_col[i];
    if (mat[i][nc].is_zero()) continue;
    if (cols[j].which == 0)
      eta.add_term(cols[j].mono, mat[i][nc]);
    else
      zeta.add_term(cols[j].mono, mat[i][nc]);
  }
  return {eta, zeta};
}

}  // namespace

DnenResult dnen_normalize(int a, int s, int t, const TruncSeries& b) {
  if (!(s > a && a > 1)) fail(errc::domain, "dnen_normalize requires s > a > 1");
  if (!(t > a + 1)) fail(errc::domain, "dnen_normalize requires t > a + 1");
  if (b.nvars() != 2) fail(errc::domain, "b must be a series in two variables");
  if (!b.is_unit()) fail(errc::domain, "b must be a unit");
  if (!scalar_nth_root(b.constant_term(), a))
    fail(errc::domain, "constant term of b has no a-th root in the scalar field");

  const auto& vars = b.vars();
  int prec = b.precision();
  TruncSeries y = TruncSeries::variable(vars, prec, vars[0]);
  TruncSeries z = TruncSeries::variable(vars, prec, vars[1]);
  TruncSeries f = pow(y, a) * z + pow(z, s) - b * pow(y, t);

  DnenResult res{CoordChange{{y, z}}, CoordChange{{y, z}}, {}, false};
  TruncSeries Y = y, Z = z;

  if (t >= 2 * a) {
    // The proof's iteration: f = Y^a Z + Z^s - b_i Y^{k_i} throughout.
    TruncSeries bi = b;
    int k = t;
    while (k <= prec) {
      TruncSeries Znew = Z - bi * pow(Y, k - a);
      TruncSeries v = TruncSeries::constant(vars, prec, Scalar(1));
      for (int j = 1; j <= s - 1; ++j) {
        int ye = j * (k - a) - a;
        if (ye < 0) fail(errc::internal, "iteration outside its series range");
        v = v + binom(s, j) * (pow(bi, j) * pow(Y, ye) * pow(Znew, s - 1 - j));
      }
      TruncSeries vm1 = v - TruncSeries::constant(vars, prec, Scalar(1));
      int level = vm1.is_zero() ? prec : *vm1.order();
      TruncSeries w = nth_root_of_unit(v, a, Scalar(1), std::max(level, 1));
      res.steps.push_back({k, bi, v, w});
      int knew = s * (k - a);
      bi = -pow(bi, s) * pow(inverse_unit(w), knew);
      Y = w * Y;
      Z = Znew;
      k = knew;
    }
  } else if (t == 2 * a - 1) {
    // Weighted sweep (weights W_y = s-1, W_z = a): y^t sits above the socle
    // degree 2(a-1)(s-1), so each graded piece of the error is a combination
    // of the partials of y^a z + z^s.
    res.weighted_sweep_used = true;
    int wy = s - 1, wz = a, d = a * s;
    for (int guard = 0; ; ++guard) {
      if (guard > 4 * (prec + 1) * std::max(wy, wz))
        fail(errc::internal, "weighted sweep failed to terminate");
      TruncSeries cur = pow(Y, a) * Z + pow(Z, s);
      TruncSeries err = f - cur;
      if (err.is_zero()) break;
      int wmin = -1;
      for (const auto& [e, c] : err.terms()) {
        int w = weighted_degree(e, wy, wz);
        if (wmin < 0 || w < wmin) wmin = w;
      }
      TruncSeries piece(vars, prec);
      for (const auto& [e, c] : err.terms())
        if (weighted_degree(e, wy, wz) == wmin) piece.add_term(e, c);
      auto [eta, zeta] = solve_weighted_piece(piece, a, s, wmin - d + wy, wmin - d + wz);
      if (eta.is_zero() && zeta.is_zero())
        fail(errc::internal, "weighted sweep made no progress");
      Y = Y + eta;
      Z = Z + zeta;
    }
  } else {
    fail(errc::domain,
         "no normal form: t <= 2a - 2 perturbs a modulus of y^a z + z^s");
  }

  // Self-certification: f must equal Y^a Z + Z^s exactly mod degree > N,
  // with both coordinates congruent to the originals mod m^2.
  TruncSeries check = pow(Y, a) * Z + pow(Z, s);
  if (check != f) fail(errc::internal, "normal form verification failed");
  auto ordy = (Y - y).order();
  auto ordz = (Z - z).order();
  if ((ordy && *ordy < 2) || (ordz && *ordz < 2))
    fail(errc::internal, "coordinate congruence mod m^2 violated");

  res.forward = CoordChange{{Y, Z}};
  res.inverse = inverse_change(res.forward);
  return res;
}

// ---------------------------------------------------------------------------
// Quadratic part handling.

namespace {

// Symmetric matrix of the quadratic part: q = sum Q_ii x_i^2 + 2 Q_ij x_i x_j.
std::vector<std::vector<Scalar>> quadratic_matrix(const TruncSeries& f) {
  int n = f.nvars();
  std::vector<std::vector<Scalar>> q(n, std::vector<Scalar>(n, Scalar(0)));
  Scalar half = Scalar(Rat(1, 2));
  for (const auto& [e, c] : f.terms()) {
    if (series::total_degree(e) > 2) break;
    if (series::total_degree(e) != 2) continue;
    int i = -1, j = -1;
    for (int k = 0; k < n; ++k) {
      if (e[k] == 2) { i = j = k; }
      if (e[k] == 1) { (i < 0 ? i : j) = k; }
    }
    if (i == j)
      q[i][i] = c;
    else {
      q[i][j] = half * c;
      q[j][i] = q[i][j];
    }
  }
  return q;
}

struct Diagonalization {
  std::vector<std::vector<Scalar>> m;  // x_i = sum_j m[i][j] u_j
  std::vector<Scalar> lambdas;         // diagonal entries after congruence
  int rank = 0;
};

Diagonalization diagonalize_quadratic(std::vector<std::vector<Scalar>> a) {
  int n = static_cast<int>(a.size());
  std::vector<std::vector<Scalar>> m(n, std::vector<Scalar>(n, Scalar(0)));
  for (int i = 0; i < n; ++i) m[i][i] = Scalar(1);

  auto col_axpy = [&](int dst, int src, const Scalar& f) {
    // col_dst += f * col_src, mirrored on rows; m tracks column ops.
    for (int r = 0; r < n; ++r) a[r][dst] += f * a[r][src];
    for (int c = 0; c < n; ++c) a[dst][c] += f * a[src][c];
    for (int r = 0; r < n; ++r) m[r][dst] += f * m[r][src];
  };
  auto col_swap = [&](int i, int j) {
    for (int r = 0; r < n; ++r) std::swap(a[r][i], a[r][j]);
    for (int c = 0; c < n; ++c) std::swap(a[i][c], a[j][c]);
    for (int r = 0; r < n; ++r) std::swap(m[r][i], m[r][j]);
  };

  int k = 0;
  for (; k < n; ++k) {
    // Ensure a nonzero (k,k) pivot if the trailing block is nonzero.
    if (a[k][k].is_zero()) {
      int dj = -1;
      for (int j = k + 1; j < n; ++j)
        if (!a[j][j].is_zero()) { dj = j; break; }
      if (dj >= 0) {
        col_swap(k, dj);
      } else {
        int pi = -1, pj = -1;
        for (int i = k; i < n && pi < 0; ++i)
          for (int j = k; j < n; ++j)
            if (!a[i][j].is_zero()) { pi = i; pj = j; break; }
        if (pi < 0) break;  // trailing block zero: done
        col_axpy(pi, pj, Scalar(1));  // creates 2*a[pi][pj] on the diagonal
        if (pi != k) col_swap(k, pi);
      }
    }
    Scalar inv = a[k][k].inverse();
    for (int j = k + 1; j < n; ++j) {
      if (a[k][j].is_zero()) continue;
      col_axpy(j, k, -(a[k][j] * inv));
    }
  }

  Diagonalization d;
  d.m = m;
  for (int i = 0; i < n; ++i) {
    d.lambdas.push_back(a[i][i]);
    if (!a[i][i].is_zero()) d.rank++;
  }
  return d;
}

CoordChange linear_change_of(const std::vector<std::vector<Scalar>>& m,
                             const std::vector<std::string>& vars, int prec) {
  CoordChange c;
  int n = static_cast<int>(m.size());
  for (int i = 0; i < n; ++i) {
    TruncSeries comp(vars, prec);
    for (int j = 0; j < n; ++j) {
      Exps e(n, 0);
      e[j] = 1;
      comp.add_term(e, m[i][j]);
    }
    c.components.push_back(comp);
  }
  return c;
}

// f with the square variables leading: list square vars (lambda != 0) first
// in the order produced by the diagonalization.
struct DiagonalizedGerm {
  TruncSeries f;
  CoordChange change;
  std::vector<int> square_vars;
  std::vector<int> rest_vars;
  std::vector<Scalar> lambdas;  // per square var
};

DiagonalizedGerm diagonalized_germ(const TruncSeries& f0) {
  auto q = quadratic_matrix(f0);
  auto d = diagonalize_quadratic(q);
  CoordChange lin = linear_change_of(d.m, f0.vars(), f0.precision());
  DiagonalizedGerm g{compose(f0, lin), lin, {}, {}, {}};
  for (int i = 0; i < f0.nvars(); ++i) {
    if (!d.lambdas[i].is_zero()) {
      g.square_vars.push_back(i);
      g.lambdas.push_back(d.lambdas[i]);
    } else {
      g.rest_vars.push_back(i);
    }
  }
  return g;
}

// h_k decomposition: f = sum_k x_vi^k h_k with h_k free of x_vi.
std::map<int, TruncSeries> by_var_power(const TruncSeries& f, int vi) {
  std::map<int, TruncSeries> parts;
  for (const auto& [e, c] : f.terms()) {
    Exps rest = e;
    int k = rest[vi];
    rest[vi] = 0;
    auto [it, fresh] = parts.try_emplace(k, TruncSeries(f.vars(), f.precision()));
    it->second.add_term(rest, c);
  }
  return parts;
}

}  // namespace

SplitData split_for_classification(const TruncSeries& f0) {
  auto ord = f0.order();
  if (!ord || *ord < 2) fail(errc::domain, "splitting requires a germ in m^2");
  DiagonalizedGerm g = diagonalized_germ(f0);
  TruncSeries f = g.f;
  for (int vi : g.square_vars) {
    // Critical-point elimination: solve df/dx_vi = 0 for x_vi = phi(rest) by
    // Newton, then restrict; the restriction is the splitting residual.
    TruncSeries gder = f.derivative(vi);
    TruncSeries gder2 = gder.derivative(vi);
    TruncSeries phi(f.vars(), f.precision());
    for (int round = 0; round <= f.precision() + 1; ++round) {
      TruncSeries gval = subst_var(gder, vi, phi);
      if (gval.is_zero()) break;
      TruncSeries gpval = subst_var(gder2, vi, phi);
      phi = phi - gval * inverse_unit(gpval);
    }
    if (!subst_var(gder, vi, phi).is_zero())
      fail(errc::internal, "critical point iteration did not converge");
    f = subst_var(f, vi, phi);
  }
  SplitData out{static_cast<int>(g.square_vars.size()), g.rest_vars, f};
  auto rord = f.order();
  if (rord && *rord < 3) fail(errc::internal, "splitting residual not in m^3");
  return out;
}

SplittingResult splitting_lemma(const TruncSeries& f0) {
  auto ord = f0.order();
  if (!ord || *ord < 2) fail(errc::domain, "splitting_lemma requires f in m^2");
  int prec = f0.precision();
  const auto& vars = f0.vars();
  DiagonalizedGerm g = diagonalized_germ(f0);
  if (g.square_vars.empty()) fail(errc::domain, "zero quadratic part");

  TruncSeries f = g.f;
  CoordChange total = g.change;

  auto apply = [&](const CoordChange& step) {
    f = compose(f, step);
    total = series::compose_changes(total, step);
  };

  for (size_t si = 0; si < g.square_vars.size(); ++si) {
    int vi = g.square_vars[si];
    // Kill the x_vi-linear part.
    for (int round = 0; round <= prec + 1; ++round) {
      auto parts = by_var_power(f, vi);
      auto itb = parts.find(1);
      if (itb == parts.end() || itb->second.is_zero()) break;
      auto it2 = parts.find(2);
      if (it2 == parts.end()) fail(errc::internal, "lost the square term");
      TruncSeries delta = -(Rat(1, 2) * itb->second * inverse_unit(it2->second));
      CoordChange step = identity_change(vars, prec);
      step.components[vi] = step.components[vi] + delta;
      apply(step);
    }
    // Normalize the coefficient of x_vi^2 to exactly 1 (scalar square root
    // plus a unit square root; iterate because the unit may involve x_vi).
    for (int round = 0; round <= prec + 1; ++round) {
      auto parts = by_var_power(f, vi);
      TruncSeries unit(vars, prec);
      for (const auto& [k, h] : parts) {
        if (k < 2) continue;
        unit = unit + h * pow(TruncSeries::variable(vars, prec, vars[vi]), k - 2);
      }
      if (unit == TruncSeries::constant(vars, prec, Scalar(1))) break;
      Scalar c0 = unit.constant_term();
      auto root0 = scalar_sqrt(c0);
      if (!root0) fail(errc::domain, "square root outside the scalar field");
      TruncSeries w = Scalar(*root0) * nth_root_of_unit(c0.inverse() * unit, 2, Scalar(1), 1);
      CoordChange step = identity_change(vars, prec);
      step.components[vi] = TruncSeries::variable(vars, prec, vars[vi]) * inverse_unit(w);
      apply(step);
    }
  }

  // Residual: everything not in the square variables.
  TruncSeries squares(vars, prec);
  for (int vi : g.square_vars)
    squares = squares + pow(TruncSeries::variable(vars, prec, vars[vi]), 2);
  SplittingResult res{total, f - squares, static_cast<int>(g.square_vars.size())};
  for (const auto& [e, c] : res.residual.terms())
    for (int vi : g.square_vars)
      if (e[vi] != 0) fail(errc::internal, "splitting left a square-variable term");

  if (compose(f0, total) != squares + res.residual)
    fail(errc::internal, "splitting verification failed");
  return res;
}

// ---------------------------------------------------------------------------
// ADE recognition.

namespace {

// Restrict a residual supported on two variables to a fresh 2-variable ring.
TruncSeries extract_two_vars(const TruncSeries& f, int vi, int vj) {
  std::vector<std::string> vars = {"y", "z"};
  TruncSeries out(vars, f.precision());
  for (const auto& [e, c] : f.terms()) out.add_term({e[vi], e[vj]}, c);
  return out;
}

struct Cubic {
  Scalar a, b, c, d;  // a y^3 + b y^2 z + c y z^2 + d z^3
};

Cubic cubic_of(const TruncSeries& g) {
  return {g.coeff({3, 0}), g.coeff({2, 1}), g.coeff({1, 2}), g.coeff({0, 3})};
}

Scalar cubic_disc(const Cubic& q) {
  return Scalar(18) * q.a * q.b * q.c * q.d - Scalar(4) * q.b.pow(3) * q.d +
         q.b.pow(2) * q.c.pow(2) - Scalar(4) * q.a * q.c.pow(3) -
         Scalar(27) * q.a.pow(2) * q.d.pow(2);
}

// Hessian of the binary cubic: a quadratic A y^2 + B yz + C z^2.
std::array<Scalar, 3> cubic_hessian(const Cubic& q) {
  // c_yy = 6a y + 2b z ; c_zz = 2c y + 6d z ; c_yz = 2b y + 2c z
  Scalar A = Scalar(12) * q.a * q.c - Scalar(4) * q.b * q.b;
  Scalar B = Scalar(36) * q.a * q.d - Scalar(4) * q.b * q.c;
  Scalar C = Scalar(12) * q.b * q.d - Scalar(4) * q.c * q.c;
  return {A, B, C};
}

// Linear change on two variables sending the lines l1, l2 to the coordinate
// axes: returns the change c with l1(c) = y, l2(c) = z.
CoordChange two_line_change(const std::array<Scalar, 2>& l1, const std::array<Scalar, 2>& l2,
                            int prec) {
  Scalar det = l1[0] * l2[1] - l1[1] * l2[0];
  if (det.is_zero()) fail(errc::internal, "dependent lines");
  Scalar inv = det.inverse();
  // inverse of [[l1],[l2]]
  std::vector<std::vector<Scalar>> m = {{l2[1] * inv, -l1[1] * inv}, {-l2[0] * inv, l1[0] * inv}};
  return linear_change_of(m, {"y", "z"}, prec);
}

// Iterated reduction to y^2 z * gamma + phi(z): kills every monomial
// y^p z^q (p >= 1, degree >= 4) by coordinate moves against the cubic y^2 z.
TruncSeries dseries_reduce(TruncSeries g, const Scalar& gamma) {
  const auto vars = g.vars();
  int prec = g.precision();
  int guard = (prec + 2) * (prec + 2);
  for (;;) {
    const Exps* bad = nullptr;
    Scalar coef;
    for (const auto& [e, c] : g.terms()) {
      if (series::total_degree(e) < 4 || e[0] == 0) continue;
      bad = &e;
      coef = c;
      break;
    }
    if (!bad) break;
    if (--guard < 0) fail(errc::internal, "D-reduction did not terminate");
    int p = (*bad)[0], q = (*bad)[1];
    CoordChange step = identity_change(vars, prec);
    if (p >= 2) {
      TruncSeries delta =
          TruncSeries::monomial(vars, prec, {p - 2, q}, -(coef * gamma.inverse()));
      step.components[1] = step.components[1] + delta;
    } else {
      TruncSeries eps = TruncSeries::monomial(
          vars, prec, {0, q - 1}, -(coef * (Scalar(2) * gamma).inverse()));
      step.components[0] = step.components[0] + eps;
    }
    g = compose(g, step);
  }
  TruncSeries phi(g.vars(), prec);
  for (const auto& [e, c] : g.terms()) {
    if (e[0] == 0) phi.add_term(e, c);
    else if (!(e[0] == 2 && e[1] == 1))
      fail(errc::internal, "D-reduction left an off-form term");
  }
  return phi;
}

// Reduce against the cubic y^3: kills y^p z^q with p >= 2, degree >= 4,
// leaving gamma y^3 + y psi(z) + phi(z).
std::pair<TruncSeries, TruncSeries> eseries_reduce(TruncSeries g, const Scalar& gamma) {
  const auto vars = g.vars();
  int prec = g.precision();
  int guard = (prec + 2) * (prec + 2);
  for (;;) {
    const Exps* bad = nullptr;
    Scalar coef;
    for (const auto& [e, c] : g.terms()) {
      if (series::total_degree(e) < 4 || e[0] < 2) continue;
      bad = &e;
      coef = c;
      break;
    }
    if (!bad) break;
    if (--guard < 0) fail(errc::internal, "E-reduction did not terminate");
    int p = (*bad)[0], q = (*bad)[1];
    CoordChange step = identity_change(vars, prec);
    TruncSeries eps =
        TruncSeries::monomial(vars, prec, {p - 2, q}, -(coef * (Scalar(3) * gamma).inverse()));
    step.components[0] = step.components[0] + eps;
    g = compose(g, step);
  }
  TruncSeries psi(vars, prec), phi(vars, prec);
  for (const auto& [e, c] : g.terms()) {
    if (e[0] == 0) phi.add_term(e, c);
    else if (e[0] == 1) psi.add_term({0, e[1]}, c);
    else if (!(e[0] == 3 && e[1] == 0))
      fail(errc::internal, "E-reduction left an off-form term");
  }
  return {psi, phi};
}

[[noreturn]] void unclassified(const std::string& why) { throw Error(errc::unclassified, why); }

}  // namespace

DynkinType ade_classify(const TruncSeries& f, int max_index) {
  if (f.nvars() != 3) fail(errc::domain, "ade_classify expects a germ in three variables");
  if (max_index < 1) fail(errc::domain, "max_index must be >= 1");
  if (f.precision() < max_index + 2)
    fail(errc::domain, "precision must be at least max_index + 2");
  auto ord = f.order();
  if (!ord) unclassified("zero germ");
  if (*ord != 2) unclassified("germ multiplicity is not 2");

  SplitData sp = split_for_classification(f);
  if (sp.rank == 3) return DynkinType(Family::A, 1);
  if (sp.rank == 2) {
    auto m = sp.residual.order();
    if (!m) unclassified("corank-1 residual vanishes to the carried precision");
    int k = *m - 1;
    if (k > max_index) unclassified("index exceeds max_index");
    return DynkinType(Family::A, k);
  }
  if (sp.rank != 1) unclassified("quadratic part vanishes");

  TruncSeries g = extract_two_vars(sp.residual, sp.kept_vars[0], sp.kept_vars[1]);
  Cubic c3 = cubic_of(g);
  if (c3.a.is_zero() && c3.b.is_zero() && c3.c.is_zero() && c3.d.is_zero())
    unclassified("cubic part vanishes");

  Scalar disc = cubic_disc(c3);
  if (!disc.is_zero()) {
    if (max_index < 4) unclassified("index exceeds max_index");
    return DynkinType(Family::D, 4);
  }

  auto hess = cubic_hessian(c3);
  bool triple = hess[0].is_zero() && hess[1].is_zero() && hess[2].is_zero();
  int prec = g.precision();

  if (triple) {
    // c3 = gamma * l^3; send l to the y-axis.
    std::array<Scalar, 2> ell;
    Scalar gamma;
    if (!c3.a.is_zero()) {
      ell = {Scalar(1), c3.b * (Scalar(3) * c3.a).inverse()};
      gamma = c3.a;
    } else {
      ell = {c3.c * (Scalar(3) * c3.d).inverse(), Scalar(1)};
      gamma = c3.d;
    }
    std::array<Scalar, 2> comp =
        ell[0].is_zero() || !ell[1].is_zero() ? std::array<Scalar, 2>{Scalar(1), Scalar(0)}
                                              : std::array<Scalar, 2>{Scalar(0), Scalar(1)};
    // guard: comp independent of ell
    if ((ell[0] * comp[1] - ell[1] * comp[0]).is_zero()) comp = {Scalar(0), Scalar(1)};
    TruncSeries gg = compose(g, two_line_change(ell, comp, prec));
    Cubic check = cubic_of(gg);
    if (!check.b.is_zero() || !check.c.is_zero() || !check.d.is_zero())
      fail(errc::internal, "triple-root normalization failed");
    auto [psi, phi] = eseries_reduce(gg, check.a);
    if (!phi.coeff({0, 4}).is_zero()) {
      if (max_index < 6) unclassified("index exceeds max_index");
      return DynkinType(Family::E, 6);
    }
    if (!psi.coeff({0, 3}).is_zero()) {
      if (max_index < 7) unclassified("index exceeds max_index");
      return DynkinType(Family::E, 7);
    }
    if (!phi.coeff({0, 5}).is_zero()) {
      if (max_index < 8) unclassified("index exceeds max_index");
      return DynkinType(Family::E, 8);
    }
    unclassified("corank-2 germ beyond the E series within precision");
  }

  // Double root: the Hessian is proportional to the square of the repeated
  // line, which is therefore rational.
  std::array<Scalar, 2> ld;
  if (!hess[0].is_zero())
    ld = {Scalar(1), hess[1] * (Scalar(2) * hess[0]).inverse()};
  else if (!hess[2].is_zero())
    ld = {hess[1] * (Scalar(2) * hess[2]).inverse(), Scalar(1)};
  else
    fail(errc::internal, "degenerate cubic Hessian");
  // Simple factor: solve c3 = ld^2 * (u y + v z) coefficientwise.
  Scalar u, v;
  {
    // (ld0 y + ld1 z)^2 = ld0^2 y^2 + 2 ld0 ld1 yz + ld1^2 z^2
    Scalar p0 = ld[0] * ld[0], p1 = Scalar(2) * ld[0] * ld[1], p2 = ld[1] * ld[1];
    // y^3: p0*u ; y^2 z: p0*v + p1*u ; y z^2: p1*v + p2*u ; z^3: p2*v
    bool solved = false;
    if (!p0.is_zero()) {
      u = c3.a * p0.inverse();
      v = (c3.b - p1 * u) * p0.inverse();
      solved = true;
    } else if (!p2.is_zero()) {
      v = c3.d * p2.inverse();
      u = (c3.c - p1 * v) * p2.inverse();
      solved = true;
    }
    if (!solved) fail(errc::internal, "could not factor the cubic");
    // verify
    Scalar e0 = p0 * u, e1 = p0 * v + p1 * u, e2 = p1 * v + p2 * u, e3 = p2 * v;
    if (e0 != c3.a || e1 != c3.b || e2 != c3.c || e3 != c3.d)
      fail(errc::internal, "cubic factorization check failed");
  }
  std::array<Scalar, 2> ls = {u, v};
  TruncSeries gg = compose(g, two_line_change(ld, ls, prec));
  Cubic check = cubic_of(gg);
  if (!check.a.is_zero() || !check.c.is_zero() || !check.d.is_zero() || check.b.is_zero())
    fail(errc::internal, "double-root normalization failed");
  TruncSeries phi = dseries_reduce(gg, check.b);
  auto m = phi.order();
  if (!m) unclassified("D-series tail vanishes to the carried precision");
  int k = *m + 1;
  if (k > max_index) unclassified("index exceeds max_index");
  return DynkinType(Family::D, k);
}

}  // namespace duval::normform
