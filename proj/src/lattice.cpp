#include "duval/lattice.hpp"

#include <algorithm>
#include <numeric>

namespace duval::lattice {

DynkinType::DynkinType(Family f, int n) : family(f), rank(n) {
  if (n > kMaxRank) fail(errc::domain, "rank exceeds supported bound " + std::to_string(kMaxRank));
  switch (f) {
    case Family::A:
      if (n < 1) fail(errc::domain, "A_n requires n >= 1");
      break;
    case Family::D:
      if (n < 4) fail(errc::domain, "D_n requires n >= 4");
      break;
    case Family::E:
      if (n < 6 || n > 8) fail(errc::domain, "E_n requires n in {6,7,8}");
      break;
  }
}

std::string DynkinType::name() const {
  char c = family == Family::A ? 'A' : family == Family::D ? 'D' : 'E';
  return std::string(1, c) + std::to_string(rank);
}

DynkinType DynkinType::parse(const std::string& s) {
  if (s.size() < 2) fail(errc::domain, "bad Dynkin type '" + s + "'");
  Family f;
  switch (s[0]) {
    case 'A': case 'a': f = Family::A; break;
    case 'D': case 'd': f = Family::D; break;
    case 'E': case 'e': f = Family::E; break;
    default: fail(errc::domain, "bad Dynkin family in '" + s + "'");
  }
  for (size_t i = 1; i < s.size(); ++i)
    if (!isdigit(static_cast<unsigned char>(s[i]))) fail(errc::domain, "bad Dynkin rank in '" + s + "'");
  return DynkinType(f, std::stoi(s.substr(1)));
}

// Edges (1-based) of the diagram under the paper's numbering.
static std::vector<std::pair<int, int>> diagram_edges(const DynkinType& t) {
  std::vector<std::pair<int, int>> e;
  int n = t.rank;
  switch (t.family) {
    case Family::A:
      for (int i = 1; i < n; ++i) e.push_back({i, i + 1});
      break;
    case Family::D:
      for (int i = 1; i < n - 2; ++i) e.push_back({i, i + 1});
      e.push_back({n - 2, n - 1});
      e.push_back({n - 2, n});
      break;
    case Family::E:
      for (int i = 1; i < n - 3; ++i) e.push_back({i, i + 1});
      e.push_back({n - 3, n - 1});
      e.push_back({n - 1, n});
      e.push_back({n - 3, n - 2});
      break;
  }
  return e;
}

IntersectionLattice intersection_matrix(const DynkinType& t) {
  int n = t.rank;
  IntMat m(n, IntVec(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = -2;
  for (auto [a, b] : diagram_edges(t)) {
    m[a - 1][b - 1] = 1;
    m[b - 1][a - 1] = 1;
  }
  return {t, m};
}

// ---------------------------------------------------------------------------
// Smith normal form with recorded transforms.

namespace {

using BigMat = std::vector<std::vector<Int>>;

BigMat identity_mat(int n) {
  BigMat m(n, std::vector<Int>(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

void swap_rows(BigMat& a, BigMat& u, int i, int j) {
  std::swap(a[i], a[j]);
  std::swap(u[i], u[j]);
}
void swap_cols(BigMat& a, BigMat& v, int i, int j) {
  for (auto& row : a) std::swap(row[i], row[j]);
  for (auto& row : v) std::swap(row[i], row[j]);
}
// row i -= q * row j
void row_op(BigMat& a, BigMat& u, int i, int j, const Int& q) {
  int n = static_cast<int>(a[0].size());
  for (int k = 0; k < n; ++k) a[i][k] -= q * a[j][k];
  int un = static_cast<int>(u[0].size());
  for (int k = 0; k < un; ++k) u[i][k] -= q * u[j][k];
}
void col_op(BigMat& a, BigMat& v, int i, int j, const Int& q) {
  for (auto& row : a) row[i] -= q * row[j];
  for (auto& row : v) row[i] -= q * row[j];
}
void negate_row(BigMat& a, BigMat& u, int i) {
  for (auto& x : a[i]) x = -x;
  for (auto& x : u[i]) x = -x;
}

}  // namespace

SmithResult smith_normal_form(const IntMat& a0) {
  int n = static_cast<int>(a0.size());
  int m = n == 0 ? 0 : static_cast<int>(a0[0].size());
  BigMat a(n, std::vector<Int>(m));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) a[i][j] = a0[i][j];
  BigMat u = identity_mat(n), v = identity_mat(m);

  int r = std::min(n, m);
  for (int k = 0; k < r; ++k) {
    // Pivot: smallest nonzero |entry| in the trailing submatrix.
    int pi = -1, pj = -1;
    Int best;
    for (int i = k; i < n; ++i)
      for (int j = k; j < m; ++j)
        if (a[i][j] != 0) {
          Int mag = abs(a[i][j]);
          if (pi < 0 || mag < best) {
            best = mag;
            pi = i;
            pj = j;
          }
        }
    if (pi < 0) break;
    swap_rows(a, u, k, pi);
    swap_cols(a, v, k, pj);

    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (int i = k + 1; i < n; ++i) {
        if (a[i][k] == 0) continue;
        Int q = a[i][k] / a[k][k];
        row_op(a, u, i, k, q);
        if (a[i][k] != 0) {  // remainder smaller than pivot: promote it
          swap_rows(a, u, k, i);
          dirty = true;
        }
      }
      for (int j = k + 1; j < m; ++j) {
        if (a[k][j] == 0) continue;
        Int q = a[k][j] / a[k][k];
        col_op(a, v, j, k, q);
        if (a[k][j] != 0) {
          swap_cols(a, v, k, j);
          dirty = true;
        }
      }
    }
    if (a[k][k] < 0) negate_row(a, u, k);

    // Divisibility d_k | d_{k+1}: fold offending entries back in.
    for (int i = k + 1; i < n && a[k][k] != 0; ++i) {
      bool fix = false;
      for (int j = k + 1; j < m; ++j)
        if (a[i][j] % a[k][k] != 0) { fix = true; break; }
      if (fix) {
        // add row i to row k and redo this pivot
        row_op(a, u, k, i, Int(-1));
        k--;
        fix = false;
        break;
      }
    }
  }

  SmithResult res;
  res.u = u;
  res.v = v;
  res.d = a;
  return res;
}

Int abs_det(const IntMat& a) {
  SmithResult s = smith_normal_form(a);
  Int det = 1;
  int n = static_cast<int>(a.size());
  for (int i = 0; i < n; ++i) det *= s.d[i][i];
  return abs(det);
}

ClassGroup class_group(const DynkinType& t) {
  IntersectionLattice lat = intersection_matrix(t);
  SmithResult s = smith_normal_form(lat.matrix);
  ClassGroup g{t, {}, {}};
  int n = t.rank;
  for (int i = 0; i < n; ++i) {
    Int d = s.d[i][i];
    if (d == 0) fail(errc::internal, "singular intersection matrix");
    if (d >= 2) {
      g.invariant_factors.push_back(d);
      g.projection.push_back(s.u[i]);
    }
  }
  return g;
}

ClassElement ClassGroup::project(const IntVec& v) const {
  if (static_cast<int>(v.size()) != dynkin.rank)
    fail(errc::domain, "vector length mismatch: expected " + std::to_string(dynkin.rank));
  ClassElement e;
  for (size_t j = 0; j < invariant_factors.size(); ++j) {
    Int acc = 0;
    for (size_t k = 0; k < v.size(); ++k) acc += projection[j][k] * v[k];
    Int d = invariant_factors[j];
    Int r = acc % d;
    if (r < 0) r += d;
    e.residues.push_back(r.get_si());
  }
  return e;
}

ClassElement ClassGroup::identity() const {
  return ClassElement{IntVec(invariant_factors.size(), 0)};
}

ClassElement ClassGroup::add(const ClassElement& a, const ClassElement& b) const {
  ClassElement e;
  for (size_t j = 0; j < invariant_factors.size(); ++j) {
    Int r = (a.residues[j] + b.residues[j]) % invariant_factors[j];
    e.residues.push_back(r.get_si());
  }
  return e;
}

ClassElement ClassGroup::negate(const ClassElement& a) const {
  ClassElement e;
  for (size_t j = 0; j < invariant_factors.size(); ++j) {
    Int r = (invariant_factors[j] - a.residues[j]) % invariant_factors[j];
    e.residues.push_back(r.get_si());
  }
  return e;
}

Int ClassGroup::order(const ClassElement& a) const {
  Int ord = 1;
  for (size_t j = 0; j < invariant_factors.size(); ++j) {
    Int d = invariant_factors[j];
    Int g = gcd(Int(a.residues[j]), d);
    Int o = d / g;
    ord = lcm(ord, o);
  }
  return ord;
}

ClassElement class_of(const DynkinType& t, const IntersectionVector& s) {
  return class_group(t).project(s.s);
}

// ---------------------------------------------------------------------------
// Fundamental cycle.

ExcDivisor fundamental_cycle_from(const DynkinType& t, int start_index, std::uint64_t order_seed) {
  if (start_index < 1 || start_index > t.rank) fail(errc::domain, "start index out of range");
  IntersectionLattice lat = intersection_matrix(t);
  int n = t.rank;
  IntVec z(n, 0);
  z[start_index - 1] = 1;
  // Deterministic scan order derived from the seed (an affine re-indexing).
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (order_seed != 0) {
    std::uint64_t st = order_seed;
    for (int i = n - 1; i > 0; --i) {
      st = st * 6364136223846793005ULL + 1442695040888963407ULL;
      int j = static_cast<int>(st % static_cast<std::uint64_t>(i + 1));
      std::swap(order[i], order[j]);
    }
  }
  for (;;) {
    int found = -1;
    for (int idx : order) {
      Int dot = 0;
      for (int k = 0; k < n; ++k) dot += Int(lat.matrix[idx][k]) * z[k];
      if (dot > 0) { found = idx; break; }
    }
    if (found < 0) break;
    z[found] += 1;
  }
  return ExcDivisor{z};
}

ExcDivisor fundamental_cycle(const DynkinType& t) { return fundamental_cycle_from(t, 1, 0); }

std::set<int> admissible_indices(const DynkinType& t) {
  ExcDivisor xi = fundamental_cycle(t);
  std::set<int> out;
  for (int i = 0; i < t.rank; ++i)
    if (xi.coeffs[i] == 1) out.insert(i + 1);
  return out;
}

Int multiplicity(const DynkinType& t, const IntersectionVector& s) {
  if (static_cast<int>(s.s.size()) != t.rank) fail(errc::domain, "vector length mismatch");
  for (auto v : s.s)
    if (v < 0) fail(errc::domain, "multiplicity requires s >= 0");
  ExcDivisor xi = fundamental_cycle(t);
  Int acc = 0;
  for (int i = 0; i < t.rank; ++i) acc += Int(xi.coeffs[i]) * s.s[i];
  return acc;
}

ClassElement ej_class(const DynkinType& t, int j) {
  if (j < 1 || j > t.rank) fail(errc::domain, "index out of range");
  IntVec v(t.rank, 0);
  v[j - 1] = 1;
  return class_of(t, IntersectionVector{v});
}

}  // namespace duval::lattice
