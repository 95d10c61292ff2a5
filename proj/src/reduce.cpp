#include "duval/reduce.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace duval::reduce {

using lattice::class_group;
using lattice::class_of;
using lattice::ClassElement;
using lattice::Family;
using lattice::IntMat;
using lattice::intersection_matrix;

namespace {

// Mutable reduction state: s tracks the profile of F + (accumulated g).
struct Work {
  IntMat m;
  IntVec s;
  IntVec g;

  explicit Work(const DynkinType& t, IntVec s0)
      : m(intersection_matrix(t).matrix), s(std::move(s0)), g(s.size(), 0) {}

  void add(const IntVec& d, std::int64_t times = 1) {
    if (times <= 0) return;
    int n = static_cast<int>(s.size());
    for (int i = 0; i < n; ++i) g[i] += times * d[i];
    for (int i = 0; i < n; ++i) {
      std::int64_t dot = 0;
      for (int k = 0; k < n; ++k) dot += m[i][k] * d[k];
      s[i] += times * dot;
    }
  }

  void add_unit(int node, std::int64_t times = 1) {
    IntVec d(s.size(), 0);
    d[node] = 1;
    add(d, times);
  }

  IntVec divisor(std::initializer_list<std::pair<int, std::int64_t>> entries) const {
    IntVec d(s.size(), 0);
    for (auto [node, c] : entries) d[node] = c;
    return d;
  }
};

// A-chain step: while the profile on the chain sums to >= 2, add the chain
// segment between the outermost positive entries (a single E when they
// coincide). Nodes are 0-based ids into the ambient diagram.
void reduce_chain(Work& w, const std::vector<int>& chain) {
  for (;;) {
    std::int64_t total = 0;
    int lo = -1, hi = -1;
    for (int k = 0; k < static_cast<int>(chain.size()); ++k) {
      std::int64_t v = w.s[chain[k]];
      total += v;
      if (v > 0) {
        if (lo < 0) lo = k;
        hi = k;
      }
    }
    if (total <= 1) return;
    IntVec d(w.s.size(), 0);
    for (int k = lo; k <= hi; ++k) d[chain[k]] = 1;
    w.add(d);
  }
}

// D-family step on the sub-diagram (chain..., f1, f2), f1/f2 attached to the
// last chain node. Ends with the sub-profile zero or a unit at chain[0], f1
// or f2; nodes left of chain[0] may have been polluted for the caller.
void reduce_D(Work& w, const std::vector<int>& chain, int f1, int f2) {
  if (chain.size() < 2) fail(errc::internal, "D sub-diagram too small");
  if (chain.size() == 2) {
    int e = chain[0], c = chain[1];
    w.add_unit(e, w.s[e] / 2);
    w.add_unit(f1, w.s[f1] / 2);
    w.add_unit(f2, w.s[f2] / 2);
    w.add(w.divisor({{e, 1}, {c, 2}, {f1, 1}, {f2, 1}}), w.s[c]);
    int cnt = (w.s[e] == 1) + (w.s[f1] == 1) + (w.s[f2] == 1);
    if (cnt <= 1) return;
    if (cnt == 3) {
      w.add(w.divisor({{e, 2}, {c, 3}, {f1, 2}, {f2, 2}}));
      return;
    }
    if (w.s[e] == 1 && w.s[f1] == 1) w.add(w.divisor({{e, 1}, {c, 1}, {f1, 1}}));
    else if (w.s[e] == 1 && w.s[f2] == 1) w.add(w.divisor({{e, 1}, {c, 1}, {f2, 1}}));
    else w.add(w.divisor({{c, 1}, {f1, 1}, {f2, 1}}));
    return;
  }

  std::vector<int> tail(chain.begin() + 1, chain.end());
  reduce_D(w, tail, f1, f2);

  int head = chain[0], next = chain[1];
  // (2,2,...,2,1,1): lowers s at head by 2, fixes everything else here.
  IntVec twos(w.s.size(), 0);
  for (int node : chain) twos[node] = 2;
  twos[f1] = 1;
  twos[f2] = 1;
  w.add(twos, w.s[head] / 2);
  // xi0 of this sub-D: lowers s at the second chain node by 1.
  IntVec xi(w.s.size(), 0);
  xi[head] = 1;
  for (size_t k = 1; k < chain.size(); ++k) xi[chain[k]] = 2;
  xi[f1] = 1;
  xi[f2] = 1;
  w.add(xi, w.s[next]);

  if (w.s[head] == 1 && w.s[f1] == 1) {
    IntVec d(w.s.size(), 0);
    for (int node : chain) d[node] = 1;
    d[f1] = 1;
    w.add(d);  // lands on a unit at f2
  } else if (w.s[head] == 1 && w.s[f2] == 1) {
    IntVec d(w.s.size(), 0);
    for (int node : chain) d[node] = 1;
    d[f2] = 1;
    w.add(d);
  }
}

// E_7 step over explicit node ids (E_7 numbering order), so the same code
// serves E_7 itself and the E_7 inside E_8.
void reduce_E7_on(Work& w, const std::array<int, 7>& n) {
  reduce_D(w, {n[0], n[1], n[2], n[3]}, n[4], n[5]);
  IntVec xi = w.divisor({{n[0], 1}, {n[1], 2}, {n[2], 3}, {n[3], 4}, {n[4], 2}, {n[5], 3}, {n[6], 2}});
  w.add(xi, w.s[n[6]]);
  if (w.s[n[4]] == 1)
    w.add(w.divisor({{n[1], 1}, {n[2], 2}, {n[3], 3}, {n[4], 2}, {n[5], 2}, {n[6], 1}}));
  else if (w.s[n[5]] == 1)
    w.add(w.divisor({{n[0], 2}, {n[1], 4}, {n[2], 6}, {n[3], 8}, {n[4], 4}, {n[5], 6}, {n[6], 3}}));
}

void run_case_analysis(const DynkinType& t, Work& w) {
  int n = t.rank;
  switch (t.family) {
    case Family::A: {
      std::vector<int> chain(n);
      for (int i = 0; i < n; ++i) chain[i] = i;
      reduce_chain(w, chain);
      return;
    }
    case Family::D: {
      std::vector<int> chain(n - 2);
      for (int i = 0; i < n - 2; ++i) chain[i] = i;
      reduce_D(w, chain, n - 2, n - 1);
      return;
    }
    case Family::E:
      if (n == 6) {
        reduce_chain(w, {0, 1, 2, 4, 5});
        IntVec xi = w.divisor({{0, 1}, {1, 2}, {2, 3}, {3, 2}, {4, 2}, {5, 1}});
        w.add(xi, w.s[3]);
        if (w.s[1] == 1) {
          w.add(w.divisor({{0, 1}, {1, 2}, {2, 2}, {3, 1}, {4, 1}}));
        } else if (w.s[4] == 1) {
          w.add(w.divisor({{1, 1}, {2, 2}, {3, 1}, {4, 2}, {5, 1}}));
        } else if (w.s[2] == 1) {
          // The printed divisor for this step does not satisfy the required
          // intersection pattern; (1,2,3,1,2,1) + xi0 does.
          w.add(w.divisor({{0, 1}, {1, 2}, {2, 3}, {3, 1}, {4, 2}, {5, 1}}));
          w.add(xi, w.s[3]);
        }
        return;
      }
      if (n == 7) {
        reduce_E7_on(w, {0, 1, 2, 3, 4, 5, 6});
        return;
      }
      // E_8: treat the E_7 on E_2..E_8, clear s_1 with xi0, finish E_2.
      reduce_E7_on(w, {1, 2, 3, 4, 5, 6, 7});
      IntVec xi = w.divisor({{0, 2}, {1, 3}, {2, 4}, {3, 5}, {4, 6}, {5, 3}, {6, 4}, {7, 2}});
      w.add(xi, w.s[0]);
      if (w.s[1] == 1)
        w.add(w.divisor({{0, 3}, {1, 6}, {2, 8}, {3, 10}, {4, 12}, {5, 6}, {6, 8}, {7, 4}}));
      return;
  }
}

bool residual_shape_ok(const DynkinType& t, const IntVec& r) {
  auto adm = lattice::admissible_indices(t);
  int ones = 0;
  for (int i = 0; i < t.rank; ++i) {
    if (r[i] == 0) continue;
    if (r[i] != 1) return false;
    ones++;
    if (!adm.count(i + 1)) return false;
  }
  return ones <= 1;
}

// g = -M^{-1}(s - target) by exact rational elimination; nullopt when the
// solution is non-integral or has a negative entry.
std::optional<IntVec> solve_shortcut(const IntMat& m, const IntVec& s, const IntVec& target) {
  int n = static_cast<int>(s.size());
  std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = Rat(m[i][j]);
    a[i][n] = Rat(target[i] - s[i]);
  }
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int i = col; i < n; ++i)
      if (a[i][col] != 0) { piv = i; break; }
    if (piv < 0) fail(errc::internal, "singular intersection matrix");
    std::swap(a[col], a[piv]);
    Rat inv = 1 / a[col][col];
    for (int j = col; j <= n; ++j) a[col][j] *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      Rat f = a[i][col];
      for (int j = col; j <= n; ++j) a[i][j] -= f * a[col][j];
    }
  }
  IntVec g(n);
  for (int i = 0; i < n; ++i) {
    if (a[i][n].get_den() != 1) return std::nullopt;
    Int num = a[i][n].get_num();
    if (num < 0) return std::nullopt;
    if (!num.fits_slong_p()) return std::nullopt;
    g[i] = num.get_si();
  }
  return g;
}

}  // namespace

ReductionResult reduce_to_admissible(const DynkinType& t, const IntersectionVector& s) {
  if (static_cast<int>(s.s.size()) != t.rank) fail(errc::domain, "vector length mismatch");
  for (auto v : s.s)
    if (v < 0) fail(errc::domain, "reduce_to_admissible requires s >= 0");

  Work w(t, s.s);
  run_case_analysis(t, w);
  if (!residual_shape_ok(t, w.s)) fail(errc::internal, "case analysis left a bad residual");

  ReductionResult result{ExcDivisor{w.g}, IntersectionVector{w.s}};

  // Linear-solve shortcut, accepted only when effective and integral, and
  // cross-checked against the case analysis (same target, so same g).
  auto cg = class_group(t);
  ClassElement cls = cg.project(s.s);
  IntVec target(t.rank, 0);
  if (!cls.is_identity()) {
    bool found = false;
    for (int i : lattice::admissible_indices(t)) {
      if (lattice::ej_class(t, i) == cls) {
        target[i - 1] = 1;
        found = true;
        break;
      }
    }
    if (!found) fail(errc::internal, "class has no admissible representative");
  }
  auto m = intersection_matrix(t).matrix;
  if (auto g = solve_shortcut(m, s.s, target)) {
    if (*g != result.g.coeffs || target != result.residual.s)
      fail(errc::internal, "shortcut disagrees with case analysis");
    return ReductionResult{ExcDivisor{*g}, IntersectionVector{target}};
  }
  return result;
}

std::optional<ReductionResult> brute_force_reduce(const DynkinType& t,
                                                  const IntersectionVector& s,
                                                  std::int64_t coeff_bound) {
  if (static_cast<int>(s.s.size()) != t.rank) fail(errc::domain, "vector length mismatch");
  for (auto v : s.s)
    if (v < 0) fail(errc::domain, "brute_force_reduce requires s >= 0");
  if (coeff_bound < 0) fail(errc::domain, "coeff_bound must be >= 0");

  const auto m = intersection_matrix(t).matrix;
  const int n = t.rank;
  const auto adm = lattice::admissible_indices(t);

  // Row i is decided once all variables in its support are assigned; the
  // search assigns g[0], g[1], ... in order, trying small values first, so
  // the first full assignment found is the lexicographically least.
  std::vector<int> maxvar(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (m[i][j] != 0) maxvar[i] = std::max(maxvar[i], j);

  IntVec g(n, 0);
  IntVec residual(n, 0);
  int ones = 0;

  std::optional<ReductionResult> found;

  auto row_value = [&](int i, int upto) {
    std::int64_t acc = s.s[i];
    for (int j = 0; j <= upto; ++j) acc += m[i][j] * g[j];
    return acc;
  };

  auto dfs = [&](auto&& self, int k) -> bool {
    if (k == n) {
      found = ReductionResult{ExcDivisor{g}, IntersectionVector{residual}};
      return true;
    }
    // Candidate values for g[k] from every row that closes at variable k.
    std::vector<std::int64_t> cands;
    bool constrained = false;
    for (int i = 0; i < n; ++i) {
      if (maxvar[i] != k || m[i][k] == 0) continue;
      std::int64_t rest = s.s[i];
      for (int j = 0; j < k; ++j) rest += m[i][j] * g[j];
      std::vector<std::int64_t> mine;
      for (std::int64_t r = 0; r <= 1; ++r) {
        std::int64_t num = r - rest;
        if (num % m[i][k] != 0) continue;
        std::int64_t val = num / m[i][k];
        if (val >= 0 && val <= coeff_bound) mine.push_back(val);
      }
      std::sort(mine.begin(), mine.end());
      if (!constrained) {
        cands = mine;
        constrained = true;
      } else {
        std::vector<std::int64_t> merged;
        std::set_intersection(cands.begin(), cands.end(), mine.begin(), mine.end(),
                              std::back_inserter(merged));
        cands = merged;
      }
      if (constrained && cands.empty()) return false;
    }
    if (!constrained) {
      cands.resize(static_cast<size_t>(coeff_bound) + 1);
      std::iota(cands.begin(), cands.end(), 0);
    }
    for (std::int64_t val : cands) {
      g[k] = val;
      bool ok = true;
      int added_ones = 0;
      std::vector<int> closed;
      for (int i = 0; i < n; ++i) {
        if (maxvar[i] != k) continue;
        std::int64_t r = row_value(i, k);
        if (r != 0 && r != 1) { ok = false; break; }
        if (r == 1) {
          if (!adm.count(i + 1) || ones + added_ones >= 1) { ok = false; break; }
          added_ones++;
        }
        residual[i] = r;
        closed.push_back(i);
      }
      if (ok) {
        ones += added_ones;
        if (self(self, k + 1)) return true;
        ones -= added_ones;
      }
      for (int i : closed) residual[i] = 0;
    }
    g[k] = 0;
    return false;
  };
  dfs(dfs, 0);
  return found;
}

bool verify_reduction(const DynkinType& t, const IntersectionVector& s, const ReductionResult& r) {
  if (static_cast<int>(s.s.size()) != t.rank) return false;
  if (static_cast<int>(r.g.coeffs.size()) != t.rank) return false;
  if (static_cast<int>(r.residual.s.size()) != t.rank) return false;
  if (!r.g.effective()) return false;
  const auto m = intersection_matrix(t).matrix;
  for (int i = 0; i < t.rank; ++i) {
    std::int64_t acc = s.s[i];
    for (int j = 0; j < t.rank; ++j) acc += m[i][j] * r.g.coeffs[j];
    if (acc != r.residual.s[i]) return false;
  }
  if (!residual_shape_ok(t, r.residual.s)) return false;
  return class_of(t, s) == class_of(t, r.residual);
}

}  // namespace duval::reduce
