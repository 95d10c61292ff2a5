#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "duval/error.hpp"
#include "duval/scalar.hpp"

namespace duval::lattice {

inline constexpr int kMaxRank = 64;

enum class Family { A, D, E };

// An ADE diagram symbol. Rank constraints are enforced at construction:
// A_n (n >= 1), D_n (n >= 4), E_6/E_7/E_8; n is capped at kMaxRank.
struct DynkinType {
  Family family;
  int rank;

  DynkinType(Family f, int n);

  std::string name() const;
  static DynkinType parse(const std::string& s);  // "A3", "D6", "E8"

  friend bool operator==(const DynkinType& a, const DynkinType& b) {
    return a.family == b.family && a.rank == b.rank;
  }
  friend bool operator!=(const DynkinType& a, const DynkinType& b) { return !(a == b); }
};

using IntVec = std::vector<std::int64_t>;
using IntMat = std::vector<IntVec>;

// Intersection matrix (E_i . E_j) under the paper's numbering:
//   A_n: chain E_1-...-E_n
//   D_n: chain E_1-...-E_{n-2}, with E_{n-1} and E_n attached to E_{n-2}
//   E_n: chain E_1-...-E_{n-3}-E_{n-1}-E_n, with E_{n-2} attached to E_{n-3}
struct IntersectionLattice {
  DynkinType dynkin;
  IntMat matrix;  // symmetric, -2 diagonal, 0/1 off-diagonal, negative definite
};

IntersectionLattice intersection_matrix(const DynkinType& t);

// An exceptional divisor sum a_i E_i.
struct ExcDivisor {
  IntVec coeffs;
  bool effective() const {
    for (auto c : coeffs)
      if (c < 0) return false;
    return true;
  }
};

// s_i = D . E_i for an external divisor D.
struct IntersectionVector {
  IntVec s;
};

// Residue tuple of a divisor class, componentwise in [0, d_j).
struct ClassElement {
  IntVec residues;

  bool is_identity() const {
    for (auto r : residues)
      if (r != 0) return false;
    return true;
  }
  friend bool operator==(const ClassElement& a, const ClassElement& b) {
    return a.residues == b.residues;
  }
  friend bool operator!=(const ClassElement& a, const ClassElement& b) { return !(a == b); }
};

// Cokernel of the intersection matrix. `projection` maps a length-rank
// integer vector to its residue tuple modulo invariant_factors; its rows are
// the rows of the recorded unimodular row transform belonging to factors > 1,
// so projection(matrix * v) = 0 for every v and the image has index
// prod(invariant_factors) = |det matrix|.
struct ClassGroup {
  DynkinType dynkin;
  std::vector<Int> invariant_factors;      // d_1 | d_2 | ..., each >= 2
  std::vector<std::vector<Int>> projection;  // one row per invariant factor

  ClassElement project(const IntVec& v) const;
  ClassElement identity() const;
  ClassElement add(const ClassElement& a, const ClassElement& b) const;
  ClassElement negate(const ClassElement& a) const;
  Int order(const ClassElement& a) const;
};

ClassGroup class_group(const DynkinType& t);

ClassElement class_of(const DynkinType& t, const IntersectionVector& s);

// Least nonzero effective divisor with xi0 . E_i <= 0 for all i, by Laufer's
// iteration. The result is independent of the starting curve and of the order
// in which offending curves are added.
ExcDivisor fundamental_cycle(const DynkinType& t);

// Laufer iteration with explicit choices, used by the invariance tests.
// `order_seed` permutes the scan order of candidate curves deterministically.
ExcDivisor fundamental_cycle_from(const DynkinType& t, int start_index, std::uint64_t order_seed);

// Indices i with fundamental-cycle coefficient a_i = 1.
std::set<int> admissible_indices(const DynkinType& t);

// mult_p of the image of a divisor with intersection profile s: sum a_i s_i.
// Requires s >= 0 componentwise.
Int multiplicity(const DynkinType& t, const IntersectionVector& s);

// class_of(unit vector at j), 1-based.
ClassElement ej_class(const DynkinType& t, int j);

// Smith normal form over Z with recorded unimodular transforms:
// U * A * V = D, D diagonal with d_1 | d_2 | ... (nonnegative).
struct SmithResult {
  std::vector<std::vector<Int>> u, v, d;
};
SmithResult smith_normal_form(const IntMat& a);

Int abs_det(const IntMat& a);

}  // namespace duval::lattice
