#pragma once

#include <optional>

#include "duval/lattice.hpp"

namespace duval::reduce {

using lattice::DynkinType;
using lattice::ExcDivisor;
using lattice::IntersectionVector;
using lattice::IntVec;

// Outcome of reducing a non-negative intersection profile s: an effective
// exceptional divisor g with residual = s + matrix*g equal to the zero vector
// or to a unit vector at an admissible index.
struct ReductionResult {
  ExcDivisor g;
  IntersectionVector residual;
};

// The smooth-representative case analysis (per family), with the linear-solve
// shortcut g = -matrix^{-1}(s - target) accepted only when integral and >= 0
// and cross-checked against the case analysis. Requires s >= 0.
ReductionResult reduce_to_admissible(const DynkinType& t, const IntersectionVector& s);

// Exhaustive oracle: search all effective g with coefficients <= coeff_bound
// for a valid ReductionResult, preferring the lexicographically least g.
// Complete (pruning never discards a feasible assignment) and deterministic.
std::optional<ReductionResult> brute_force_reduce(const DynkinType& t,
                                                  const IntersectionVector& s,
                                                  std::int64_t coeff_bound);

// True iff every ReductionResult invariant holds and the residual class
// equals class_of(s).
bool verify_reduction(const DynkinType& t, const IntersectionVector& s, const ReductionResult& r);

}  // namespace duval::reduce
