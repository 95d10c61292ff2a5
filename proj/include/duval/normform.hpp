#pragma once

#include <optional>
#include <vector>

#include "duval/lattice.hpp"
#include "duval/series.hpp"

namespace duval::normform {

using series::CoordChange;
using series::TruncSeries;

// One step of the y^a z + z^s - b y^k iteration: before the step the series
// identity f = Y^a Z + Z^s - b Y^k holds; the step replaces Z by
// Z - b Y^{k-a}, extracts the a-th root w of the unit v that restores the
// shape, rescales Y by w, and continues with k' = s(k-a).
struct DnenStep {
  int k;
  TruncSeries b;
  TruncSeries v;
  TruncSeries w;
};

struct DnenResult {
  CoordChange forward;   // (Y, Z) as series in (y, z)
  CoordChange inverse;   // truncated inverse change
  std::vector<DnenStep> steps;
  bool weighted_sweep_used = false;  // t = 2a-1 path; the k-chain is empty
};

// Normal form for y^a z + z^s - b y^t (s > a > 1, t > a+1, b a unit):
// produces (Y, Z) with f = Y^a Z + Z^s modulo degree > N and y = Y, z = Z
// mod m^2. The proof's iteration runs verbatim for t >= 2a; t = 2a-1 uses a
// weighted-degree sweep; a+2 <= t <= 2a-2 hits a genuine modulus and errors.
// The result is verified by explicit substitution before returning.
DnenResult dnen_normalize(int a, int s, int t, const TruncSeries& b);

struct SplittingResult {
  CoordChange change;      // substitution: compose(f, change) = squares + residual
  TruncSeries residual;    // series in the non-square variables, in m^3
  int quadratic_rank = 0;
};

// Morse splitting: coordinates in which f = (sum of quadratic_rank squares)
// + residual. Requires f in m^2 with nonzero quadratic part; unit square
// roots come from nth_root_of_unit and scalar roots must exist in Q(i).
SplittingResult splitting_lemma(const TruncSeries& f);

// Rank/residual data sufficient for classification, computed without root
// extraction (critical-point elimination instead of explicit squares).
struct SplitData {
  int rank = 0;
  std::vector<int> kept_vars;   // indices (into f.vars()) of non-square coords
  TruncSeries residual;         // order >= 3, supported on kept_vars
};
SplitData split_for_classification(const TruncSeries& f);

// ADE recognition. Decides by quadratic rank, then the residual:
// rank 3 -> A_1; rank 2 -> A_k from the 1-variable residual order; rank 1 ->
// D/E from the cubic's projective root pattern. Errors with "unclassified"
// when the germ is not recognizably ADE within precision/max_index.
lattice::DynkinType ade_classify(const TruncSeries& f, int max_index);

}  // namespace duval::normform
