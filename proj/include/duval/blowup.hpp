#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "duval/lattice.hpp"
#include "duval/normform.hpp"
#include "duval/poly.hpp"

namespace duval::blowup {

using poly::Polynomial;

// Blow-up patch under the usual convention: chart Z substitutes
// (x, y, z) -> (X z, Y z, z), and cyclically for X and Y.
enum class Chart { X, Y, Z };

char chart_name(Chart c);
Chart chart_parse(const std::string& s);

// A polynomial hypersurface germ in (x, y, z) with f(0) = 0.
struct SurfaceGerm {
  Polynomial f;
  std::optional<lattice::DynkinType> detected_type;
};

SurfaceGerm make_surface(Polynomial f);

// A parametrized smooth curve through the origin: t -> (p1, p2, p3),
// p(0) = 0, p'(0) != 0.
struct CurveParam {
  std::array<Polynomial, 3> p;
};

CurveParam make_curve(Polynomial p1, Polynomial p2, Polynomial p3);

// True iff the curve lies on the surface: f(p1, p2, p3) = 0 identically.
bool curve_on_surface(const SurfaceGerm& s, const CurveParam& c);

// Strict transform f(substitution) / (chart variable)^m, m the multiplicity
// at the origin. Errors if the germ is smooth (m < 2); inexact division is an
// internal bug guard.
SurfaceGerm blow_up_surface(const SurfaceGerm& s, Chart chart);

// Strict transform of a parametrized curve. The chart coordinate must have
// the minimal vanishing order among the three components, and after the
// scalar reparametrization making it exactly t all divisions must stay
// polynomial.
CurveParam blow_up_curve(const CurveParam& c, Chart chart);

struct SingularPoint {
  std::array<Scalar, 2> at;  // coordinates of the two non-chart variables
  std::string type;          // "A3", ..., or "unclassified"
};

// Singular points of the strict transform on the exceptional line of the
// chart, each classified after translation to the origin.
std::vector<SingularPoint> singular_points_on_exceptional(const SurfaceGerm& s, Chart chart,
                                                          int max_index);

struct TraceStep {
  Chart chart;
  std::string strict_transform;  // canonical printed equation
  std::array<Scalar, 2> point;   // where the curve meets the exceptional line
  std::string detected;          // singularity type there, or "smooth"
};

struct ResolutionTrace {
  std::vector<TraceStep> steps;
  std::string verdict;
};

// Result of tracking a curve class: one admissible index, or a conjugate
// pair when the two contacts are interchangeable.
struct TrackOutcome {
  lattice::DynkinType type;
  std::vector<int> indices;                      // size 1 or 2
  std::vector<lattice::ClassElement> classes;    // parallel to indices
  Int class_order;
  ResolutionTrace trace;
};

// Recursively blows up at the singular point the strict transform passes
// through, recording the trace, and resolves the Dynkin-index bookkeeping by
// the per-family rules. max_index bounds the recognizable singularity index.
TrackOutcome track_class(const SurfaceGerm& s, const CurveParam& c, int max_index = 24);

}  // namespace duval::blowup
