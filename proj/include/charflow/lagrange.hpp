#ifndef CHARFLOW_LAGRANGE_HPP_
#define CHARFLOW_LAGRANGE_HPP_

#include <functional>
#include <string>
#include <vector>

#include "charflow/entropy.hpp"
#include "charflow/fronttrack.hpp"

namespace charflow {

/// One boundary curve: a polyline on [0, horizon] with a carried value w and
/// the terminal time up to which (gamma, w) stays an admissible boundary.
struct BoundaryCurve {
  std::vector<double> ts;
  std::vector<double> xs;
  struct Stretch {
    double t0, t1;
    int front_id;  // -1 for a straight characteristic stretch
    double value;  // tracking value (straight stretches: the cell state)
  };
  std::vector<Stretch> stretches;
  double w = 0.0;             // reported boundary value
  double terminal = 0.0;      // T(gamma, w)
  bool from_jump = false;     // seeded from an initial jump
  int geom = -1;              // geometry class id
  double straight_until = 0;  // sup{t: affine and untouched by other curves on [0,t]}

  double eval(double t) const;
  double slope_at(double t) const;
};

enum class Region { A1, A2, B, C, unresolved };

struct RegionLabel {
  Region region = Region::unresolved;
  bool jump = false;
};

/// The complete family of boundaries extracted from a front-tracking run:
/// totally ordered curves threading the front graph (sampled off-grid values
/// per jump) plus straight characteristics seeded in the constant cells.
struct BoundaryFamily {
  FTSolution sol;
  std::vector<BoundaryCurve> curves;  // sorted by the total order
  std::vector<double> between;        // region values, size curves.size() + 1
  double ref_eps = 0.0;               // label time for the y parameterization
  std::vector<LDComponent> ld;

  double X(double t, std::size_t i) const { return curves[i].eval(t); }
  double y_label(std::size_t i) const { return curves[i].eval(ref_eps); }

  RegionLabel classify(double t, double x) const;

  /// | LHS - RHS | of the transport representation at time t for a compactly
  /// supported C1 test function given with its pointwise values.
  double representation_residual(double t, const std::function<double(double)>& phi) const;

  /// Sum over segments of |segment slope - characteristic speed read off the
  /// front graph| weighted by duration, for curve i restricted to [t1, t2].
  double characteristic_residual(std::size_t i, double t1, double t2) const;

  /// Largest violation of the boundary-entropy flux inequalities along curve
  /// i on [0, min(T, terminal)], sweeping the Kruzkov family over grid values
  /// and cell midpoints.
  double admissibility_violation(std::size_t i, double T) const;
};

BoundaryFamily build_family(const FTSolution& sol, int w_resolution = 1, int chars_per_cell = 2);

/// A straight untouched segment usable for cylinder estimates.
struct CSegment {
  std::size_t curve = 0;
  double y = 0.0;       // position at the reference time eps
  double lambda = 0.0;  // slope
  double value = 0.0;   // carried value
  double F = 0.0;       // f(value) - lambda * value
};

/// Curves straight and untouched on [0, T], parameterized by position at eps.
/// Their slopes obey the non-crossing bound |dlambda| <= |dy| / eps.
std::vector<CSegment> cylinder_extract(const BoundaryFamily& fam, double T, double eps);

/// q(value) - lambda * eta(value) along a segment.
double segment_Q(const CSegment& s, const EntropyPair& pair);

}  // namespace charflow

#endif  // CHARFLOW_LAGRANGE_HPP_
