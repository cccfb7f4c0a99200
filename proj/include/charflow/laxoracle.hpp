#ifndef CHARFLOW_LAXORACLE_HPP_
#define CHARFLOW_LAXORACLE_HPP_

#include <array>
#include <utility>
#include <vector>

#include "charflow/piecewise.hpp"

namespace charflow {

/// Piecewise-linear primitive U0(x) = integral of u0 up to x, anchored at the
/// first breakpoint.  Tail pieces extend with the tail slopes of u0.
struct PotentialDatum {
  std::vector<double> xs;      // breakpoints of u0
  std::vector<double> U;       // U0 at the breakpoints, U[0] = 0
  std::vector<double> slopes;  // u0 value per piece, slopes.size() == xs.size() + 1

  explicit PotentialDatum(const PiecewiseConstant& u0);
  double eval(double y) const;
};

struct LaxValue {
  double U = 0.0;
  std::vector<double> minimizers;  // ascending
};

/// U(t,x) = min_y { U0(y) + |x-y|^2 / (2t) } for the quadratic flux, with the
/// exact minimizer set over breakpoints and per-piece stationary points.
LaxValue lax_value(const PotentialDatum& U0, double t, double x);

/// Entropy solution sample u(t,x) = (x - y*)/t with the leftmost minimizer.
double lax_u(const PotentialDatum& U0, double t, double x);
std::vector<double> lax_sample_u(const PotentialDatum& U0, double t,
                                 const std::vector<double>& grid);

/// max over theta of theta^-2 * |[y, y+theta] \ C| for a finite union of
/// disjoint closed intervals C; exact interval arithmetic.
double square_density_criterion(const std::vector<std::array<double, 2>>& C, double y,
                                const std::vector<double>& thetas);

}  // namespace charflow

#endif  // CHARFLOW_LAXORACLE_HPP_
