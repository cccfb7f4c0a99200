#ifndef CHARFLOW_CHANNEL_HPP_
#define CHARFLOW_CHANNEL_HPP_

#include <utility>
#include <vector>

#include "charflow/flux.hpp"
#include "charflow/riemann.hpp"

namespace charflow {

/// A polyline x(t) on [0, T] with strictly increasing vertex times.
struct Polyline {
  std::vector<double> ts;
  std::vector<double> xs;

  double t_end() const { return ts.back(); }
  double eval(double t) const;
  double lipschitz() const;
};

/// Riemann problem between two Lipschitz boundaries issuing from a common
/// apex, carrying constant states a (left boundary) and b (right boundary).
struct ChannelProblem {
  Polyline gamma1;  // lower boundary
  Polyline gamma2;  // upper boundary
  double a = 0.0;
  double b = 0.0;
  PLFlux flux;

  void validate() const;
};

enum class ChannelRegion { lower, middle, upper };

/// Resolves queries by taut-path length minimization in the polygonal
/// channel: minimizers are straight away from the boundaries, so only
/// boundary vertices matter and a funnel sweep is exact.
class ChannelSolution {
 public:
  explicit ChannelSolution(ChannelProblem p);

  /// Terminal slope of the shortest admissible path ending at (t, x).
  double v(double t, double x) const;
  /// State assembled from the envelope pseudo-inverse of v.
  double u(double t, double x) const;

  double lambda_min() const { return lam_min_; }
  double lambda_max() const { return lam_max_; }
  const ChannelProblem& problem() const { return prob_; }

  /// Left and right edges of the strictly monotone region at time t,
  /// located by bisection on u; exact to tol in x.
  std::pair<double, double> gamma_pm(double t, double tol = 1e-12) const;
  ChannelRegion region(double t, double x) const;

 private:
  bool mirrored_ = false;  // set when a > b; queries reflect x -> -x
  ChannelProblem prob_;    // the problem actually solved (mirrored if needed)
  Envelope env_;
  PseudoInverse g_;
  double lam_min_ = 0.0, lam_max_ = 0.0;
  bool degenerate_ = false;  // a == b

  double v_inner(double t, double x) const;
};

}  // namespace charflow

#endif  // CHARFLOW_CHANNEL_HPP_
