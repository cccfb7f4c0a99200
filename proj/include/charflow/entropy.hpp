#ifndef CHARFLOW_ENTROPY_HPP_
#define CHARFLOW_ENTROPY_HPP_

#include <functional>
#include <string>
#include <vector>

#include "charflow/flux.hpp"
#include "charflow/fronttrack.hpp"

namespace charflow {

/// An entropy with its flux, q' = eta' f'.
struct EntropyPair {
  std::function<double(double)> eta;
  std::function<double(double)> q;
  bool convex = true;
  std::string name;
};

/// eta_k^+(u) = (u-k)^+ with q_k^+(u) = 1{u>=k} (f(u)-f(k)), and the mirrored
/// minus family.
EntropyPair kruzkov_pair(const PLFlux& f, double k, int sign);
EntropyPair kruzkov_pair(const SmoothFlux& f, double k, int sign);

/// q(u) = integral of eta' f' from the left end of the domain; exact for a
/// piecewise-linear flux (cellwise slope times entropy increment).
std::function<double(double)> entropy_flux(const PLFlux& f, std::function<double(double)> eta);

/// Adaptive quadrature route for smooth fluxes; needs the entropy derivative.
std::function<double(double)> entropy_flux(const SmoothFlux& f,
                                           std::function<double(double)> eta_prime,
                                           double quad_tol = 1e-10);

/// Convexity probe: second differences on a sampling grid.
bool is_convex_on(const std::function<double(double)>& eta, double lo, double hi, int samples = 257,
                  double tol = 1e-12);

/// Signed entropy production rate of one front, per unit time.  Admissible
/// fronts have nonpositive rate for every convex pair.
struct DissipationAtom {
  int front_id = -1;
  double rate = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;
};

DissipationAtom front_dissipation(const Front& front, const EntropyPair& pair);

/// The dissipation measure of a run, represented exactly as atoms on the
/// front graph.
std::vector<DissipationAtom> dissipation_measure(const FTSolution& sol, const EntropyPair& pair);

/// Measure of a (t, x) window under the atom representation.
double dissipation_total(const FTSolution& sol, const std::vector<DissipationAtom>& atoms,
                         double t0, double t1, double x0, double x1);

/// Compactly supported product test bump, polynomial on its support:
/// phi(t,x) = amp * B((t-tc)/rt) * B((x-xc)/rx) with B(s) = (1-s^2)^2.
struct TestBump {
  double tc = 0.0, xc = 0.0, rt = 1.0, rx = 1.0, amp = 1.0;

  static double shape(double s);
  static double shape_antideriv(double s);  // of B, clamped outside [-1,1]

  double value(double t, double x) const;
  /// Antiderivative of x -> value(t, x).
  double x_antideriv(double t, double x) const;
};

/// Integral of eta(u) phi_t + q(u) phi_x over the strip plus the atom line
/// integrals; vanishes when the dissipation is exactly the sum of the front
/// atoms.  Exact quadrature over the arrangement of front segments.
double weak_residual(const FTSolution& sol, const EntropyPair& pair, const TestBump& phi);

/// A straight characteristic usable as a cylinder wall.
struct CylinderWall {
  double t_ref = 0.0;
  double x_ref = 0.0;
  double slope = 0.0;
  double value = 0.0;  // state carried along the wall
  double x_at(double t) const { return x_ref + slope * (t - t_ref); }
};

/// Balance residual on the region swept between two straight walls:
/// int eta(t2) - int eta(t1) + (t2-t1)(Q(y2)-Q(y1)) - mu(cylinder).
double cylinder_balance(const FTSolution& sol, const EntropyPair& pair, const CylinderWall& w1,
                        const CylinderWall& w2, double t1, double t2);

/// Exact L1 distance between u(t) and the initial datum on [-L, L].
double initial_trace_error(const FTSolution& sol, double t, double L);

}  // namespace charflow

#endif  // CHARFLOW_ENTROPY_HPP_
