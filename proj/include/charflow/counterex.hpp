#ifndef CHARFLOW_COUNTEREX_HPP_
#define CHARFLOW_COUNTEREX_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "charflow/flux.hpp"
#include "charflow/fronttrack.hpp"
#include "charflow/piecewise.hpp"

namespace charflow {

/// Level-n refinement of [0, 2]: each component of the previous level loses
/// its open middle interval of length 3^-n.  Endpoints are exact integers at
/// scale 6^n.
struct CantorSet {
  int level = 0;
  std::int64_t den = 1;                                  // 6^level
  std::vector<std::array<std::int64_t, 2>> components;  // closed, sorted, disjoint

  std::vector<std::array<double, 2>> intervals() const;
  double measure() const;
  /// Indicator datum height * chi_C as a piecewise-constant function.
  PiecewiseConstant indicator(double height = 1.0) const;
};

CantorSet cantor(int n);

/// Smooth transition profile on [-1, 1]: g' proportional to a bump with all
/// derivatives vanishing at the ends, normalized so g(-1) = 0, g(1) = 1 and
/// g'(0) = 1 exactly.  beta is fixed by bisection on the normalization.
struct BumpProfile {
  double beta = 0.0;
  double gp(double s) const;  // derivative
  double g(double s) const;
};

BumpProfile build_bump_g();

/// One bump flux: zero up to L-a, a smooth rise of height pow(a, n) over
/// [L-a, L+a], a flat top until 2L, a mirrored fall over [2L, 2L+2a].
SmoothFlux bump_flux(double a, double L, int n, std::shared_ptr<const BumpProfile> prof = nullptr,
                     double domain_lo = 0.0, double domain_hi = -1.0);

struct BumpParams {
  std::vector<double> a;
  std::vector<double> L;
};

/// Superposition of bump fluxes with disjoint supports; validates the
/// separation constraints (3 a_n <= L_n, 4 L_{n+1} <= L_n, and the
/// scale-separation inequality between consecutive blocks).
SmoothFlux assemble_flux(const BumpParams& params, std::shared_ptr<const BumpProfile> prof = nullptr);

/// Measured quantities of one block run.
struct BlockRun {
  int n = 0;
  double a = 0.0;
  double L = 0.0;
  double d = 0.0;           // speed of the fastest wave of the left fan
  double t1 = 0.0;          // death time of the trailing constant-speed shock
  double tv_integral = 0.0; // integral over t in [1,2] of sum |f'(u+) - f'(u-)|
  double theoretical_bound = 0.0;
  std::size_t event_count = 0;
  FTSolution solution;
};

/// Runs the single-block scenario u0 = 2L chi_[0, d] at grid exponent k.
/// Requires 2^-k <= a/16.
BlockRun run_block(int n, int k, double a, double L, double run_horizon = 6.0);

/// Term-wise evaluation of the two scale series for total-variation growth:
/// sum N_n a_n^n / L_n (bounded) and
/// sum N_n a_n^n / (L_n + a_n) * log((L_n - 2 a_n) / (2 a_n)) (unbounded),
/// with N_n = floor(L_n / (n^2 a_n^n)).  Sequences: L_n = 3 * 4^-n,
/// a_n = 3 * 4^-2n; evaluated in ratio form with the floor correction
/// bracketed, so partial sums come with rigorous lower bounds.
struct SeriesPartialSums {
  std::vector<double> convergent;      // partial sums of the first series
  std::vector<double> divergent_low;   // lower bounds of the second
  std::vector<double> divergent_high;  // upper bounds
};

SeriesPartialSums evaluate_tv_series(int terms);

}  // namespace charflow

#endif  // CHARFLOW_COUNTEREX_HPP_
