#ifndef CHARFLOW_RIEMANN_HPP_
#define CHARFLOW_RIEMANN_HPP_

#include <stdexcept>
#include <vector>

#include "charflow/flux.hpp"

namespace charflow {

struct Wave {
  double speed;
  double u_before;  // state to the left of the wave
  double u_after;   // state to the right
};

/// The self-similar solution of a Riemann problem: finitely many jumps with
/// strictly increasing speeds, chaining u_left to u_right.
struct WaveFan {
  double u_left = 0.0;
  double u_right = 0.0;
  std::vector<Wave> waves;
};

enum class OffGridPolicy { snap, strict };

/// Builds the fan from the hull segments of the convex envelope (u_left <
/// u_right) or the concave envelope (u_left > u_right).  Equal states give an
/// empty fan.
inline WaveFan solve_riemann(const PLFlux& f, double u_left, double u_right,
                             OffGridPolicy policy = OffGridPolicy::snap) {
  if (policy == OffGridPolicy::snap) {
    u_left = f.on_grid(u_left) ? f.node(f.node_index(u_left)) : f.quantize(u_left);
    u_right = f.on_grid(u_right) ? f.node(f.node_index(u_right)) : f.quantize(u_right);
  } else {
    if (!f.on_grid(u_left) || !f.on_grid(u_right))
      throw std::invalid_argument("solve_riemann: off-grid state");
    u_left = f.node(f.node_index(u_left));
    u_right = f.node(f.node_index(u_right));
  }
  WaveFan fan;
  fan.u_left = u_left;
  fan.u_right = u_right;
  if (u_left == u_right) return fan;
  if (u_left < u_right) {
    Envelope env = envelope(f, u_left, u_right, EnvelopeKind::convex);
    for (std::size_t i = 0; i + 1 < env.breakpoints.size(); ++i)
      fan.waves.push_back({env.slopes[i], env.breakpoints[i], env.breakpoints[i + 1]});
  } else {
    Envelope env = envelope(f, u_right, u_left, EnvelopeKind::concave);
    for (std::size_t i = env.breakpoints.size() - 1; i >= 1; --i)
      fan.waves.push_back({env.slopes[i - 1], env.breakpoints[i], env.breakpoints[i - 1]});
  }
  return fan;
}

/// Left-continuous pseudo-inverse of the envelope derivative, mapping wave
/// speeds in [lambda_min, lambda_max] back to states in [a, b].  Queries at or
/// below lambda_min return a, at or above lambda_max return b; interior flat
/// slopes resolve to the breakpoint below (left continuity).
class PseudoInverse {
 public:
  explicit PseudoInverse(const Envelope& env) {
    if (env.kind != EnvelopeKind::convex)
      throw std::invalid_argument("PseudoInverse: expects a convex envelope");
    a_ = env.a;
    b_ = env.b;
    breakpoints_ = env.breakpoints;
    slopes_ = env.slopes;
  }

  double lambda_min() const { return slopes_.front(); }
  double lambda_max() const { return slopes_.back(); }

  double operator()(double v) const {
    if (v <= lambda_min()) return a_;
    if (v >= lambda_max()) return b_;
    std::size_t n = 0;  // number of slopes strictly below v
    while (n < slopes_.size() && slopes_[n] < v) ++n;
    return breakpoints_[n];
  }

 private:
  double a_, b_;
  std::vector<double> breakpoints_;
  std::vector<double> slopes_;
};

inline PseudoInverse pseudo_inverse_g(const Envelope& env) { return PseudoInverse(env); }

}  // namespace charflow

#endif  // CHARFLOW_RIEMANN_HPP_
