#ifndef CHARFLOW_FRONTTRACK_HPP_
#define CHARFLOW_FRONTTRACK_HPP_

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "charflow/flux.hpp"
#include "charflow/piecewise.hpp"
#include "charflow/riemann.hpp"

namespace charflow {

/// One discontinuity line segment.  Positions are always derived from the
/// creation point and the speed, never integrated incrementally.
struct Front {
  int id = -1;
  double t_birth = 0.0;
  double x_birth = 0.0;
  double t_death = std::numeric_limits<double>::infinity();
  double x_death = std::numeric_limits<double>::quiet_NaN();
  double u_left = 0.0;
  double u_right = 0.0;
  double speed = 0.0;
  int birth_event = -1;  // -1 when born from the initial datum
  int death_event = -1;

  double x_at(double t) const { return x_birth + speed * (t - t_birth); }
  bool alive_at(double t) const { return t_birth <= t && t < t_death; }
};

/// A binary (or merged multi-front) interaction.
struct Interaction {
  int id = -1;
  double t = 0.0;
  double x = 0.0;
  std::vector<int> incoming;  // left-to-right
  std::vector<int> outgoing;  // fan order
  double outer_left = 0.0;
  double outer_right = 0.0;
  // Closed value intervals removed from the solution at this point.
  std::vector<std::array<double, 2>> cancelled;
};

struct FTState;

/// The complete front graph of a run.
struct FTSolution {
  PLFlux flux;
  PiecewiseConstant initial;
  double horizon = 0.0;
  double left_state = 0.0;
  std::vector<Front> fronts;
  std::vector<Interaction> events;

  /// u(t, .) with the t+ convention: fronts born exactly at t are included,
  /// fronts dying exactly at t are not.
  PiecewiseConstant sample(double t) const;

  double total_variation(double t) const { return sample(t).total_variation(); }

  /// Integral of u - left tail state over a window containing every front.
  double conserved_integral(double t) const;
};

struct InternalSolverError : std::runtime_error {
  explicit InternalSolverError(const std::string& msg, std::string dump = {})
      : std::runtime_error(msg), diagnostic(std::move(dump)) {}
  std::string diagnostic;
};

/// Live evolution state: x-sorted live fronts plus the collision queue.
struct FTState {
  PLFlux flux;
  PiecewiseConstant initial;
  double time = 0.0;
  double left_state = 0.0;
  std::vector<Front> fronts;        // all fronts ever created
  std::vector<Interaction> events;  // so far
  std::vector<int> prev_of;         // linked list over live front ids
  std::vector<int> next_of;
  int head = -1;  // leftmost live front
  struct Cand {
    double t;
    int left, right;
    bool operator<(const Cand& o) const { return t > o.t; }  // min-heap via priority_queue
  };
  std::vector<Cand> heap;
};

/// Replaces every jump of the (grid-valued) initial datum by its wave fan.
FTState ft_init(const PLFlux& flux, const PiecewiseConstant& u0);

/// Processes all collisions up to time T.
FTSolution ft_evolve(FTState state, double T);

/// Convenience wrapper: init + evolve.
FTSolution ft_run(const PLFlux& flux, const PiecewiseConstant& u0, double T);

/// Exact L1 distance between two solutions at time t (tails must agree).
double ft_l1_distance(const FTSolution& a, const FTSolution& b, double t);

}  // namespace charflow

#endif  // CHARFLOW_FRONTTRACK_HPP_
