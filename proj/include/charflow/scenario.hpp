#ifndef CHARFLOW_SCENARIO_HPP_
#define CHARFLOW_SCENARIO_HPP_

#include <optional>
#include <string>

#include "charflow/flux.hpp"
#include "charflow/fronttrack.hpp"
#include "charflow/piecewise.hpp"

namespace charflow {

struct ScenarioError : std::runtime_error {
  std::string pointer;
  ScenarioError(std::string ptr, const std::string& msg)
      : std::runtime_error(ptr + ": " + msg), pointer(std::move(ptr)) {}
};

/// A run description: flux, initial datum, grid exponent, horizon, window.
struct Scenario {
  std::string name = "scenario";
  std::string flux_kind;  // burgers | cubic | pl_table | counterexample2
  // counterexample2 parameters
  int block_n = 1;
  double block_a = 0.25;
  double block_L = 0.75;
  // pl_table parameters
  int table_k = 0;
  double table_u_min = 0.0;
  std::vector<double> table_values;

  std::string initial_kind;  // table | indicator | cantor | block
  std::vector<double> init_breakpoints;
  std::vector<double> init_values;
  double indicator_lo = 0.0, indicator_hi = 1.0, indicator_height = 1.0;
  int cantor_level = 2;

  int k = 8;
  double horizon = 2.0;
  double window_lo = -8.0, window_hi = 8.0;
  std::uint64_t seed = 1;

  SmoothFlux smooth_flux() const;
  PLFlux pl_flux() const;
  /// Initial datum quantized onto the flux grid.
  PiecewiseConstant initial(const PLFlux& f) const;

  FTSolution run() const;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& s);

/// The curated verification suite: shocks, rarefactions, merges,
/// cancellations, non-convex and bump fluxes, contact tables, random data.
std::vector<Scenario> builtin_suite();

}  // namespace charflow

#endif  // CHARFLOW_SCENARIO_HPP_
