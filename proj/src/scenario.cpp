#include "charflow/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "charflow/counterex.hpp"

namespace charflow {

using nlohmann::json;

SmoothFlux Scenario::smooth_flux() const {
  if (flux_kind == "burgers") return burgers_flux(-8.0, 8.0);
  if (flux_kind == "cubic") return cubic_flux(-4.0, 4.0);
  if (flux_kind == "counterexample2") return bump_flux(block_a, block_L, block_n);
  throw ScenarioError("/flux/kind", "no smooth form for '" + flux_kind + "'");
}

PLFlux Scenario::pl_flux() const {
  double h = std::ldexp(1.0, -k);
  auto align = [h](double u, bool up) {
    double s = u / h;
    return (up ? std::ceil(s) : std::floor(s)) * h;
  };
  if (flux_kind == "pl_table") return PLFlux(table_k, table_u_min, table_values);

  // range: hull of the initial values with one unit of margin
  double lo = 0.0, hi = 0.0;
  if (initial_kind == "indicator") {
    lo = std::min(0.0, indicator_height);
    hi = std::max(0.0, indicator_height);
  } else if (initial_kind == "cantor") {
    lo = std::min(0.0, indicator_height);
    hi = std::max(0.0, indicator_height);
  } else if (initial_kind == "block") {
    lo = 0.0;
    hi = 2.0 * block_L + 2.0 * block_a;
  } else {
    for (double v : init_values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  double margin = (flux_kind == "counterexample2") ? 0.0 : 0.5;
  lo = align(lo - margin, false);
  hi = align(hi + margin, true);
  if (flux_kind == "counterexample2") {
    lo = 0.0;
    hi = align(2.0 * block_L + 2.0 * block_a, true);
  }
  return build_pl_flux(smooth_flux(), k, lo, hi);
}

PiecewiseConstant Scenario::initial(const PLFlux& f) const {
  PiecewiseConstant raw;
  if (initial_kind == "table") {
    raw = PiecewiseConstant(init_breakpoints, init_values);
  } else if (initial_kind == "indicator") {
    raw = PiecewiseConstant({indicator_lo, indicator_hi}, {0.0, indicator_height, 0.0});
  } else if (initial_kind == "cantor") {
    raw = cantor(cantor_level).indicator(indicator_height);
  } else if (initial_kind == "block") {
    throw ScenarioError("/initial/kind", "block data require run_block");
  } else {
    throw ScenarioError("/initial/kind", "unknown kind '" + initial_kind + "'");
  }
  for (double& v : raw.vals) v = f.quantize(v);
  return raw.simplified();
}

FTSolution Scenario::run() const {
  if (initial_kind == "block") {
    BlockRun br = run_block(block_n, k, block_a, block_L, horizon);
    return std::move(br.solution);
  }
  PLFlux f = pl_flux();
  return ft_run(f, initial(f), horizon);
}

namespace {

template <typename T>
T field(const json& j, const std::string& ptr, const std::string& key, std::optional<T> dflt = {}) {
  if (!j.contains(key)) {
    if (dflt) return *dflt;
    throw ScenarioError(ptr + "/" + key, "missing required field");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ScenarioError(ptr + "/" + key, e.what());
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ScenarioError("/", std::string("invalid JSON: ") + e.what());
  }
  Scenario s;
  s.name = field<std::string>(j, "", "name", std::optional<std::string>("scenario"));
  if (!j.contains("flux") || !j["flux"].is_object())
    throw ScenarioError("/flux", "missing flux object");
  const json& jf = j["flux"];
  s.flux_kind = field<std::string>(jf, "/flux", "kind");
  if (s.flux_kind == "counterexample2") {
    s.block_n = field<int>(jf, "/flux", "n", std::optional<int>(1));
    s.block_a = field<double>(jf, "/flux", "a", std::optional<double>(std::pow(4.0, -s.block_n)));
    s.block_L =
        field<double>(jf, "/flux", "L", std::optional<double>(3.0 * std::pow(4.0, -s.block_n)));
  } else if (s.flux_kind == "pl_table") {
    s.table_k = field<int>(jf, "/flux", "k");
    s.table_u_min = field<double>(jf, "/flux", "u_min");
    s.table_values = field<std::vector<double>>(jf, "/flux", "values");
  } else if (s.flux_kind != "burgers" && s.flux_kind != "cubic") {
    throw ScenarioError("/flux/kind", "unknown kind '" + s.flux_kind + "'");
  }

  if (!j.contains("initial") || !j["initial"].is_object())
    throw ScenarioError("/initial", "missing initial object");
  const json& ji = j["initial"];
  s.initial_kind = field<std::string>(ji, "/initial", "kind");
  if (s.initial_kind == "table") {
    s.init_breakpoints = field<std::vector<double>>(ji, "/initial", "breakpoints");
    s.init_values = field<std::vector<double>>(ji, "/initial", "values");
    if (s.init_values.size() != s.init_breakpoints.size() + 1)
      throw ScenarioError("/initial/values", "need one more value than breakpoint");
  } else if (s.initial_kind == "indicator" || s.initial_kind == "cantor") {
    s.indicator_lo = field<double>(ji, "/initial", "lo", std::optional<double>(0.0));
    s.indicator_hi = field<double>(ji, "/initial", "hi", std::optional<double>(1.0));
    s.indicator_height = field<double>(ji, "/initial", "height", std::optional<double>(1.0));
    s.cantor_level = field<int>(ji, "/initial", "level", std::optional<int>(2));
  } else if (s.initial_kind == "block") {
    s.block_n = field<int>(ji, "/initial", "n", std::optional<int>(s.block_n));
  } else {
    throw ScenarioError("/initial/kind", "unknown kind '" + s.initial_kind + "'");
  }

  s.k = field<int>(j, "", "k", std::optional<int>(8));
  if (s.k < 1) throw ScenarioError("/k", "need k >= 1");
  s.horizon = field<double>(j, "", "horizon", std::optional<double>(2.0));
  if (!(s.horizon > 0.0)) throw ScenarioError("/horizon", "need horizon > 0");
  if (j.contains("window")) {
    auto w = field<std::vector<double>>(j, "", "window");
    if (w.size() != 2 || !(w[0] < w[1])) throw ScenarioError("/window", "need [lo, hi]");
    s.window_lo = w[0];
    s.window_hi = w[1];
  }
  s.seed = field<std::uint64_t>(j, "", "seed", std::optional<std::uint64_t>(1));
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("/", "cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["flux"]["kind"] = s.flux_kind;
  if (s.flux_kind == "counterexample2") {
    j["flux"]["n"] = s.block_n;
    j["flux"]["a"] = s.block_a;
    j["flux"]["L"] = s.block_L;
  } else if (s.flux_kind == "pl_table") {
    j["flux"]["k"] = s.table_k;
    j["flux"]["u_min"] = s.table_u_min;
    j["flux"]["values"] = s.table_values;
  }
  j["initial"]["kind"] = s.initial_kind;
  if (s.initial_kind == "table") {
    j["initial"]["breakpoints"] = s.init_breakpoints;
    j["initial"]["values"] = s.init_values;
  } else if (s.initial_kind == "indicator") {
    j["initial"]["lo"] = s.indicator_lo;
    j["initial"]["hi"] = s.indicator_hi;
    j["initial"]["height"] = s.indicator_height;
  } else if (s.initial_kind == "cantor") {
    j["initial"]["level"] = s.cantor_level;
    j["initial"]["height"] = s.indicator_height;
  } else if (s.initial_kind == "block") {
    j["initial"]["n"] = s.block_n;
  }
  j["k"] = s.k;
  j["horizon"] = s.horizon;
  j["window"] = {s.window_lo, s.window_hi};
  j["seed"] = s.seed;
  return j.dump(2);
}

}  // namespace charflow

namespace {

charflow::Scenario table_scenario(const std::string& name, std::vector<double> bps,
                                  std::vector<double> vals, int k, double horizon,
                                  const std::string& flux = "burgers") {
  charflow::Scenario s;
  s.name = name;
  s.flux_kind = flux;
  s.initial_kind = "table";
  s.init_breakpoints = std::move(bps);
  s.init_values = std::move(vals);
  s.k = k;
  s.horizon = horizon;
  return s;
}

}  // namespace

namespace charflow {

std::vector<Scenario> builtin_suite() {
  std::vector<Scenario> suite;
  suite.push_back(table_scenario("box", {0.0, 1.0}, {0.0, 1.0, 0.0}, 8, 2.0));
  suite.push_back(table_scenario("neg_box", {0.0, 1.0}, {0.0, -1.0, 0.0}, 8, 2.0));
  suite.push_back(table_scenario("tall_box", {0.0, 0.75}, {0.0, 1.5, 0.0}, 8, 2.0));
  suite.push_back(
      table_scenario("two_boxes", {0.0, 1.0, 1.5, 2.0}, {0.0, 1.0, 0.0, 0.5, 0.0}, 8, 2.0));
  suite.push_back(
      table_scenario("staircase_merge", {-1.0, 0.0, 1.0}, {0.0, 2.0, 1.0, 0.0}, 8, 2.0));
  suite.push_back(table_scenario("triple_merge", {-1.0, 0.0, 0.5, 1.0},
                                 {0.0, 1.5, 1.0, 0.5, 0.0}, 8, 2.0));
  suite.push_back(table_scenario("cancel_right", {-1.5, -1.0, 0.0, 1.0},
                                 {0.0, 1.0, 0.0, 0.5, 0.0}, 8, 2.0));
  suite.push_back(table_scenario("cancel_left", {-1.0, 0.0, 1.0, 1.5},
                                 {0.0, -0.5, 0.0, -1.0, 0.0}, 8, 2.0));
  suite.push_back(
      table_scenario("sym_rarefaction", {-1.0, 0.0, 1.0}, {0.0, -1.0, 1.0, 0.0}, 8, 2.0));
  suite.push_back(table_scenario("cubic_box", {0.0, 1.0}, {0.0, 1.0, 0.0}, 7, 2.0, "cubic"));
  suite.push_back(
      table_scenario("cubic_sign", {-1.0, 0.0, 1.0}, {0.0, -1.0, 1.0, 0.0}, 7, 2.0, "cubic"));
  suite.push_back(table_scenario("cubic_neg", {0.0, 1.0}, {0.0, -1.0, 0.0}, 7, 2.0, "cubic"));

  {
    Scenario s;
    s.name = "bump_block1";
    s.flux_kind = "counterexample2";
    s.initial_kind = "block";
    s.block_n = 1;
    s.block_a = 0.25;
    s.block_L = 0.75;
    s.k = 10;
    s.horizon = 2.0;
    suite.push_back(s);
    s.name = "bump_block2";
    s.block_n = 2;
    s.block_a = 0.0625;
    s.block_L = 0.1875;
    s.k = 12;
    suite.push_back(s);
  }
  {
    Scenario s;
    s.name = "cantor2_half";
    s.flux_kind = "burgers";
    s.initial_kind = "cantor";
    s.cantor_level = 2;
    s.indicator_height = 0.5;
    s.k = 7;
    s.horizon = 1.0;
    suite.push_back(s);
  }
  {
    // piecewise-linear table flux whose decreasing jump is a dissipating
    // contact (unit slopes at both ends of the hull)
    Scenario s;
    s.name = "contact_table";
    s.flux_kind = "pl_table";
    s.table_k = 1;
    s.table_u_min = 0.0;
    s.table_values = {0.0, 0.5, 0.5, 1.5, 2.0};
    s.initial_kind = "table";
    s.init_breakpoints = {0.0, 1.0};
    s.init_values = {0.0, 2.0, 0.0};
    s.k = 1;
    s.horizon = 2.0;
    suite.push_back(s);
  }
  suite.push_back(table_scenario("narrow_pulses", {0.0, 0.25, 0.5, 0.75},
                                 {0.0, 1.0, 0.0, 1.0, 0.0}, 7, 2.0));
  {
    // increasing staircase: only rarefactions, dense straight segments
    std::vector<double> bps, vals{-1.0};
    for (int i = 1; i <= 16; ++i) {
      bps.push_back(-1.0 + 2.0 * i / 17.0);
      vals.push_back(-1.0 + std::ldexp(std::nearbyint(std::ldexp(2.0 * i / 16.0, 6)), -6));
    }
    suite.push_back(table_scenario("monotone_staircase", bps, vals, 6, 2.0));
  }
  suite.push_back(table_scenario("wide_box", {-2.0, 2.0}, {0.0, 1.0, 0.0}, 9, 2.0));

  // deterministic random data
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> xd(-2.0, 2.0), ud(-1.0, 1.0);
  for (int r = 0; r < 3; ++r) {
    for (;;) {
      int m = 3 + static_cast<int>(rng() % 4);
      std::vector<double> bps;
      for (int i = 0; i < m; ++i) bps.push_back(xd(rng));
      std::sort(bps.begin(), bps.end());
      bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
      std::vector<double> vals{0.0};
      for (std::size_t i = 0; i + 1 < bps.size(); ++i)
        vals.push_back(std::ldexp(std::nearbyint(std::ldexp(ud(rng), 8)), -8));
      vals.push_back(0.0);
      double tv = 0.0;
      for (std::size_t i = 1; i < vals.size(); ++i) tv += std::abs(vals[i] - vals[i - 1]);
      if (tv > 3.0 || tv == 0.0) continue;
      suite.push_back(
          table_scenario("random_" + std::string(1, static_cast<char>('a' + r)), bps, vals, 8, 2.0));
      break;
    }
  }
  return suite;
}

}  // namespace charflow
