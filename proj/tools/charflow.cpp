// charflow: event-driven front tracking for 1-D scalar conservation laws,
// with boundary-curve families, entropy dissipation accounting, a quadratic
// Lax oracle and the variation counterexample generators.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <thread>

#include "charflow/channel.hpp"
#include "charflow/counterex.hpp"
#include "charflow/entropy.hpp"
#include "charflow/fronttrack.hpp"
#include "charflow/lagrange.hpp"
#include "charflow/laxoracle.hpp"
#include "charflow/riemann.hpp"
#include "charflow/scenario.hpp"

using namespace charflow;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CsvWriter {
  std::ofstream file;
  std::ostream* out;
  explicit CsvWriter(const std::string& path) {
    if (path.empty() || path == "-") {
      out = &std::cout;
    } else {
      file.open(path);
      if (!file) throw std::runtime_error("cannot open output file: " + path);
      out = &file;
    }
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      (*out) << cells[i] << (i + 1 < cells.size() ? "," : "\n");
  }
};

std::string dump_diagnostic(const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / "charflow_dump.txt";
  std::ofstream f(path);
  f << text << "\n";
  return path.string();
}

EntropyPair parse_entropy(const PLFlux& f, const std::string& spec) {
  // kruzkov:+:0.5 | kruzkov:-:0.25 | square
  if (spec == "square")
    return EntropyPair{[](double u) { return u * u; },
                       entropy_flux(f, [](double u) { return u * u; }), true, "square"};
  auto p1 = spec.find(':');
  auto p2 = spec.find(':', p1 + 1);
  if (p1 == std::string::npos || p2 == std::string::npos || spec.substr(0, p1) != "kruzkov")
    throw std::invalid_argument("entropy spec must be kruzkov:(+|-):k or square");
  int sign = spec.substr(p1 + 1, p2 - p1 - 1) == "-" ? -1 : +1;
  double k = std::stod(spec.substr(p2 + 1));
  return kruzkov_pair(f, k, sign);
}

PiecewiseConstant parse_datum(const std::string& spec) {
  if (spec.rfind("cantor:", 0) == 0) {
    int level = std::stoi(spec.substr(7));
    return cantor(level).indicator(1.0);
  }
  if (spec == "box") return PiecewiseConstant({0.0, 1.0}, {0.0, 1.0, 0.0});
  throw std::invalid_argument("datum must be cantor:n or box");
}

json verify_scenario(const Scenario& sc, std::uint64_t seed, int bumps, int pairs) {
  FTSolution sol = sc.run();
  json r;
  r["name"] = sc.name;
  r["event_count"] = sol.events.size();

  bool compact = sol.initial.left_value() == sol.initial.right_value();
  double cons_err = 0.0;
  double tv_prev = std::numeric_limits<double>::infinity();
  bool tv_monotone = true;
  double mass0 = compact ? sol.conserved_integral(0.0) : 0.0;
  for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    double t = frac * sol.horizon;
    if (compact) cons_err = std::max(cons_err, std::abs(sol.conserved_integral(t) - mass0));
    double tv = sol.total_variation(t);
    if (tv > tv_prev + 1e-10) tv_monotone = false;
    tv_prev = tv;
  }
  r["compact_support"] = compact;
  r["conservation_error"] = cons_err;
  r["tv_monotone"] = tv_monotone;

  const PLFlux& f = sol.flux;
  double max_rate = -std::numeric_limits<double>::infinity();
  for (const Front& fr : sol.fronts) {
    for (std::size_t i = 0; i < f.node_count(); ++i) {
      for (int sgn : {+1, -1}) {
        max_rate = std::max(max_rate, front_dissipation(fr, kruzkov_pair(f, f.node(i), sgn)).rate);
        if (i + 1 < f.node_count())
          max_rate = std::max(
              max_rate,
              front_dissipation(fr, kruzkov_pair(f, f.node(i) + 0.5 * f.h(), sgn)).rate);
      }
    }
  }
  r["max_dissipation_rate"] = sol.fronts.empty() ? 0.0 : max_rate;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> un(0.0, 1.0);
  double umin = f.u_min(), umax = f.u_max();
  double xlo = sol.initial.xs.empty() ? -1.0 : sol.initial.xs.front();
  double xhi = sol.initial.xs.empty() ? 1.0 : sol.initial.xs.back();
  double span = (xhi - xlo) + 2.0 * f.max_abs_deriv() * sol.horizon + 1.0;
  double max_resid = 0.0;
  for (int b = 0; b < bumps; ++b) {
    TestBump phi;
    phi.tc = sol.horizon * (0.2 + 0.6 * un(rng));
    phi.rt = std::min(phi.tc, sol.horizon - phi.tc) * (0.3 + 0.6 * un(rng));
    phi.xc = xlo - 1.0 + (span + 2.0) * un(rng);
    phi.rx = span * (0.1 + 0.3 * un(rng));
    phi.amp = 1.0;
    for (int p = 0; p < pairs; ++p) {
      double kk = umin + (umax - umin) * un(rng);
      EntropyPair pair = kruzkov_pair(f, kk, (p % 2 == 0) ? +1 : -1);
      max_resid = std::max(max_resid, std::abs(weak_residual(sol, pair, phi)));
    }
  }
  r["max_weak_residual"] = max_resid;
  r["initial_trace_error_j12"] = initial_trace_error(sol, std::ldexp(1.0, -12), span);

  bool pass = (!compact || cons_err <= 1e-10) && tv_monotone &&
              (sol.fronts.empty() || max_rate <= 1e-12) && max_resid <= 1e-8;
  r["pass"] = pass;
  return r;
}

int cmd_solve(const std::string& scen_path, double until, int k_override,
              const std::string& out_dir, std::vector<double> sample_times) {
  Scenario sc = load_scenario(scen_path);
  if (until > 0.0) sc.horizon = until;
  if (k_override > 0) sc.k = k_override;
  auto t0 = std::chrono::steady_clock::now();
  FTSolution sol = sc.run();
  double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  std::filesystem::create_directories(out_dir);
  {
    CsvWriter w(out_dir + "/fronts.csv");
    w.row({"id", "t_birth", "x_birth", "t_death", "x_death", "u_left", "u_right", "speed"});
    for (const Front& fr : sol.fronts)
      w.row({std::to_string(fr.id), fmt(fr.t_birth), fmt(fr.x_birth),
             std::isfinite(fr.t_death) ? fmt(fr.t_death) : "inf",
             std::isfinite(fr.t_death) ? fmt(fr.x_death) : "inf", fmt(fr.u_left),
             fmt(fr.u_right), fmt(fr.speed)});
  }
  {
    CsvWriter w(out_dir + "/events.csv");
    w.row({"id", "t", "x", "incoming", "outgoing", "cancelled"});
    for (const Interaction& ev : sol.events) {
      std::string in, out, canc;
      for (std::size_t i = 0; i < ev.incoming.size(); ++i)
        in += (i ? ";" : "") + std::to_string(ev.incoming[i]);
      for (std::size_t i = 0; i < ev.outgoing.size(); ++i)
        out += (i ? ";" : "") + std::to_string(ev.outgoing[i]);
      for (std::size_t i = 0; i < ev.cancelled.size(); ++i)
        canc += (i ? ";" : "") + fmt(ev.cancelled[i][0]) + ".." + fmt(ev.cancelled[i][1]);
      w.row({std::to_string(ev.id), fmt(ev.t), fmt(ev.x), in, out, canc});
    }
  }
  if (sample_times.empty()) sample_times = {sol.horizon};
  for (double t : sample_times) {
    PiecewiseConstant u = sol.sample(t);
    CsvWriter w(out_dir + "/sample_t" + fmt(t) + ".csv");
    w.row({"x", "u_right_of_x"});
    w.row({"-inf", fmt(u.vals[0])});
    for (std::size_t i = 0; i < u.xs.size(); ++i) w.row({fmt(u.xs[i]), fmt(u.vals[i + 1])});
  }
  {
    json summary = verify_scenario(sc, sc.seed, 10, 4);
    std::ofstream f(out_dir + "/summary.json");
    f << summary.dump(2) << "\n";
    json meta;
    meta["wall_time_ms"] = wall_ms;
    std::ofstream m(out_dir + "/run_meta.json");
    m << meta.dump(2) << "\n";
  }
  return 0;
}

int cmd_verify(std::vector<std::string> scen_paths, bool use_suite, std::uint64_t seed,
               int workers, const std::string& out_path, int bumps, int pairs) {
  if (const char* env = std::getenv("CHARFLOW_SEED")) seed = std::strtoull(env, nullptr, 10);
  std::vector<Scenario> scs;
  if (use_suite) scs = builtin_suite();
  for (const auto& p : scen_paths) scs.push_back(load_scenario(p));
  if (scs.empty()) throw std::invalid_argument("verify: no scenarios given");

  std::vector<json> results(scs.size());
  std::mutex mx;
  std::size_t next = 0;
  auto worker = [&]() {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lk(mx);
        if (next >= scs.size()) return;
        i = next++;
      }
      results[i] = verify_scenario(scs[i], seed, bumps, pairs);
    }
  };
  int n = std::max(1, std::min<int>(workers, static_cast<int>(scs.size())));
  std::vector<std::thread> pool;
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  json summary;
  summary["seed"] = seed;
  bool all = true;
  json per = json::object();
  for (const json& r : results) {
    per[r.at("name").get<std::string>()] = r;
    all = all && r.at("pass").get<bool>();
  }
  summary["scenarios"] = per;  // object keys are sorted: deterministic merge
  summary["all_pass"] = all;
  if (out_path.empty()) {
    std::cout << summary.dump(2) << "\n";
  } else {
    std::ofstream f(out_path);
    f << summary.dump(2) << "\n";
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"front tracking for 1-D scalar conservation laws"};
  app.require_subcommand(1);

  std::string scen_path, out_dir = "out", points_path, entropy_spec = "kruzkov:+:0.5";
  std::string flux_kind = "burgers", datum_spec = "box", out_file;
  double until = -1.0;
  int k_override = -1, k = 8;
  std::vector<double> sample_times;
  auto* solve = app.add_subcommand("solve", "run front tracking, emit fronts/events/samples");
  solve->add_option("--scenario", scen_path)->required();
  solve->add_option("--until", until);
  solve->add_option("--k", k_override);
  solve->add_option("--out", out_dir);
  solve->add_option("--sample-times", sample_times);

  double ul = 1.0, ur = 0.0;
  auto* riemann = app.add_subcommand("riemann", "print the wave fan of a Riemann datum");
  riemann->add_option("--flux", flux_kind);
  riemann->add_option("--k", k);
  riemann->add_option("--ul", ul)->required();
  riemann->add_option("--ur", ur)->required();
  riemann->add_option("--out", out_file);

  double slope1 = -1.0, slope2 = 1.0, bv_a = -1.0, bv_b = 1.0, chan_T = 2.0;
  int grid_n = 32;
  auto* channel = app.add_subcommand("channel", "two-boundary Riemann problem on a cone");
  channel->add_option("--flux", flux_kind);
  channel->add_option("--k", k);
  channel->add_option("--slope1", slope1);
  channel->add_option("--slope2", slope2);
  channel->add_option("--a", bv_a);
  channel->add_option("--b", bv_b);
  channel->add_option("--T", chan_T);
  channel->add_option("--grid", grid_n);
  channel->add_option("--out", out_file);

  int y_grid = 4, w_res = 1;
  auto* chars = app.add_subcommand("characteristics", "boundary curve family");
  chars->add_option("--scenario", scen_path)->required();
  chars->add_option("--until", until);
  chars->add_option("--y-grid", y_grid);
  chars->add_option("--w-resolution", w_res);
  chars->add_option("--out", out_dir);

  auto* classify = app.add_subcommand("classify", "label points of the half-plane");
  classify->add_option("--scenario", scen_path)->required();
  classify->add_option("--points", points_path)->required();
  classify->add_option("--y-grid", y_grid);
  classify->add_option("--out", out_file);

  auto* dissip = app.add_subcommand("dissipation", "entropy dissipation atoms");
  dissip->add_option("--scenario", scen_path)->required();
  dissip->add_option("--entropy", entropy_spec);
  dissip->add_option("--out", out_file);

  double oracle_t = 1.0;
  int oracle_grid = 4096;
  auto* oracle = app.add_subcommand("oracle", "quadratic-flux minimization oracle");
  oracle->add_option("--datum", datum_spec);
  oracle->add_option("--t", oracle_t);
  oracle->add_option("--grid", oracle_grid);
  oracle->add_option("--out", out_file);

  int levels = 8;
  auto* ce1 = app.add_subcommand("counterexample1", "refined-set minimizer criterion");
  ce1->add_option("--levels", levels);
  ce1->add_option("--out", out_dir);

  std::vector<int> blocks{1, 2, 3};
  int ce2_k = -1;
  auto* ce2 = app.add_subcommand("counterexample2", "variation growth blocks and series");
  ce2->add_option("--blocks", blocks);
  ce2->add_option("--k", ce2_k);
  ce2->add_option("--out", out_dir);

  std::vector<std::string> verify_paths;
  bool use_suite = false;
  std::uint64_t seed = 1;
  int workers = 1, bumps = 50, pairs = 10;
  auto* verify = app.add_subcommand("verify", "run the verification checks");
  verify->add_option("--scenario", verify_paths);
  verify->add_flag("--suite", use_suite, "verify the built-in scenario suite");
  verify->add_option("--seed", seed);
  verify->add_option("--workers", workers);
  verify->add_option("--bumps", bumps);
  verify->add_option("--pairs", pairs);
  verify->add_option("--out", out_file);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(scen_path, until, k_override, out_dir, sample_times);

    if (*riemann) {
      PLFlux f = flux_kind == "cubic" ? build_pl_flux(cubic_flux(), k, -4.0, 4.0)
                                      : build_pl_flux(burgers_flux(), k, -8.0, 8.0);
      WaveFan fan = solve_riemann(f, ul, ur);
      CsvWriter w(out_file);
      w.row({"speed", "u_before", "u_after"});
      for (const Wave& wv : fan.waves) w.row({fmt(wv.speed), fmt(wv.u_before), fmt(wv.u_after)});
      return 0;
    }

    if (*channel) {
      PLFlux f = flux_kind == "cubic" ? build_pl_flux(cubic_flux(), k, -4.0, 4.0)
                                      : build_pl_flux(burgers_flux(), k, -8.0, 8.0);
      ChannelProblem p;
      p.gamma1 = {{0.0, chan_T}, {0.0, slope1 * chan_T}};
      p.gamma2 = {{0.0, chan_T}, {0.0, slope2 * chan_T}};
      p.a = f.quantize(bv_a);
      p.b = f.quantize(bv_b);
      p.flux = f;
      ChannelSolution sol(p);
      CsvWriter w(out_file);
      w.row({"t", "x", "u", "v"});
      for (int it = 1; it <= grid_n; ++it) {
        double t = chan_T * it / grid_n;
        double lo = p.gamma1.eval(t), hi = p.gamma2.eval(t);
        for (int ix = 1; ix < grid_n; ++ix) {
          double x = lo + (hi - lo) * ix / grid_n;
          w.row({fmt(t), fmt(x), fmt(sol.u(t, x)), fmt(sol.v(t, x))});
        }
      }
      return 0;
    }

    if (*chars) {
      Scenario sc = load_scenario(scen_path);
      if (until > 0.0) sc.horizon = until;
      FTSolution sol = sc.run();
      BoundaryFamily fam = build_family(sol, w_res, y_grid);
      std::filesystem::create_directories(out_dir);
      CsvWriter w(out_dir + "/curves.csv");
      w.row({"y", "t", "x", "w", "terminal"});
      for (std::size_t i = 0; i < fam.curves.size(); ++i) {
        const BoundaryCurve& c = fam.curves[i];
        for (std::size_t j = 0; j < c.ts.size(); ++j)
          w.row({fmt(fam.y_label(i)), fmt(c.ts[j]), fmt(c.xs[j]), fmt(c.w), fmt(c.terminal)});
      }
      return 0;
    }

    if (*classify) {
      Scenario sc = load_scenario(scen_path);
      FTSolution sol = sc.run();
      BoundaryFamily fam = build_family(sol, 1, y_grid);
      std::ifstream pts(points_path);
      if (!pts) throw std::runtime_error("cannot open points file: " + points_path);
      CsvWriter w(out_file);
      w.row({"t", "x", "label", "jump"});
      double t, x;
      char comma;
      while (pts >> t >> comma >> x) {
        RegionLabel lb = fam.classify(t, x);
        const char* name = lb.region == Region::A1   ? "A1"
                           : lb.region == Region::A2 ? "A2"
                           : lb.region == Region::B  ? "B"
                           : lb.region == Region::C  ? "C"
                                                     : "unresolved";
        w.row({fmt(t), fmt(x), name, lb.jump ? "1" : "0"});
      }
      return 0;
    }

    if (*dissip) {
      Scenario sc = load_scenario(scen_path);
      FTSolution sol = sc.run();
      EntropyPair pair = parse_entropy(sol.flux, entropy_spec);
      CsvWriter w(out_file);
      w.row({"front_id", "rate", "t_start", "t_end"});
      for (const DissipationAtom& a : dissipation_measure(sol, pair))
        w.row({std::to_string(a.front_id), fmt(a.rate), fmt(a.t_start),
               std::isfinite(a.t_end) ? fmt(a.t_end) : "inf"});
      return 0;
    }

    if (*oracle) {
      PotentialDatum U0(parse_datum(datum_spec));
      CsvWriter w(out_file);
      w.row({"x", "u"});
      for (int i = 0; i <= oracle_grid; ++i) {
        double x = -1.0 + 5.0 * i / oracle_grid;
        w.row({fmt(x), fmt(lax_u(U0, oracle_t, x))});
      }
      return 0;
    }

    if (*ce1) {
      std::filesystem::create_directories(out_dir);
      CsvWriter w(out_dir + "/criterion.csv");
      w.row({"n", "y", "theta", "value", "closed_form"});
      for (int n = 2; n <= levels; ++n) {
        CantorSet c = cantor(n);
        double theta = std::ldexp(1.0, 1 - n) + std::pow(3.0, -n);
        double val = square_density_criterion(c.intervals(), 0.0, {theta});
        double closed = std::pow(3.0, -n) / (theta * theta);
        w.row({std::to_string(n), fmt(0.0), fmt(theta), fmt(val), fmt(closed)});
      }
      // fraction of deepest-level component midpoints passing the criterion
      // against each refinement level, with the fixed unit window
      CsvWriter wf(out_dir + "/fraction.csv");
      wf.row({"n", "fraction_passing"});
      CantorSet deep = cantor(std::max(levels, 3));
      std::vector<double> samples;
      for (const auto& iv : deep.intervals()) samples.push_back(0.5 * (iv[0] + iv[1]));
      std::vector<double> thetas{1.0 + 1.0 / 3.0};
      for (int n = 3; n <= levels; ++n) {
        auto ivs = cantor(n).intervals();
        int passing = 0;
        for (double y : samples)
          if (square_density_criterion(ivs, y, thetas) <= 0.5) ++passing;
        wf.row({std::to_string(n),
                fmt(static_cast<double>(passing) / static_cast<double>(samples.size()))});
      }
      return 0;
    }

    if (*ce2) {
      std::filesystem::create_directories(out_dir);
      CsvWriter w(out_dir + "/blocks.csv");
      w.row({"n", "d", "t1", "tv_integral", "theoretical_bound"});
      for (int n : blocks) {
        double a = std::pow(4.0, -n), L = 3.0 * std::pow(4.0, -n);
        int kk = ce2_k > 0 ? ce2_k : 2 * n + 6;
        BlockRun r = run_block(n, kk, a, L);
        w.row({std::to_string(n), fmt(r.d), fmt(r.t1), fmt(r.tv_integral),
               fmt(r.theoretical_bound)});
      }
      SeriesPartialSums s = evaluate_tv_series(10000);
      CsvWriter ws(out_dir + "/series.csv");
      ws.row({"n", "convergent_partial", "divergent_low", "divergent_high"});
      for (std::size_t i : {std::size_t{9}, std::size_t{99}, std::size_t{999}, std::size_t{9999}})
        ws.row({std::to_string(i + 1), fmt(s.convergent[i]), fmt(s.divergent_low[i]),
                fmt(s.divergent_high[i])});
      return 0;
    }

    if (*verify)
      return cmd_verify(verify_paths, use_suite, seed, workers, out_file, bumps, pairs);
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 2;
  } catch (const InternalSolverError& e) {
    std::cerr << "internal error: " << e.what()
              << " (diagnostic: " << dump_diagnostic(e.diagnostic) << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
