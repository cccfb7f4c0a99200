#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "charflow/entropy.hpp"
#include "charflow/flux.hpp"
#include "charflow/fronttrack.hpp"
#include "charflow/riemann.hpp"

using namespace charflow;

namespace {

void check_fan_invariants(const PLFlux& f, const WaveFan& fan) {
  if (fan.waves.empty()) {
    CHECK(fan.u_left == fan.u_right);
    return;
  }
  CHECK(fan.waves.front().u_before == fan.u_left);
  CHECK(fan.waves.back().u_after == fan.u_right);
  for (std::size_t i = 0; i < fan.waves.size(); ++i) {
    const Wave& w = fan.waves[i];
    CHECK(w.speed == wave_speed(f, w.u_before, w.u_after));
    if (i > 0) {
      CHECK(fan.waves[i - 1].u_after == w.u_before);
      CHECK(fan.waves[i - 1].speed < w.speed);
    }
  }
}

}  // namespace

TEST_CASE("single shock for Burgers (1, 0)") {
  PLFlux f = build_pl_flux(burgers_flux(), 1, -1.0, 2.0);
  WaveFan fan = solve_riemann(f, 1.0, 0.0);
  REQUIRE(fan.waves.size() == 1);
  CHECK(fan.waves[0].speed == doctest::Approx(0.5).epsilon(1e-15));
  check_fan_invariants(f, fan);
}

TEST_CASE("rarefaction splits into grid chords for Burgers (0, 1), k=1") {
  PLFlux f = build_pl_flux(burgers_flux(), 1, -1.0, 2.0);
  WaveFan fan = solve_riemann(f, 0.0, 1.0);
  REQUIRE(fan.waves.size() == 2);
  CHECK(fan.waves[0].speed == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(fan.waves[0].u_before == 0.0);
  CHECK(fan.waves[0].u_after == 0.5);
  CHECK(fan.waves[1].speed == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(fan.waves[1].u_after == 1.0);
  check_fan_invariants(f, fan);
}

TEST_CASE("equal states give the empty fan") {
  PLFlux f = build_pl_flux(burgers_flux(), 3, -1.0, 1.0);
  CHECK(solve_riemann(f, 0.25, 0.25).waves.empty());
}

TEST_CASE("off-grid states snap by default and throw in strict mode") {
  PLFlux f = build_pl_flux(burgers_flux(), 2, 0.0, 1.0);
  WaveFan fan = solve_riemann(f, 0.7, 0.1);
  CHECK(fan.u_left == 0.75);
  CHECK(fan.u_right == 0.0);
  CHECK_THROWS_AS(solve_riemann(f, 0.7, 0.1, OffGridPolicy::strict), std::invalid_argument);
}

TEST_CASE("fan admissibility: every wave dissipates for every Kruzkov entropy") {
  std::mt19937_64 rng(7);
  PLFlux fb = build_pl_flux(burgers_flux(), 4, -2.0, 2.0);
  PLFlux fc = build_pl_flux(cubic_flux(), 4, -2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const PLFlux& f = (trial % 2 == 0) ? fb : fc;
    double ul = f.quantize(-2.0 + 4.0 * (static_cast<double>(rng() % 1000) / 999.0));
    double ur = f.quantize(-2.0 + 4.0 * (static_cast<double>(rng() % 1000) / 999.0));
    WaveFan fan = solve_riemann(f, ul, ur);
    check_fan_invariants(f, fan);
    for (const Wave& w : fan.waves) {
      Front fr;
      fr.u_left = w.u_before;
      fr.u_right = w.u_after;
      fr.speed = w.speed;
      for (std::size_t i = 0; i < f.node_count(); ++i) {
        for (int sign : {+1, -1}) {
          double kk = f.node(i);
          EntropyPair p = kruzkov_pair(f, kk, sign);
          CHECK(front_dissipation(fr, p).rate <= 1e-12);
          if (i + 1 < f.node_count()) {
            EntropyPair pm = kruzkov_pair(f, kk + 0.5 * f.h(), sign);
            CHECK(front_dissipation(fr, pm).rate <= 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("pseudo-inverse of the Burgers envelope is the identity") {
  PLFlux f = build_pl_flux(burgers_flux(), 5, 0.0, 1.0);
  Envelope env = envelope(f, 0.0, 1.0, EnvelopeKind::convex);
  PseudoInverse g = pseudo_inverse_g(env);
  // slopes are cell midpoints; g maps each interior slope back into its cell
  for (double v : {0.2, 0.4, 0.6, 0.8}) CHECK(g(v) == doctest::Approx(v).epsilon(0.05));
  CHECK(g(g.lambda_min() - 1.0) == 0.0);
  CHECK(g(g.lambda_max() + 1.0) == 1.0);
}

TEST_CASE("pseudo-inverse is a left-continuous two-step map for k=1") {
  PLFlux f = build_pl_flux(burgers_flux(), 1, 0.0, 1.0);
  Envelope env = envelope(f, 0.0, 1.0, EnvelopeKind::convex);
  PseudoInverse g = pseudo_inverse_g(env);
  CHECK(g.lambda_min() == doctest::Approx(0.25));
  CHECK(g.lambda_max() == doctest::Approx(0.75));
  CHECK(g(0.25) == 0.0);   // clamp at the lower end
  CHECK(g(0.30) == 0.5);   // interior slope band maps to the breakpoint
  CHECK(g(0.74) == 0.5);
  CHECK(g(0.75) == 1.0);   // clamp at the upper end
}

TEST_CASE("pseudo-inverse of a single chord returns the endpoints") {
  PLFlux f(2, 0.0, {0.0, 0.25, 0.5, 0.75, 1.0});  // linear
  Envelope env = envelope(f, 0.0, 1.0, EnvelopeKind::convex);
  REQUIRE(env.slopes.size() == 1);
  PseudoInverse g = pseudo_inverse_g(env);
  CHECK(g(1.0) == 0.0);  // at the single slope the lower clamp wins
  CHECK(g(2.0) == 1.0);
  CHECK(g(0.5) == 0.0);
}

TEST_CASE("pseudo-inverse is nondecreasing") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> vd(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> vals(17);
    for (auto& v : vals) v = vd(rng);
    PLFlux f(4, 0.0, vals);
    Envelope env = envelope(f, f.u_min(), f.u_max(), EnvelopeKind::convex);
    PseudoInverse g = pseudo_inverse_g(env);
    double prev = -10.0;
    for (int i = 0; i <= 128; ++i) {
      double v = g.lambda_min() + (g.lambda_max() - g.lambda_min()) * i / 128.0;
      double cur = g(v);
      CHECK(cur >= prev);
      prev = cur;
    }
  }
}

TEST_CASE("self-similarity: front tracking of the pure Riemann datum stays the fan") {
  PLFlux f = build_pl_flux(cubic_flux(), 5, -1.0, 1.0);
  WaveFan fan = solve_riemann(f, -1.0, 1.0);
  check_fan_invariants(f, fan);
  PiecewiseConstant u0({0.0}, {-1.0, 1.0});
  FTSolution sol = ft_run(f, u0, 4.0);
  CHECK(sol.events.empty());
  auto fan_value = [&](double xi) {
    double u = fan.u_left;
    for (const Wave& w : fan.waves)
      if (w.speed < xi) u = w.u_after;
    return u;
  };
  for (double t : {0.5, 1.0, 3.0}) {
    PiecewiseConstant ut = sol.sample(t);
    for (double x = -4.0; x <= 4.0; x += 1.0 / 16.0) {
      bool on_wave = false;
      for (const Wave& w : fan.waves)
        if (std::abs(x - w.speed * t) < 1e-9) on_wave = true;
      if (!on_wave) CHECK(ut(x) == fan_value(x / t));
    }
  }
}
