#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "charflow/entropy.hpp"
#include "charflow/fronttrack.hpp"
#include "oracles.hpp"

using namespace charflow;

TEST_CASE("Kruzkov pairs: values and identities") {
  PLFlux f = build_pl_flux(burgers_flux(), 6, -2.0, 2.0);
  EntropyPair p0 = kruzkov_pair(f, 0.0, +1);
  CHECK(p0.eta(1.0) == 1.0);
  CHECK(p0.eta(-1.0) == 0.0);
  CHECK(p0.q(1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p0.q(-1.0) == 0.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ud(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    double k = ud(rng), u = ud(rng);
    EntropyPair pp = kruzkov_pair(f, k, +1);
    EntropyPair pm = kruzkov_pair(f, k, -1);
    CHECK(pp.eta(u) + pm.eta(u) == doctest::Approx(std::abs(u - k)).epsilon(1e-13));
    double sgn = (u > k) ? 1.0 : (u < k ? -1.0 : 0.0);
    CHECK(pp.q(u) + pm.q(u) ==
          doctest::Approx(sgn * (f.eval(u) - f.eval(k))).epsilon(1e-12));
  }
}

TEST_CASE("entropy_flux: linear entropy gives the flux itself") {
  PLFlux f = build_pl_flux(burgers_flux(), 5, -1.0, 1.0);
  auto q = entropy_flux(f, [](double u) { return u; });
  for (double u : {-1.0, -0.25, 0.0, 0.5, 1.0})
    CHECK(q(u) == doctest::Approx(f.eval(u) - f.eval(-1.0)).epsilon(1e-13));
}

TEST_CASE("entropy_flux: quadratic entropy on Burgers") {
  // exact for the smooth flux: q = 2 u^3 / 3 + const; the PL route converges
  PLFlux f = build_pl_flux(burgers_flux(), 10, -1.0, 1.0);
  auto q = entropy_flux(f, [](double u) { return u * u; });
  auto exact = [](double u) { return 2.0 * u * u * u / 3.0 - 2.0 * (-1.0) / 3.0; };
  for (double u : {-1.0, -0.5, 0.0, 0.25, 1.0})
    CHECK(q(u) == doctest::Approx(exact(u)).epsilon(1e-5));
  // smooth-flux quadrature route
  auto qs = entropy_flux(burgers_flux(-1.0, 1.0), [](double u) { return 2.0 * u; }, 1e-12);
  for (double u : {-0.5, 0.3, 0.9}) CHECK(qs(u) == doctest::Approx(exact(u)).epsilon(1e-9));
}

TEST_CASE("entropy_flux consistency with the Kruzkov closed form") {
  PLFlux f = build_pl_flux(cubic_flux(), 6, -1.0, 1.0);
  double kk = 0.25;
  EntropyPair closed = kruzkov_pair(f, kk, +1);
  auto integrated = entropy_flux(f, closed.eta);
  double shift = integrated(kk);  // closed form is anchored at u = k
  for (double u = -1.0; u <= 1.0; u += 1.0 / 32.0)
    CHECK(integrated(u) - shift == doctest::Approx(closed.q(u)).epsilon(1e-12));
}

TEST_CASE("front dissipation examples") {
  PLFlux f = build_pl_flux(burgers_flux(), 6, -2.0, 2.0);
  Front fr;
  fr.u_left = 1.0;
  fr.u_right = 0.0;
  fr.speed = 0.5;
  // |u - 1/2| = eta_{1/2}^+ + eta_{1/2}^-
  EntropyPair pp = kruzkov_pair(f, 0.5, +1);
  EntropyPair pm = kruzkov_pair(f, 0.5, -1);
  double rate = front_dissipation(fr, pp).rate + front_dissipation(fr, pm).rate;
  CHECK(rate == doctest::Approx(-0.25).epsilon(1e-12));
  // linearity in the pair: eta = u is conservative
  EntropyPair lin{[](double u) { return u; },
                  [&f](double u) { return f.eval(u); }, false, "identity"};
  CHECK(front_dissipation(fr, lin).rate == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("contact inside a flat flux piece dissipates nothing") {
  PLFlux f(2, 0.0, {0.0, 0.25, 0.5, 0.5, 0.5, 0.75});  // flat on [0.5, 1.0]
  Front fr;
  fr.u_left = 0.75;
  fr.u_right = 0.5;
  fr.speed = wave_speed(f, 0.75, 0.5);
  CHECK(fr.speed == 0.0);
  for (double k = 0.0; k <= 1.25; k += 0.125)
    for (int sgn : {+1, -1})
      CHECK(std::abs(front_dissipation(fr, kruzkov_pair(f, k, sgn)).rate) <= 1e-15);
}

TEST_CASE("dissipation measure: atoms and window totals") {
  PLFlux f = build_pl_flux(burgers_flux(), 5, -1.0, 2.0);
  EntropyPair p = kruzkov_pair(f, 0.5, +1);

  FTSolution rare = ft_run(f, PiecewiseConstant({0.0}, {0.0, 1.0}), 2.0);
  auto atoms_rare = dissipation_measure(rare, p);
  CHECK(dissipation_total(rare, atoms_rare, 0.0, 2.0, -10.0, 10.0) ==
        doctest::Approx(0.0).epsilon(1e-15));

  FTSolution shock = ft_run(f, PiecewiseConstant({0.0}, {1.0, 0.0}), 2.0);
  auto atoms_shock = dissipation_measure(shock, p);
  double r = front_dissipation(shock.fronts[0], p).rate;
  CHECK(dissipation_total(shock, atoms_shock, 0.0, 2.0, -10.0, 10.0) ==
        doctest::Approx(r * 2.0).epsilon(1e-13));

  // merged shocks: total equals the sum of the three segments
  FTSolution merge = ft_run(f, PiecewiseConstant({0.0, 1.0}, {2.0, 1.0, 0.0}), 2.0);
  auto atoms = dissipation_measure(merge, p);
  double total = dissipation_total(merge, atoms, 0.0, 2.0, -10.0, 10.0);
  double manual = 0.0;
  for (const Front& fr : merge.fronts) {
    double span = std::min(fr.t_death, 2.0) - fr.t_birth;
    manual += front_dissipation(fr, p).rate * span;
  }
  CHECK(total == doctest::Approx(manual).epsilon(1e-13));
  CHECK(total < 0.0);
}

TEST_CASE("weak residual vanishes: constant, shock, rarefaction") {
  PLFlux f = build_pl_flux(burgers_flux(), 5, -1.0, 2.0);
  EntropyPair p = kruzkov_pair(f, 0.25, +1);

  FTSolution konst = ft_run(f, PiecewiseConstant::constant(0.5), 2.0);
  CHECK(std::abs(weak_residual(konst, p, {1.0, 0.0, 0.9, 2.0, 1.0})) <= 1e-14);

  FTSolution shock = ft_run(f, PiecewiseConstant({0.0}, {1.0, 0.0}), 2.0);
  CHECK(std::abs(weak_residual(shock, p, {1.0, 0.5, 0.9, 2.0, 1.0})) <= 1e-13);

  FTSolution rare = ft_run(f, PiecewiseConstant({0.0}, {0.0, 1.0}), 2.0);
  CHECK(std::abs(weak_residual(rare, p, {1.0, 0.7, 0.9, 2.0, 1.0})) <= 1e-13);
}

TEST_CASE("weak residual on random data, pairs, bumps") {
  PLFlux f = build_pl_flux(burgers_flux(), 5, -2.0, 2.0);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ud(-1.5, 1.5);
  for (int trial = 0; trial < 10; ++trial) {
    PiecewiseConstant u0 = testing::random_grid_datum(rng, f, 5, -1.0, 1.0, -1.5, 1.5);
    FTSolution sol = ft_run(f, u0, 2.0);
    for (int b = 0; b < 10; ++b) {
      TestBump phi{1.0 + 0.2 * ud(rng) / 1.5, ud(rng), 0.3 + 0.02 * b, 1.5, 1.0};
      EntropyPair p = kruzkov_pair(f, f.quantize(ud(rng)) + 0.5 * f.h(), b % 2 ? +1 : -1);
      CHECK(std::abs(weak_residual(sol, p, phi)) <= 1e-12);
    }
  }
}

TEST_CASE("weak residual rejects bumps leaving the time strip") {
  PLFlux f = build_pl_flux(burgers_flux(), 4, -1.0, 1.0);
  FTSolution sol = ft_run(f, PiecewiseConstant::constant(0.0), 1.0);
  EntropyPair p = kruzkov_pair(f, 0.0, +1);
  CHECK_THROWS_AS(weak_residual(sol, p, {0.1, 0.0, 0.2, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("cylinder balance: constant and transported states") {
  PLFlux f = build_pl_flux(burgers_flux(), 5, -1.0, 2.0);
  EntropyPair p = kruzkov_pair(f, 0.25, +1);
  FTSolution konst = ft_run(f, PiecewiseConstant::constant(0.5), 2.0);
  CylinderWall w1{0.0, -1.0, f.deriv(0.5), 0.5};
  CylinderWall w2{0.0, 1.0, f.deriv(0.5), 0.5};
  CHECK(std::abs(cylinder_balance(konst, p, w1, w2, 0.25, 1.75)) <= 1e-14);

  // rarefaction tail: two parallel characteristics in the constant outer state
  FTSolution rare = ft_run(f, PiecewiseConstant({0.0}, {0.0, 1.0}), 2.0);
  CylinderWall a{0.0, -3.0, f.deriv(0.0), 0.0};
  CylinderWall b{0.0, -1.5, f.deriv(0.0), 0.0};
  CHECK(std::abs(cylinder_balance(rare, p, a, b, 0.1, 1.9)) <= 1e-13);

  // cylinder containing one shock birth
  FTSolution merge = ft_run(f, PiecewiseConstant({0.0, 1.0}, {2.0, 1.0, 0.0}), 3.0);
  CylinderWall lo{0.0, -2.0, 2.0, 2.0};  // left state 2 moves at speed 2
  CylinderWall hi{0.0, 3.5, 0.0, 0.0};   // right state 0 stays put
  double res = cylinder_balance(merge, p, lo, hi, 0.25, 1.5);
  CHECK(std::abs(res) <= 1e-12);
}

TEST_CASE("cylinder balance rejects crossing walls") {
  PLFlux f = build_pl_flux(burgers_flux(), 4, -1.0, 1.0);
  FTSolution konst = ft_run(f, PiecewiseConstant::constant(0.0), 1.0);
  EntropyPair p = kruzkov_pair(f, 0.0, +1);
  CylinderWall w1{0.0, 0.0, 1.0, 0.0};
  CylinderWall w2{0.0, 0.5, -1.0, 0.0};
  CHECK_THROWS_AS(cylinder_balance(konst, p, w1, w2, 0.1, 0.9), std::invalid_argument);
}

TEST_CASE("initial trace error decays linearly before interactions") {
  PLFlux f = build_pl_flux(burgers_flux(), 6, -1.0, 2.0);
  FTSolution sol = ft_run(f, PiecewiseConstant({0.0}, {1.0, 0.0}), 1.0);
  double prev = 1e9;
  for (int j = 2; j <= 12; ++j) {
    double t = std::ldexp(1.0, -j);
    double e = initial_trace_error(sol, t, 4.0);
    CHECK(e <= f.max_abs_deriv() * t * 1.0 + 1e-14);  // transport bound
    CHECK(e < prev);
    prev = e;
  }
  FTSolution konst = ft_run(f, PiecewiseConstant::constant(0.5), 1.0);
  CHECK(initial_trace_error(konst, 0.5, 4.0) == 0.0);
}

TEST_CASE("dissipation is additive over pairs") {
  PLFlux f = build_pl_flux(cubic_flux(), 5, -1.0, 1.0);
  Front fr;
  fr.u_left = 1.0;
  fr.u_right = -1.0;
  fr.speed = wave_speed(f, 1.0, -1.0);
  EntropyPair p1 = kruzkov_pair(f, 0.25, +1);
  EntropyPair p2 = kruzkov_pair(f, -0.5, -1);
  EntropyPair sum{[&](double u) { return p1.eta(u) + p2.eta(u); },
                  [&](double u) { return p1.q(u) + p2.q(u); }, true, "sum"};
  CHECK(front_dissipation(fr, sum).rate ==
        doctest::Approx(front_dissipation(fr, p1).rate + front_dissipation(fr, p2).rate)
            .epsilon(1e-15));
}

TEST_CASE("convexity probe flags non-convex entropies") {
  CHECK(is_convex_on([](double u) { return u * u; }, -1.0, 1.0));
  CHECK(is_convex_on([](double u) { return std::abs(u); }, -1.0, 1.0));
  CHECK(!is_convex_on([](double u) { return -u * u; }, -1.0, 1.0));
}
