#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "charflow/counterex.hpp"
#include "charflow/fronttrack.hpp"
#include "charflow/laxoracle.hpp"
#include "oracles.hpp"

using namespace charflow;

TEST_CASE("zero datum: U = 0, minimizer y = x") {
  PotentialDatum U0(PiecewiseConstant::constant(0.0));
  LaxValue v = lax_value(U0, 1.0, 0.3);
  CHECK(v.U == doctest::Approx(0.0).epsilon(1e-15));
  REQUIRE(!v.minimizers.empty());
  CHECK(v.minimizers.front() == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("constant datum transports itself") {
  PotentialDatum U0(PiecewiseConstant::constant(0.75));
  for (double x : {-1.0, 0.0, 2.0}) CHECK(lax_u(U0, 0.5, x) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("box datum: rarefaction value and structure at t = 1") {
  PiecewiseConstant box({0.0, 1.0}, {0.0, 1.0, 0.0});
  PotentialDatum U0(box);
  LaxValue v = lax_value(U0, 1.0, 0.5);
  CHECK(v.minimizers.front() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(lax_u(U0, 1.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  // u = x/t on [0, 1], then 1 up to the shock at 1.5, then 0
  CHECK(lax_u(U0, 1.0, 0.25) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(lax_u(U0, 1.0, 1.2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lax_u(U0, 1.0, 1.49) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lax_u(U0, 1.0, 1.51) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("box datum: the minimizer jumps across x = 1 + t/2") {
  PiecewiseConstant box({0.0, 1.0}, {0.0, 1.0, 0.0});
  PotentialDatum U0(box);
  for (double t : {0.5, 1.0, 1.8}) {
    double xs = 1.0 + 0.5 * t;
    double ul = lax_u(U0, t, xs - 1e-6);
    double ur = lax_u(U0, t, xs + 1e-6);
    CHECK(ul == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(ur == doctest::Approx(0.0).epsilon(1e-4));
  }
}

TEST_CASE("one-sided Lipschitz bound holds exactly for the oracle") {
  PiecewiseConstant data({-1.0, -0.25, 0.5, 1.0}, {0.0, 1.0, -0.5, 0.75, 0.0});
  PotentialDatum U0(data);
  for (double t : {0.5, 1.0, 2.0}) {
    std::vector<double> grid;
    for (int i = 0; i <= 400; ++i) grid.push_back(-4.0 + 8.0 * i / 400.0);
    std::vector<double> u = lax_sample_u(U0, t, grid);
    for (std::size_t i = 0; i + 1 < u.size(); ++i)
      for (std::size_t j = i + 1; j < u.size(); ++j)
        CHECK((u[j] - u[i]) / (grid[j] - grid[i]) <= 1.0 / t + 1e-9);
  }
}

TEST_CASE("front tracking converges to the oracle at rate 2^-k") {
  PiecewiseConstant box({0.0, 1.0}, {0.0, 1.0, 0.0});
  PotentialDatum U0(box);
  double prev_err = 0.0;
  for (int k = 4; k <= 9; ++k) {
    PLFlux f = build_pl_flux(burgers_flux(), k, -1.0, 2.0);
    FTSolution sol = ft_run(f, box, 1.0);
    PiecewiseConstant ft = sol.sample(1.0);
    double err = testing::l1_against_lax(ft, U0, 1.0, -1.0, 3.0);
    CHECK(err <= 5.0 * std::ldexp(1.0, -k));
    if (k > 4) {
      double ratio = err / prev_err;
      CHECK(ratio >= 0.3);
      CHECK(ratio <= 0.7);
    }
    prev_err = err;
  }
}

TEST_CASE("square density criterion: full interval gives zero") {
  std::vector<std::array<double, 2>> C{{0.0, 2.0}};
  CHECK(square_density_criterion(C, 0.5, {0.1, 0.5, 1.0}) <= 1e-12);
}

TEST_CASE("square density criterion at refinement-level left endpoints") {
  // value with theta = 2^{1-n} + 3^{-n} is exactly 3^{-n} / theta^2
  double prev = 0.0;
  for (int n = 2; n <= 12; ++n) {
    CantorSet c = cantor(n);
    auto ivs = c.intervals();
    double theta = std::ldexp(1.0, 1 - n) + std::pow(3.0, -n);
    double got = square_density_criterion(ivs, 0.0, {theta});
    double closed = std::pow(3.0, -n) / (theta * theta);
    CHECK(std::abs(got - closed) <= 1e-12);
    CHECK(got > prev);
    prev = got;
  }
  // n = 2 anchor: 36/121
  CantorSet c2 = cantor(2);
  double theta2 = 0.5 + 1.0 / 9.0;
  CHECK(square_density_criterion(c2.intervals(), 0.0, {theta2}) ==
        doctest::Approx(36.0 / 121.0).epsilon(1e-13));
}
