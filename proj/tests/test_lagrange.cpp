#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "charflow/entropy.hpp"
#include "charflow/lagrange.hpp"
#include "oracles.hpp"

using namespace charflow;

namespace {

void check_total_order(const BoundaryFamily& fam) {
  // exact up to interpolation rounding: curves sharing a host evaluate the
  // same line through different vertex pairs
  std::set<double> times{0.0, fam.sol.horizon};
  for (const BoundaryCurve& c : fam.curves) times.insert(c.ts.begin(), c.ts.end());
  for (std::size_t i = 1; i < fam.curves.size(); ++i)
    for (double t : times) {
      double a = fam.curves[i - 1].eval(t), b = fam.curves[i].eval(t);
      CHECK(a <= b + 1e-12 * std::max(1.0, std::abs(b)));
    }
}

}  // namespace

TEST_CASE("pure shock: every value curve rides the shock line") {
  PLFlux f = build_pl_flux(burgers_flux(), 3, -1.0, 2.0);
  FTSolution sol = ft_run(f, PiecewiseConstant({0.0}, {1.0, 0.0}), 2.0);
  BoundaryFamily fam = build_family(sol, 1, 2);
  int jump_curves = 0;
  for (const BoundaryCurve& c : fam.curves) {
    if (!c.from_jump) continue;
    ++jump_curves;
    CHECK(c.terminal == 2.0);
    for (double t : {0.0, 0.7, 2.0}) CHECK(c.eval(t) == 0.5 * t);
  }
  CHECK(jump_curves == 8);  // one midpoint per grid cell of the jump
  check_total_order(fam);
}

TEST_CASE("constant datum: a parallel pencil") {
  PLFlux f = build_pl_flux(burgers_flux(), 3, -1.0, 2.0);
  FTSolution sol = ft_run(f, PiecewiseConstant::constant(0.5), 1.0);
  BoundaryFamily fam = build_family(sol, 1, 3);
  REQUIRE(!fam.curves.empty());
  for (const BoundaryCurve& c : fam.curves) {
    CHECK(c.w == 0.5);
    CHECK(c.eval(1.0) - c.eval(0.0) == doctest::Approx(f.deriv(0.5)).epsilon(1e-14));
    CHECK(c.straight_until == 1.0);
  }
  check_total_order(fam);
}

TEST_CASE("rarefaction: curves fan out from the origin with envelope slopes") {
  PLFlux f = build_pl_flux(burgers_flux(), 1, -1.0, 2.0);
  FTSolution sol = ft_run(f, PiecewiseConstant({0.0}, {0.0, 1.0}), 2.0);
  BoundaryFamily fam = build_family(sol, 1, 2);
  std::set<double> slopes;
  for (const BoundaryCurve& c : fam.curves)
    if (c.from_jump) {
      CHECK(c.eval(0.0) == 0.0);
      slopes.insert((c.eval(2.0) - c.eval(0.0)) / 2.0);
    }
  REQUIRE(slopes.size() == 2);
  CHECK(*slopes.begin() == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(*slopes.rbegin() == doctest::Approx(0.75).epsilon(1e-14));
  check_total_order(fam);
}

TEST_CASE("merge scenario: order, terminals, admissibility") {
  PLFlux f = build_pl_flux(burgers_flux(), 4, -1.0, 3.0);
  FTSolution sol = ft_run(f, PiecewiseConstant({0.0, 1.0}, {2.0, 1.0, 0.0}), 3.0);
  BoundaryFamily fam = build_family(sol, 1, 2);
  check_total_order(fam);
  for (std::size_t i = 0; i < fam.curves.size(); ++i) {
    CHECK(fam.admissibility_violation(i, fam.curves[i].terminal) <= 1e-12);
    CHECK(fam.characteristic_residual(i, 0.0, 3.0) <= 1e-10 * 3.0);
  }
  // value curves never get cancelled in a pure merge
  for (const BoundaryCurve& c : fam.curves)
    if (c.from_jump) CHECK(c.terminal == 3.0);
}

TEST_CASE("cancellation caps the terminal time") {
  PLFlux f = build_pl_flux(burgers_flux(), 4, -2.0, 3.0);
  // shock (2 -> 0) chases the rarefaction (0 -> 1): top values get cancelled
  PiecewiseConstant u0({-1.0, 0.0}, {2.0, 0.0, 1.0});
  FTSolution sol = ft_run(f, u0, 6.0);
  BoundaryFamily fam = build_family(sol, 1, 2);
  check_total_order(fam);
  bool some_cancelled = false;
  for (const BoundaryCurve& c : fam.curves)
    if (c.from_jump && c.terminal < 6.0) {
      some_cancelled = true;
      CHECK(fam.admissibility_violation(static_cast<std::size_t>(&c - fam.curves.data()),
                                        c.terminal) <= 1e-12);
    }
  CHECK(some_cancelled);
}

TEST_CASE("representation formula: exact for shock, merge, rarefaction") {
  auto phi = [](double x) { return TestBump::shape((x - 0.4) / 2.0); };
  {
    PLFlux f = build_pl_flux(burgers_flux(), 4, -1.0, 2.0);
    FTSolution sol = ft_run(f, PiecewiseConstant({0.0}, {1.0, 0.0}), 2.0);
    BoundaryFamily fam = build_family(sol, 1, 4);
    CHECK(fam.representation_residual(0.5, phi) <= 1e-10);
    CHECK(fam.representation_residual(1.7, phi) <= 1e-10);
  }
  {
    PLFlux f = build_pl_flux(burgers_flux(), 5, -1.0, 2.0);
    FTSolution sol = ft_run(f, PiecewiseConstant({0.0}, {0.0, 1.0}), 2.0);
    BoundaryFamily fam = build_family(sol, 1, 4);
    CHECK(fam.representation_residual(1.0, phi) <= 5.0 * std::ldexp(1.0, -5));
    CHECK(fam.representation_residual(1.0, phi) <= 1e-10);  // exact here as well
  }
  {
    PLFlux f = build_pl_flux(burgers_flux(), 4, -1.0, 3.0);
    FTSolution sol = ft_run(f, PiecewiseConstant({0.0, 1.0}, {2.0, 1.0, 0.0}), 3.0);
    BoundaryFamily fam = build_family(sol, 1, 4);
    for (double t : {0.5, 1.0, 1.5, 2.9}) CHECK(fam.representation_residual(t, phi) <= 1e-10);
  }
}

TEST_CASE("classify: merged shock is A1 with jump flag") {
  PLFlux f = build_pl_flux(burgers_flux(), 4, -1.0, 3.0);
  FTSolution sol = ft_run(f, PiecewiseConstant({0.0, 1.0}, {2.0, 1.0, 0.0}), 3.0);
  BoundaryFamily fam = build_family(sol, 1, 2);
  // after the merge at (1, 1.5) the shock moves at speed 1
  RegionLabel lb = fam.classify(2.0, 2.5);
  CHECK(lb.region == Region::A1);
  CHECK(lb.jump);
}

TEST_CASE("classify: fan interior is B without jump, fan fronts are B with jump") {
  PLFlux f = build_pl_flux(burgers_flux(), 2, -1.0, 2.0);
  FTSolution sol = ft_run(f, PiecewiseConstant({0.0}, {0.0, 1.0}), 2.0);
  BoundaryFamily fam = build_family(sol, 1, 2);
  // wedge interior between the first two fan lines (speeds 1/8 and 3/8)
  RegionLabel inside = fam.classify(1.0, 0.25);
  CHECK(inside.region == Region::B);
  CHECK(!inside.jump);
  RegionLabel on_front = fam.classify(1.0, 3.0 / 8.0);
  CHECK(on_front.region == Region::B);
  CHECK(on_front.jump);
}

TEST_CASE("classify: untouched characteristic is C without jump") {
  PLFlux f = build_pl_flux(burgers_flux(), 3, -1.0, 2.0);
  FTSolution sol = ft_run(f, PiecewiseConstant({0.0}, {1.0, 0.0}), 2.0);
  BoundaryFamily fam = build_family(sol, 1, 2);
  RegionLabel lb = fam.classify(0.5, -2.0);  // deep in the left constant state
  CHECK(lb.region == Region::C);
  CHECK(!lb.jump);
}

TEST_CASE("classify: pure shock with entering characteristics is in A") {
  PLFlux f = build_pl_flux(burgers_flux(), 3, -1.0, 2.0);
  FTSolution sol = ft_run(f, PiecewiseConstant({0.0}, {1.0, 0.0}), 2.0);
  BoundaryFamily fam = build_family(sol, 1, 6);
  RegionLabel lb = fam.classify(1.5, 0.75);
  CHECK((lb.region == Region::A1 || lb.region == Region::A2));
  CHECK(lb.jump);
}

TEST_CASE("dissipating contact: C segment carrying the jump flag") {
  // flux with unit slopes at both ends and a kinked middle: the decreasing
  // jump (4 -> 0) is a two-sided contact that still dissipates
  PLFlux f(0, 0.0, {0.0, 1.0, 1.0, 3.0, 4.0});
  FTSolution sol = ft_run(f, PiecewiseConstant({0.0}, {4.0, 0.0}), 2.0);
  REQUIRE(sol.fronts.size() == 1);
  CHECK(sol.fronts[0].speed == doctest::Approx(1.0).epsilon(1e-14));
  EntropyPair p = kruzkov_pair(f, 2.0, +1);
  CHECK(front_dissipation(sol.fronts[0], p).rate < -0.5);
  BoundaryFamily fam = build_family(sol, 1, 2);
  RegionLabel lb = fam.classify(1.0, 1.0);
  CHECK(lb.region == Region::C);
  CHECK(lb.jump);
}

TEST_CASE("contact inside a flat flux component: C without jump") {
  PLFlux f(2, 0.0, {0.0, 0.0, 0.0, 0.25, 0.5});  // flat on [0, 0.5]
  FTSolution sol = ft_run(f, PiecewiseConstant({0.0}, {0.25, 0.0}), 2.0);
  REQUIRE(sol.fronts.size() == 1);
  CHECK(sol.fronts[0].speed == 0.0);
  BoundaryFamily fam = build_family(sol, 1, 2);
  RegionLabel lb = fam.classify(1.0, 0.0);
  CHECK(lb.region == Region::C);
  CHECK(!lb.jump);
}

TEST_CASE("cylinder extraction: constant datum keeps everything") {
  PLFlux f = build_pl_flux(burgers_flux(), 3, -1.0, 2.0);
  FTSolution sol = ft_run(f, PiecewiseConstant::constant(0.5), 2.0);
  BoundaryFamily fam = build_family(sol, 1, 8);
  auto segs = cylinder_extract(fam, 1.5, 0.25);
  CHECK(segs.size() == fam.curves.size());
  for (const CSegment& s : segs) CHECK(s.lambda == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(cylinder_extract(fam, 0.4, 0.25), std::invalid_argument);
}

TEST_CASE("cylinder extraction: the shock cone is excluded, slopes obey 1/eps") {
  PLFlux f = build_pl_flux(burgers_flux(), 4, -2.0, 2.0);
  FTSolution sol = ft_run(f, PiecewiseConstant({0.0}, {1.0, -1.0}), 2.0);
  BoundaryFamily fam = build_family(sol, 1, 12);
  double T = 1.5, eps = 0.2;
  auto segs = cylinder_extract(fam, T, eps);
  CHECK(!segs.empty());
  for (std::size_t i = 0; i < segs.size(); ++i) {
    // straight-and-untouched segments never sit on the stationary shock
    CHECK(std::abs(segs[i].y) > 1e-9);
    if (i > 0) {
      CHECK(segs[i].y > segs[i - 1].y);
      CHECK(std::abs(segs[i].lambda - segs[i - 1].lambda) <=
            (segs[i].y - segs[i - 1].y) / eps + 1e-12);
    }
  }
}

TEST_CASE("chain rule along extracted segments for a monotone datum") {
  PLFlux f = build_pl_flux(burgers_flux(), 6, -2.0, 2.0);
  // increasing staircase: every characteristic survives forever
  std::vector<double> xs, vals{-1.0};
  for (int i = 1; i <= 16; ++i) {
    xs.push_back(-1.0 + 2.0 * i / 17.0);
    vals.push_back(f.quantize(-1.0 + 2.0 * i / 16.0));
  }
  FTSolution sol = ft_run(f, PiecewiseConstant(xs, vals), 2.0);
  BoundaryFamily fam = build_family(sol, 1, 2);
  double T = 1.5, eps = 0.25;
  auto segs = cylinder_extract(fam, T, eps);
  REQUIRE(segs.size() >= 10);
  EntropyPair p = kruzkov_pair(f, 0.25, +1);
  double h = f.h();
  for (std::size_t i = 1; i < segs.size(); ++i) {
    double dy = segs[i].y - segs[i - 1].y;
    if (dy <= 1e-12) continue;
    double dF = segs[i].F - segs[i - 1].F;
    double dl = segs[i].lambda - segs[i - 1].lambda;
    double ubar = 0.5 * (segs[i].value + segs[i - 1].value);
    CHECK(std::abs(dF + ubar * dl) <= 4.0 * (dy + h) * (std::abs(dl) + h) + 1e-12);
    double dQ = segment_Q(segs[i], p) - segment_Q(segs[i - 1], p);
    double ebar = 0.5 * (p.eta(segs[i].value) + p.eta(segs[i - 1].value));
    CHECK(std::abs(dQ + ebar * dl) <= 4.0 * (dy + h) * (std::abs(dl) + h) + 1e-12);
  }
}

TEST_CASE("completeness: off-graph samples match the family between-values") {
  PLFlux f = build_pl_flux(burgers_flux(), 4, -1.0, 3.0);
  FTSolution sol = ft_run(f, PiecewiseConstant({0.0, 1.0}, {2.0, 1.0, 0.0}), 3.0);
  BoundaryFamily fam = build_family(sol, 1, 3);
  for (double t : {0.3, 0.9, 1.4, 2.7}) {
    PiecewiseConstant ut = sol.sample(t);
    for (std::size_t i = 0; i + 1 < fam.curves.size(); ++i) {
      double a = fam.curves[i].eval(t), b = fam.curves[i + 1].eval(t);
      if (b - a > 1e-9) CHECK(ut(0.5 * (a + b)) == fam.between[i + 1]);
    }
  }
}
