#include "charflow/counterex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace charflow {

namespace {

double simpson_rec(const std::function<double(double)>& fn, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double flm = fn(0.5 * (a + m)), frm = fn(0.5 * (m + b));
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& fn, double a, double b, double tol) {
  double fa = fn(a), fb = fn(b), fm = fn(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(fn, a, b, fa, fm, fb, whole, tol, 52);
}

}  // namespace

std::vector<std::array<double, 2>> CantorSet::intervals() const {
  std::vector<std::array<double, 2>> out;
  out.reserve(components.size());
  double d = static_cast<double>(den);
  for (const auto& c : components)
    out.push_back({static_cast<double>(c[0]) / d, static_cast<double>(c[1]) / d});
  return out;
}

double CantorSet::measure() const {
  std::int64_t total = 0;
  for (const auto& c : components) total += c[1] - c[0];
  return static_cast<double>(total) / static_cast<double>(den);
}

PiecewiseConstant CantorSet::indicator(double height) const {
  std::vector<double> xs, vals{0.0};
  for (const auto& iv : intervals()) {
    xs.push_back(iv[0]);
    vals.push_back(height);
    xs.push_back(iv[1]);
    vals.push_back(0.0);
  }
  return PiecewiseConstant(std::move(xs), std::move(vals));
}

CantorSet cantor(int n) {
  if (n < 0) throw std::invalid_argument("cantor: level must be nonnegative");
  if (n > 20) throw std::invalid_argument("cantor: level too deep for exact arithmetic");
  CantorSet c;
  c.level = 0;
  c.den = 1;
  c.components = {{0, 2}};
  for (int lvl = 1; lvl <= n; ++lvl) {
    // rescale endpoints by 6; the removed middle has integer length 2^lvl
    std::int64_t gap = 1;
    for (int j = 0; j < lvl; ++j) gap *= 2;
    std::vector<std::array<std::int64_t, 2>> next;
    next.reserve(c.components.size() * 2);
    for (auto& comp : c.components) {
      std::int64_t lo = comp[0] * 6, hi = comp[1] * 6;
      std::int64_t mid_lo = (lo + hi - gap) / 2;
      std::int64_t mid_hi = (lo + hi + gap) / 2;
      if ((lo + hi - gap) % 2 != 0 || mid_lo <= lo || mid_hi >= hi)
        throw std::logic_error("cantor: refinement broke exactness");
      next.push_back({lo, mid_lo});
      next.push_back({mid_hi, hi});
    }
    c.components = std::move(next);
    c.den *= 6;
    c.level = lvl;
  }
  return c;
}

double BumpProfile::gp(double s) const {
  if (s <= -1.0 || s >= 1.0) return 0.0;
  return std::exp(-beta * s * s / (1.0 - s * s));
}

double BumpProfile::g(double s) const {
  if (s <= -1.0) return 0.0;
  if (s >= 1.0) return 1.0;
  // g - 1/2 is odd since g' is even
  if (s < 0.0) return 1.0 - g(-s);
  double val = integrate([this](double r) { return gp(r); }, 0.0, s, 1e-14);
  return 0.5 + val;
}

BumpProfile build_bump_g() {
  auto mass = [](double beta) {
    BumpProfile p{beta};
    return 2.0 * integrate([&p](double s) { return p.gp(s); }, 0.0, 1.0, 1e-14);
  };
  double lo = 0.0, hi = 8.0;
  if (!(mass(lo) > 1.0) || !(mass(hi) < 1.0))
    throw std::runtime_error("build_bump_g: bisection bracket failed");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (mass(mid) > 1.0 ? lo : hi) = mid;
  }
  return BumpProfile{0.5 * (lo + hi)};
}

SmoothFlux bump_flux(double a, double L, int n, std::shared_ptr<const BumpProfile> prof,
                     double domain_lo, double domain_hi) {
  if (!(a > 0.0) || !(L > 0.0) || !(3.0 * a <= L))
    throw std::invalid_argument("bump_flux: need 0 < 3a <= L");
  if (!prof) prof = std::make_shared<BumpProfile>(build_bump_g());
  double height = std::pow(a, n);
  if (domain_hi <= domain_lo) {
    domain_lo = 0.0;
    domain_hi = 2.0 * L + 2.0 * a;
  }
  auto eval = [a, L, height, prof](double u) {
    if (u <= L - a) return 0.0;
    if (u <= L + a) return height * prof->g((u - L) / a);
    if (u <= 2.0 * L) return height;
    if (u <= 2.0 * L + 2.0 * a) return height * prof->g((2.0 * L + a - u) / a);
    return 0.0;
  };
  auto deriv = [a, L, height, prof](double u) {
    if (u <= L - a) return 0.0;
    if (u <= L + a) return height / a * prof->gp((u - L) / a);
    if (u <= 2.0 * L) return 0.0;
    if (u <= 2.0 * L + 2.0 * a) return -height / a * prof->gp((2.0 * L + a - u) / a);
    return 0.0;
  };
  return SmoothFlux{eval, deriv, domain_lo, domain_hi};
}

SmoothFlux assemble_flux(const BumpParams& params, std::shared_ptr<const BumpProfile> prof) {
  if (params.a.size() != params.L.size() || params.a.empty())
    throw std::invalid_argument("assemble_flux: need matching nonempty sequences");
  if (!prof) prof = std::make_shared<BumpProfile>(build_bump_g());
  const std::size_t m = params.a.size();
  for (std::size_t i = 0; i < m; ++i) {
    double a = params.a[i], L = params.L[i];
    if (!(3.0 * a <= L))
      throw std::invalid_argument("assemble_flux: 3a <= L violated at block " +
                                  std::to_string(i + 1));
    if (i + 1 < m && !(4.0 * params.L[i + 1] <= L))
      throw std::invalid_argument("assemble_flux: 4L' <= L violated between blocks " +
                                  std::to_string(i + 1) + "," + std::to_string(i + 2));
  }
  // Scale separation between three consecutive blocks, in log form:
  // (n+1) log a_{n+1} < log L_n - n log a_n - log L_{n-1}.
  for (std::size_t nblk = 2; nblk + 1 <= m; ++nblk) {
    double nn = static_cast<double>(nblk);
    double lhs = (nn + 1.0) * std::log(params.a[nblk]);
    double rhs = std::log(params.L[nblk - 1]) - nn * std::log(params.a[nblk - 1]) -
                 std::log(params.L[nblk - 2]);
    if (!(lhs < rhs))
      throw std::invalid_argument("assemble_flux: scale separation violated at block " +
                                  std::to_string(nblk + 1));
  }
  std::vector<SmoothFlux> blocks;
  for (std::size_t i = 0; i < m; ++i)
    blocks.push_back(bump_flux(params.a[i], params.L[i], static_cast<int>(i) + 1, prof));
  double hi = 2.0 * params.L[0] + 2.0 * params.a[0];
  auto eval = [blocks](double u) {
    double s = 0.0;
    for (const auto& b : blocks) s += b.eval(u);
    return s;
  };
  auto deriv = [blocks](double u) {
    double s = 0.0;
    for (const auto& b : blocks) s += b.deriv(u);
    return s;
  };
  return SmoothFlux{eval, deriv, 0.0, hi};
}

BlockRun run_block(int n, int k, double a, double L, double run_horizon) {
  double h = std::ldexp(1.0, -k);
  if (!(h <= a / 16.0))
    throw std::invalid_argument("run_block: grid too coarse, need 2^-k <= a/16");
  auto prof = std::make_shared<BumpProfile>(build_bump_g());
  SmoothFlux f = bump_flux(a, L, n, prof);
  double lo = 0.0;
  double hi = std::ceil((2.0 * L + 2.0 * a) / h) * h;
  PLFlux pl = build_pl_flux(f, k, lo, hi);

  double top = pl.quantize(2.0 * L);
  WaveFan left_fan = solve_riemann(pl, 0.0, top);
  if (left_fan.waves.empty()) throw std::runtime_error("run_block: empty left fan");
  double d = left_fan.waves.back().speed;
  if (!(d > 0.0)) throw std::runtime_error("run_block: nonpositive trailing speed");

  PiecewiseConstant u0({0.0, d}, {0.0, top, 0.0});
  FTSolution sol = ft_run(pl, u0, run_horizon);

  // the trailing shock of the right fan moves at speed d from x = d;
  // its death is the first interaction it suffers
  int shock4 = -1;
  for (const Front& fr : sol.fronts) {
    if (fr.t_birth == 0.0 && fr.x_birth == d && fr.u_right == 0.0 && fr.u_left != top)
      shock4 = fr.id;
  }
  if (shock4 < 0) throw std::runtime_error("run_block: trailing shock not found");
  double t1 = sol.fronts[static_cast<std::size_t>(shock4)].t_death;

  double tv = 0.0;
  for (const Front& fr : sol.fronts) {
    double s0 = std::max(fr.t_birth, 1.0);
    double s1 = std::min({fr.t_death, 2.0, sol.horizon});
    if (s0 < s1) tv += std::abs(f.deriv(fr.u_right) - f.deriv(fr.u_left)) * (s1 - s0);
  }

  BlockRun run;
  run.n = n;
  run.a = a;
  run.L = L;
  run.d = d;
  run.t1 = t1;
  run.tv_integral = tv;
  double hn = std::pow(a, n);
  run.theoretical_bound = hn / (L + a) * std::log((L - 2.0 * a) / (2.0 * a));
  run.event_count = sol.events.size();
  run.solution = std::move(sol);
  return run;
}

SeriesPartialSums evaluate_tv_series(int terms) {
  SeriesPartialSums out;
  out.convergent.reserve(static_cast<std::size_t>(terms));
  out.divergent_low.reserve(static_cast<std::size_t>(terms));
  out.divergent_high.reserve(static_cast<std::size_t>(terms));
  double sc = 0.0, slo = 0.0, shi = 0.0;
  const double log4 = std::log(4.0);
  for (int n = 1; n <= terms; ++n) {
    double nn = static_cast<double>(n);
    // L_n = 3*4^-n, a_n = 3*4^-2n; N_n = floor(L_n / (n^2 a_n^n)), so
    // N_n a_n^n = L_n / n^2 - theta_n a_n^n with theta_n in [0, 1).  All
    // quantities enter as ratios, evaluated in log form to dodge underflow.
    double log_an = std::log(3.0) - 2.0 * nn * log4;
    double log_Ln = std::log(3.0) - nn * log4;
    double an_over_Ln = std::exp(-nn * log4);                 // a_n / L_n = 4^-n
    double corr_over_Ln = std::exp(nn * log_an - log_Ln);     // a_n^n / L_n
    // (L_n - 2 a_n) / (2 a_n) = (4^n - 2) / 2
    double logfac = nn * log4 + std::log1p(-2.0 * an_over_Ln) - std::log(2.0);
    double inv_n2 = 1.0 / (nn * nn);
    sc += inv_n2;  // N_n a_n^n / L_n <= 1/n^2
    double shared = logfac / (1.0 + an_over_Ln);
    double d_hi = inv_n2 * shared;
    double d_lo = std::max(0.0, inv_n2 - corr_over_Ln) * shared;
    if (logfac < 0.0) std::swap(d_lo, d_hi);
    slo += d_lo;
    shi += d_hi;
    out.convergent.push_back(sc);
    out.divergent_low.push_back(slo);
    out.divergent_high.push_back(shi);
  }
  return out;
}

}  // namespace charflow
