#include "charflow/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace charflow {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1]; exact through degree 15.
constexpr double kGLX[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                            -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                            0.7966664774136267,  0.9602898564975363};
constexpr double kGLW[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                            0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                            0.2223810344533745, 0.1012285362903763};

template <typename F>
double gl8(double a, double b, F&& fn) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 8; ++i) acc += kGLW[i] * fn(mid + half * kGLX[i]);
  return acc * half;
}

double adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = fn(lm), frm = fn(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_adaptive(const std::function<double(double)>& fn, double a, double b, double tol) {
  if (a == b) return 0.0;
  double fa = fn(a), fb = fn(b), fm = fn(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(fn, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

EntropyPair kruzkov_pair(const PLFlux& f, double k, int sign) {
  EntropyPair p;
  double fk = f.eval(k);
  if (sign >= 0) {
    p.eta = [k](double u) { return std::max(u - k, 0.0); };
    p.q = [f, k, fk](double u) { return u >= k ? f.eval(u) - fk : 0.0; };
    p.name = "kruzkov:+:" + std::to_string(k);
  } else {
    p.eta = [k](double u) { return std::max(k - u, 0.0); };
    p.q = [f, k, fk](double u) { return u <= k ? fk - f.eval(u) : 0.0; };
    p.name = "kruzkov:-:" + std::to_string(k);
  }
  return p;
}

EntropyPair kruzkov_pair(const SmoothFlux& f, double k, int sign) {
  EntropyPair p;
  double fk = f.eval(k);
  auto ev = f.eval;
  if (sign >= 0) {
    p.eta = [k](double u) { return std::max(u - k, 0.0); };
    p.q = [ev, k, fk](double u) { return u >= k ? ev(u) - fk : 0.0; };
    p.name = "kruzkov:+:" + std::to_string(k);
  } else {
    p.eta = [k](double u) { return std::max(k - u, 0.0); };
    p.q = [ev, k, fk](double u) { return u <= k ? fk - ev(u) : 0.0; };
    p.name = "kruzkov:-:" + std::to_string(k);
  }
  return p;
}

std::function<double(double)> entropy_flux(const PLFlux& f, std::function<double(double)> eta) {
  std::vector<double> prefix(f.node_count(), 0.0);
  for (std::size_t i = 0; i + 1 < f.node_count(); ++i)
    prefix[i + 1] = prefix[i] + f.cell_slope(i) * (eta(f.node(i + 1)) - eta(f.node(i)));
  return [f, eta = std::move(eta), prefix = std::move(prefix)](double u) {
    double s = (u - f.u_min()) / f.h();
    if (s <= 0.0) return prefix.front();
    if (s >= static_cast<double>(f.node_count() - 1)) return prefix.back();
    auto i = static_cast<std::size_t>(std::floor(s));
    return prefix[i] + f.cell_slope(i) * (eta(u) - eta(f.node(i)));
  };
}

std::function<double(double)> entropy_flux(const SmoothFlux& f,
                                           std::function<double(double)> eta_prime,
                                           double quad_tol) {
  double lo = f.u_lo;
  auto integrand = [f, eta_prime](double s) { return eta_prime(s) * f.deriv(s); };
  return [integrand, lo, quad_tol](double u) {
    return integrate_adaptive(integrand, lo, u, quad_tol);
  };
}

bool is_convex_on(const std::function<double(double)>& eta, double lo, double hi, int samples,
                  double tol) {
  double h = (hi - lo) / (samples - 1);
  for (int i = 1; i + 1 < samples; ++i) {
    double u = lo + i * h;
    if (eta(u - h) - 2.0 * eta(u) + eta(u + h) < -tol) return false;
  }
  return true;
}

DissipationAtom front_dissipation(const Front& front, const EntropyPair& pair) {
  double rate = (pair.q(front.u_right) - pair.q(front.u_left)) -
                front.speed * (pair.eta(front.u_right) - pair.eta(front.u_left));
  return {front.id, rate, front.t_birth, front.t_death};
}

std::vector<DissipationAtom> dissipation_measure(const FTSolution& sol, const EntropyPair& pair) {
  std::vector<DissipationAtom> atoms;
  atoms.reserve(sol.fronts.size());
  for (const Front& f : sol.fronts) atoms.push_back(front_dissipation(f, pair));
  return atoms;
}

double dissipation_total(const FTSolution& sol, const std::vector<DissipationAtom>& atoms,
                         double t0, double t1, double x0, double x1) {
  double total = 0.0;
  for (const DissipationAtom& a : atoms) {
    const Front& f = sol.fronts[static_cast<std::size_t>(a.front_id)];
    double lo = std::max(t0, a.t_start);
    double hi = std::min({t1, a.t_end, sol.horizon});
    if (!(lo < hi)) continue;
    // clip to the window in x along the straight trajectory
    if (f.speed != 0.0) {
      double ta = (x0 - (f.x_birth - f.speed * f.t_birth)) / f.speed;
      double tb = (x1 - (f.x_birth - f.speed * f.t_birth)) / f.speed;
      if (ta > tb) std::swap(ta, tb);
      lo = std::max(lo, ta);
      hi = std::min(hi, tb);
    } else if (f.x_birth < x0 || f.x_birth > x1) {
      continue;
    }
    if (lo < hi) total += a.rate * (hi - lo);
  }
  return total;
}

double TestBump::shape(double s) {
  if (s <= -1.0 || s >= 1.0) return 0.0;
  double w = 1.0 - s * s;
  return w * w;
}

double TestBump::shape_antideriv(double s) {
  s = std::max(-1.0, std::min(1.0, s));
  return s - 2.0 * s * s * s / 3.0 + s * s * s * s * s / 5.0 + 8.0 / 15.0;
}

double TestBump::value(double t, double x) const {
  return amp * shape((t - tc) / rt) * shape((x - xc) / rx);
}

double TestBump::x_antideriv(double t, double x) const {
  return amp * shape((t - tc) / rt) * rx * shape_antideriv((x - xc) / rx);
}

double weak_residual(const FTSolution& sol, const EntropyPair& pair, const TestBump& phi) {
  const double lo_t = phi.tc - phi.rt, hi_t = phi.tc + phi.rt;
  if (!(lo_t > 0.0) || !(hi_t < sol.horizon))
    throw std::invalid_argument("weak_residual: bump support must sit inside (0, horizon)");
  const double lo_x = phi.xc - phi.rx, hi_x = phi.xc + phi.rx;

  // Slab boundaries: bump ends, interaction times, and every crossing of a
  // front line with the bump's x-support edges.  Integrands are polynomial on
  // each sub-slab, so fixed Gauss quadrature is exact.
  std::set<double> cuts{lo_t, hi_t};
  for (const Interaction& ev : sol.events)
    if (ev.t > lo_t && ev.t < hi_t) cuts.insert(ev.t);
  for (const Front& f : sol.fronts) {
    double t0 = std::max(f.t_birth, lo_t);
    double t1 = std::min(f.t_death, hi_t);
    if (!(t0 < t1)) continue;
    if (f.speed != 0.0) {
      for (double edge : {lo_x, hi_x}) {
        double tcr = f.t_birth + (edge - f.x_birth) / f.speed;
        if (tcr > t0 && tcr < t1) cuts.insert(tcr);
      }
    }
  }
  std::vector<double> slab(cuts.begin(), cuts.end());

  double area = 0.0, atom_term = 0.0;
  for (std::size_t s = 0; s + 1 < slab.size(); ++s) {
    double s0 = slab[s], s1 = slab[s + 1];
    double tm = 0.5 * (s0 + s1);
    struct Line {
      double x0, t0, v;  // x(t) = x0 + v (t - t0)
      double at(double t) const { return x0 + v * (t - t0); }
    };
    std::vector<std::pair<double, const Front*>> act;
    for (const Front& f : sol.fronts)
      if (f.alive_at(tm)) act.push_back({f.x_at(tm), &f});
    std::sort(act.begin(), act.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    // region values, left to right
    std::vector<double> vals{sol.left_state};
    std::vector<Line> lines;
    for (const auto& [x, f] : act) {
      lines.push_back({f->x_birth, f->t_birth, f->speed});
      vals.push_back(f->u_right);
      (void)x;
    }

    for (std::size_t r = 0; r < vals.size(); ++r) {
      double eta_v = pair.eta(vals[r]);
      double q_v = pair.q(vals[r]);
      bool has_l = r > 0, has_r = r < lines.size();
      auto xl = [&](double t) { return has_l ? lines[r - 1].at(t) : lo_x; };
      auto xr = [&](double t) { return has_r ? lines[r].at(t) : hi_x; };
      double vl = has_l ? lines[r - 1].v : 0.0;
      double vr = has_r ? lines[r].v : 0.0;
      // d/dt of int phi dx between the moving bounds, minus boundary motion
      double t1term = (phi.x_antideriv(s1, xr(s1)) - phi.x_antideriv(s1, xl(s1))) -
                      (phi.x_antideriv(s0, xr(s0)) - phi.x_antideriv(s0, xl(s0)));
      double t2term = gl8(s0, s1, [&](double t) {
        return vr * phi.value(t, xr(t)) - vl * phi.value(t, xl(t));
      });
      double t3term =
          gl8(s0, s1, [&](double t) { return phi.value(t, xr(t)) - phi.value(t, xl(t)); });
      area += eta_v * (t1term - t2term) + q_v * t3term;
    }

    for (const auto& [x, f] : act) {
      (void)x;
      DissipationAtom a = front_dissipation(*f, pair);
      if (a.rate == 0.0) continue;
      atom_term += a.rate * gl8(s0, s1, [&](double t) { return phi.value(t, f->x_at(t)); });
    }
  }
  return area + atom_term;
}

double cylinder_balance(const FTSolution& sol, const EntropyPair& pair, const CylinderWall& w1,
                        const CylinderWall& w2, double t1, double t2) {
  if (!(t1 < t2)) throw std::invalid_argument("cylinder_balance: need t1 < t2");
  if (!(w1.x_at(t1) < w2.x_at(t1)) || !(w1.x_at(t2) < w2.x_at(t2)))
    throw std::invalid_argument("cylinder_balance: crossing walls");

  auto eta_integral = [&](double t) {
    PiecewiseConstant u = sol.sample(t);
    double a = w1.x_at(t), b = w2.x_at(t);
    double acc = 0.0, cur = a;
    std::size_t i = 0;
    while (i < u.xs.size() && u.xs[i] <= a) ++i;
    for (; i < u.xs.size() && u.xs[i] < b; ++i) {
      acc += pair.eta(u.vals[i]) * (u.xs[i] - cur);
      cur = u.xs[i];
    }
    acc += pair.eta(u.vals[i]) * (b - cur);
    return acc;
  };

  double Q1 = pair.q(w1.value) - w1.slope * pair.eta(w1.value);
  double Q2 = pair.q(w2.value) - w2.slope * pair.eta(w2.value);

  double mu = 0.0;
  for (const Front& f : sol.fronts) {
    double lo = std::max(f.t_birth, t1);
    double hi = std::min(f.t_death, t2);
    if (!(lo < hi)) continue;
    double m = 0.5 * (lo + hi);
    bool inside = f.x_at(m) > w1.x_at(m) && f.x_at(m) < w2.x_at(m);
    bool inside_lo = f.x_at(lo) >= w1.x_at(lo) - 1e-12 && f.x_at(lo) <= w2.x_at(lo) + 1e-12;
    bool inside_hi = f.x_at(hi) >= w1.x_at(hi) - 1e-12 && f.x_at(hi) <= w2.x_at(hi) + 1e-12;
    if (inside && !(inside_lo && inside_hi))
      throw std::invalid_argument("cylinder_balance: front crosses a wall");
    if (inside) mu += front_dissipation(f, pair).rate * (hi - lo);
  }
  return eta_integral(t2) - eta_integral(t1) + (t2 - t1) * (Q2 - Q1) - mu;
}

double initial_trace_error(const FTSolution& sol, double t, double L) {
  return integrate_pair(sol.sample(t), sol.initial, -L, L,
                        [](double a, double b) { return std::abs(a - b); });
}

}  // namespace charflow
