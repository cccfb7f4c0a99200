#include "charflow/lagrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace charflow {

namespace {

double eval_polyline(const std::vector<double>& ts, const std::vector<double>& xs, double t) {
  if (t <= ts.front()) return xs.front();
  if (t >= ts.back()) return xs.back();
  std::size_t i =
      static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
  double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
  return xs[i - 1] + w * (xs[i] - xs[i - 1]);
}

bool front_entered_left(const PLFlux& f, const Front& fr) {
  return f.deriv_range(fr.u_left).second > fr.speed;
}
bool front_entered_right(const PLFlux& f, const Front& fr) {
  return f.deriv_range(fr.u_right).first < fr.speed;
}
bool front_entered(const PLFlux& f, const Front& fr) {
  return front_entered_left(f, fr) || front_entered_right(f, fr);
}

struct Tracer {
  const FTSolution& sol;
  const PLFlux& flux;
  double horizon;

  BoundaryCurve ride(const Front* start, double w_report, double w_track, double t0, double x0,
                     bool from_jump) const {
    BoundaryCurve c;
    c.w = w_report;
    c.from_jump = from_jump;
    c.ts = {t0};
    c.xs = {x0};
    const Front* cur = start;
    double w = w_track;
    double tcur = t0;
    while (true) {
      double tend = std::min(cur->t_death, horizon);
      c.stretches.push_back({tcur, tend, cur->id, w});
      c.ts.push_back(tend);
      c.xs.push_back(cur->x_at(tend));
      if (cur->t_death >= horizon) break;
      const Interaction& ev = sol.events[static_cast<std::size_t>(cur->death_event)];
      tcur = ev.t;
      const Front* next = nullptr;
      for (int oid : ev.outgoing) {
        const Front& of = sol.fronts[static_cast<std::size_t>(oid)];
        double lo = std::min(of.u_left, of.u_right), hi = std::max(of.u_left, of.u_right);
        if (w > lo && w < hi) {
          next = &of;
          break;
        }
      }
      if (next) {
        cur = next;
        continue;
      }
      if (ev.outgoing.empty()) {
        append_straight(c, ev.t, ev.x, ev.outer_left);
        return c;
      }
      // tracking value cancelled: follow the surviving end nearest its slot
      bool ascending = ev.outer_left < ev.outer_right;
      bool above = w > std::max(ev.outer_left, ev.outer_right);
      const Front& pick = sol.fronts[static_cast<std::size_t>(
          above == ascending ? ev.outgoing.back() : ev.outgoing.front())];
      double end = above ? std::max(ev.outer_left, ev.outer_right)
                         : std::min(ev.outer_left, ev.outer_right);
      double other = (end == pick.u_left) ? pick.u_right : pick.u_left;
      w = end + 0.5 * flux.h() * ((other > end) ? 1.0 : -1.0);
      cur = &pick;
    }
    return c;
  }

  void append_straight(BoundaryCurve& c, double t0, double x0, double value) const {
    double tcur = t0, xcur = x0, u = value;
    while (tcur < horizon) {
      double slope = flux.deriv(u);
      double best_t = horizon;
      const Front* hit = nullptr;
      for (const Front& fr : sol.fronts) {
        if (fr.speed == slope) continue;
        double base = xcur - slope * tcur;
        double fbase = fr.x_birth - fr.speed * fr.t_birth;
        double tc = (fbase - base) / (slope - fr.speed);
        double guard = 1e-12 * std::max(1.0, std::abs(tcur));
        if (tc <= tcur + guard) continue;
        if (tc < fr.t_birth || tc >= fr.t_death) continue;
        if (tc < best_t) {
          best_t = tc;
          hit = &fr;
        }
      }
      c.stretches.push_back({tcur, best_t, -1, u});
      c.ts.push_back(best_t);
      c.xs.push_back(xcur + slope * (best_t - tcur));
      if (!hit) return;
      // entering side decides the tracking slot on the front
      bool from_left = slope > hit->speed;
      double endv = from_left ? hit->u_left : hit->u_right;
      double other = from_left ? hit->u_right : hit->u_left;
      double w = endv + 0.5 * flux.h() * ((other > endv) ? 1.0 : -1.0);
      BoundaryCurve tail = ride(hit, c.w, w, best_t, c.xs.back(), c.from_jump);
      for (std::size_t q = 1; q < tail.ts.size(); ++q) {
        c.ts.push_back(tail.ts[q]);
        c.xs.push_back(tail.xs[q]);
      }
      for (const auto& s : tail.stretches) c.stretches.push_back(s);
      return;
    }
  }

  BoundaryCurve trace_jump(const Front* f0, double w) const {
    double endv = w;  // w sits strictly inside one grid cell of the fan front
    (void)endv;
    return ride(f0, w, w, f0->t_birth, f0->x_birth, true);
  }

  BoundaryCurve trace_char(double x0, double value) const {
    BoundaryCurve c;
    c.w = value;
    c.from_jump = false;
    c.ts = {0.0};
    c.xs = {x0};
    append_straight(c, 0.0, x0, value);
    return c;
  }
};

}  // namespace

double BoundaryCurve::eval(double t) const { return eval_polyline(ts, xs, t); }

double BoundaryCurve::slope_at(double t) const {
  if (ts.size() < 2) return 0.0;
  std::size_t i =
      static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
  i = std::max<std::size_t>(1, std::min(i, ts.size() - 1));
  return (xs[i] - xs[i - 1]) / (ts[i] - ts[i - 1]);
}

BoundaryFamily build_family(const FTSolution& sol, int w_resolution, int chars_per_cell) {
  if (w_resolution < 1) throw std::invalid_argument("build_family: w_resolution >= 1");
  if (chars_per_cell < 1) throw std::invalid_argument("build_family: chars_per_cell >= 1");
  BoundaryFamily fam;
  fam.sol = sol;
  const PLFlux& flux = fam.sol.flux;
  const double h = flux.h();
  Tracer tracer{fam.sol, flux, fam.sol.horizon};

  // value curves through every initial fan front
  for (const Front& f : fam.sol.fronts) {
    if (f.t_birth != 0.0 || f.birth_event != -1) continue;
    double lo = std::min(f.u_left, f.u_right), hi = std::max(f.u_left, f.u_right);
    std::size_t ncell = flux.node_index(hi) - flux.node_index(lo);
    for (std::size_t cidx = 0; cidx < ncell; ++cidx) {
      double cell_lo = lo + h * static_cast<double>(cidx);
      for (int s = 1; s <= w_resolution; ++s) {
        double w = cell_lo + h * static_cast<double>(s) / static_cast<double>(w_resolution + 1);
        fam.curves.push_back(tracer.trace_jump(&f, w));
      }
    }
  }

  // straight characteristics seeded inside every initial cell
  const PiecewiseConstant& u0 = fam.sol.initial;
  double span = 1.0 + flux.max_abs_deriv() * fam.sol.horizon;
  double wlo = (u0.xs.empty() ? 0.0 : u0.xs.front()) - span;
  double whi = (u0.xs.empty() ? 0.0 : u0.xs.back()) + span;
  std::vector<double> edges{wlo};
  edges.insert(edges.end(), u0.xs.begin(), u0.xs.end());
  edges.push_back(whi);
  for (std::size_t c = 0; c + 1 < edges.size(); ++c) {
    double a = edges[c], b = edges[c + 1];
    for (int s = 0; s < chars_per_cell; ++s) {
      double x0 = a + (b - a) * (static_cast<double>(s) + 0.5) / static_cast<double>(chars_per_cell);
      fam.curves.push_back(tracer.trace_char(x0, u0.vals[c]));
    }
  }

  // total order: lexicographic positions over the merged time ladder
  std::set<double> ladder_set{0.0, fam.sol.horizon};
  for (const BoundaryCurve& c : fam.curves) ladder_set.insert(c.ts.begin(), c.ts.end());
  std::vector<double> ladder(ladder_set.begin(), ladder_set.end());
  std::vector<std::size_t> order(fam.curves.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<std::vector<double>> keys(fam.curves.size());
  for (std::size_t i = 0; i < fam.curves.size(); ++i) {
    keys[i].reserve(ladder.size() + 1);
    for (double t : ladder) keys[i].push_back(fam.curves[i].eval(t));
    keys[i].push_back(fam.curves[i].w);
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<BoundaryCurve> sorted;
  sorted.reserve(fam.curves.size());
  for (std::size_t i : order) sorted.push_back(std::move(fam.curves[i]));
  fam.curves = std::move(sorted);

  // geometry classes: identical position along the whole ladder
  int next_geom = 0;
  for (std::size_t i = 0; i < fam.curves.size(); ++i) {
    if (i == 0) {
      fam.curves[i].geom = next_geom;
      continue;
    }
    bool same = true;
    for (double t : ladder)
      if (fam.curves[i].eval(t) != fam.curves[i - 1].eval(t)) {
        same = false;
        break;
      }
    fam.curves[i].geom = same ? fam.curves[i - 1].geom : ++next_geom;
  }

  // terminal times: first stretch whose host no longer carries w
  for (BoundaryCurve& c : fam.curves) {
    c.terminal = fam.sol.horizon;
    for (const auto& s : c.stretches) {
      bool ok;
      if (s.front_id >= 0) {
        const Front& fr = fam.sol.fronts[static_cast<std::size_t>(s.front_id)];
        ok = c.w >= std::min(fr.u_left, fr.u_right) && c.w <= std::max(fr.u_left, fr.u_right);
      } else {
        ok = c.w == s.value;
      }
      if (!ok) {
        c.terminal = s.t0;
        break;
      }
    }
  }

  // straightness and first-touch times
  std::map<double, std::set<int>> birth_geoms;
  for (const BoundaryCurve& c : fam.curves) birth_geoms[c.xs.front()].insert(c.geom);
  for (BoundaryCurve& c : fam.curves) {
    double t_aff = fam.sol.horizon;
    for (std::size_t i = 2; i < c.ts.size(); ++i) {
      double s0 = (c.xs[i - 1] - c.xs[i - 2]) / (c.ts[i - 1] - c.ts[i - 2]);
      double s1 = (c.xs[i] - c.xs[i - 1]) / (c.ts[i] - c.ts[i - 1]);
      if (std::abs(s1 - s0) > 1e-13 * std::max(1.0, std::abs(s0))) {
        t_aff = c.ts[i - 1];
        break;
      }
    }
    double t_touch = fam.sol.horizon;
    if (birth_geoms[c.xs.front()].size() >= 2) t_touch = 0.0;
    for (const auto& s : c.stretches) {
      if (s.t0 >= t_touch) break;
      if (s.front_id >= 0) {
        const Front& fr = fam.sol.fronts[static_cast<std::size_t>(s.front_id)];
        if (front_entered(flux, fr)) {
          t_touch = std::min(t_touch, s.t0);
          break;
        }
        if (s.t1 < fam.sol.horizon) t_touch = std::min(t_touch, s.t1);  // interaction point
      } else {
        if (s.t1 < fam.sol.horizon) t_touch = std::min(t_touch, s.t1);  // dies into a front
      }
    }
    c.straight_until = std::min(t_aff, t_touch);
  }

  // region values between consecutive curves
  fam.between.assign(fam.curves.size() + 1, fam.sol.left_state);
  if (!fam.curves.empty()) {
    fam.between.front() = fam.sol.left_state;
    fam.between.back() = fam.sol.initial.right_value();
    for (std::size_t i = 0; i + 1 < fam.curves.size(); ++i) {
      const BoundaryCurve& a = fam.curves[i];
      const BoundaryCurve& b = fam.curves[i + 1];
      double val = a.w;
      bool found = false;
      for (double t : ladder) {
        double ga = a.eval(t), gb = b.eval(t);
        if (gb - ga > 1e-9 * std::max(1.0, std::abs(ga) + std::abs(gb))) {
          val = fam.sol.sample(t)(0.5 * (ga + gb));
          found = true;
          break;
        }
      }
      if (!found) val = a.w;  // permanent plateau: the weight never enters a sum
      fam.between[i + 1] = val;
    }
  }

  fam.ref_eps = 0.5 * fam.sol.horizon;
  fam.ld = ld_components(flux, default_ld_tol(flux));
  return fam;
}

namespace {

int ld_index(const std::vector<LDComponent>& ld, double u) {
  for (std::size_t i = 0; i < ld.size(); ++i)
    if (ld[i].contains(u)) return static_cast<int>(i);
  return -1;
}

}  // namespace

RegionLabel BoundaryFamily::classify(double t, double x) const {
  double width = 1.0;
  if (!curves.empty())
    width = std::max(1.0, curves.back().eval(t) - curves.front().eval(t));
  const double tol = 1e-9 * width;

  std::vector<std::size_t> on;
  std::set<int> on_geoms;
  std::vector<double> pos(curves.size());
  for (std::size_t i = 0; i < curves.size(); ++i) {
    pos[i] = curves[i].eval(t);
    if (std::abs(pos[i] - x) <= tol) {
      on.push_back(i);
      on_geoms.insert(curves[i].geom);
    }
  }
  if (on_geoms.size() >= 2) return {Region::A1, true};

  PiecewiseConstant ut = sol.sample(t);
  auto jump_here = [&]() {
    for (double bp : ut.xs)
      if (std::abs(bp - x) <= tol) return true;
    return false;
  };

  // B: tightest strictly sandwiching pair that coincided earlier
  long L = -1, R = -1;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (pos[i] < x - tol) L = static_cast<long>(i);
    if (pos[i] > x + tol) {
      R = static_cast<long>(i);
      break;
    }
  }
  if (L >= 0 && R >= 0) {
    const BoundaryCurve& cl = curves[static_cast<std::size_t>(L)];
    const BoundaryCurve& cr = curves[static_cast<std::size_t>(R)];
    std::set<double> times(cl.ts.begin(), cl.ts.end());
    times.insert(cr.ts.begin(), cr.ts.end());
    double min_gap = std::numeric_limits<double>::infinity();
    for (double s : times)
      if (s < t) min_gap = std::min(min_gap, cr.eval(s) - cl.eval(s));
    if (min_gap <= tol) return {Region::B, jump_here()};
  }

  if (!on.empty()) {
    const BoundaryCurve& c = curves[on.front()];
    if (t < c.straight_until) {
      bool jmp = false;
      // on a front: different linearly degenerate components dissipate
      for (const auto& s : c.stretches) {
        if (s.t0 <= t && t <= s.t1 && s.front_id >= 0) {
          const Front& fr = sol.fronts[static_cast<std::size_t>(s.front_id)];
          int il = ld_index(ld, fr.u_left), ir = ld_index(ld, fr.u_right);
          jmp = (il < 0 || ir < 0 || il != ir);
        }
      }
      return {Region::C, jmp};
    }
    return {Region::A2, true};
  }

  // off every sampled curve: the virtual characteristic through (t, x)
  double u = ut(x);
  double slope = sol.flux.deriv(u);
  for (const Front& fr : sol.fronts) {
    if (fr.speed == slope) continue;
    double base = x - slope * t;
    double fbase = fr.x_birth - fr.speed * fr.t_birth;
    double tc = (fbase - base) / (slope - fr.speed);
    if (tc > 1e-12 && tc < t - 1e-12 && tc >= fr.t_birth && tc < fr.t_death)
      return {Region::A2, true};
  }
  return {Region::C, false};
}

double BoundaryFamily::representation_residual(double t,
                                               const std::function<double(double)>& phi) const {
  PiecewiseConstant ut = sol.sample(t);
  double lhs = 0.0;
  double prev_phi = 0.0;  // phi vanishes at -infinity
  for (std::size_t i = 0; i < ut.xs.size(); ++i) {
    double p = phi(ut.xs[i]);
    lhs += ut.vals[i] * (p - prev_phi);
    prev_phi = p;
  }
  lhs += ut.vals.back() * (0.0 - prev_phi);

  double rhs = 0.0;
  prev_phi = 0.0;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    double p = phi(curves[i].eval(t));
    rhs += between[i] * (p - prev_phi);
    prev_phi = p;
  }
  rhs += between.back() * (0.0 - prev_phi);
  return std::abs(lhs - rhs);
}

double BoundaryFamily::characteristic_residual(std::size_t i, double t1, double t2) const {
  const BoundaryCurve& c = curves[i];
  double acc = 0.0;
  for (const auto& s : c.stretches) {
    double lo = std::max(s.t0, t1), hi = std::min(s.t1, t2);
    if (!(lo < hi)) continue;
    double seg_slope = (c.eval(s.t1) - c.eval(s.t0)) / (s.t1 - s.t0);
    double lambda;
    if (s.front_id >= 0) {
      const Front& fr = sol.fronts[static_cast<std::size_t>(s.front_id)];
      lambda = wave_speed(sol.flux, fr.u_left, fr.u_right);
    } else {
      lambda = sol.flux.deriv(s.value);
    }
    acc += std::abs(seg_slope - lambda) * (hi - lo);
  }
  return acc;
}

double BoundaryFamily::admissibility_violation(std::size_t i, double T) const {
  const BoundaryCurve& c = curves[i];
  double worst = 0.0;
  double cap = std::min(T, c.terminal);
  const PLFlux& f = sol.flux;
  std::vector<double> ks;
  for (std::size_t j = 0; j < f.node_count(); ++j) {
    ks.push_back(f.node(j));
    if (j + 1 < f.node_count()) ks.push_back(f.node(j) + 0.5 * f.h());
  }
  for (const auto& s : c.stretches) {
    double lo = s.t0, hi = std::min(s.t1, cap);
    if (!(lo < hi)) continue;
    double tm = 0.5 * (lo + hi);
    double xm = c.eval(tm);
    double gdot = (c.eval(s.t1) - c.eval(s.t0)) / (s.t1 - s.t0);
    double um, up;
    if (s.front_id >= 0) {
      const Front& fr = sol.fronts[static_cast<std::size_t>(s.front_id)];
      um = fr.u_left;
      up = fr.u_right;
    } else {
      um = up = s.value;
    }
    (void)xm;
    for (double k : ks) {
      auto etap = [&](double u) { return std::max(u - k, 0.0); };
      auto etam = [&](double u) { return std::max(k - u, 0.0); };
      auto qp = [&](double u) { return u >= k ? f.eval(u) - f.eval(k) : 0.0; };
      auto qm = [&](double u) { return u <= k ? f.eval(k) - f.eval(u) : 0.0; };
      if (k >= c.w) {
        worst = std::max(worst, -(-gdot * etap(um) + qp(um)));  // right boundary: >= 0
        worst = std::max(worst, -gdot * etap(up) + qp(up));     // left boundary: <= 0
      }
      if (k <= c.w) {
        worst = std::max(worst, -(-gdot * etam(um) + qm(um)));
        worst = std::max(worst, -gdot * etam(up) + qm(up));
      }
    }
  }
  return worst;
}

std::vector<CSegment> cylinder_extract(const BoundaryFamily& fam, double T, double eps) {
  if (!(T > 2.0 * eps) || !(eps > 0.0))
    throw std::invalid_argument("cylinder_extract: need T > 2 eps > 0");
  std::vector<CSegment> out;
  std::set<int> seen_geoms;
  for (std::size_t i = 0; i < fam.curves.size(); ++i) {
    const BoundaryCurve& c = fam.curves[i];
    if (c.straight_until < T) continue;
    if (seen_geoms.count(c.geom)) continue;
    seen_geoms.insert(c.geom);
    CSegment s;
    s.curve = i;
    s.y = c.eval(eps);
    s.lambda = (c.eval(T) - c.eval(0.0)) / T;
    s.value = c.w;
    s.F = fam.sol.flux.eval(s.value) - s.lambda * s.value;
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const CSegment& a, const CSegment& b) { return a.y < b.y; });
  return out;
}

double segment_Q(const CSegment& s, const EntropyPair& pair) {
  return pair.q(s.value) - s.lambda * pair.eta(s.value);
}

}  // namespace charflow
