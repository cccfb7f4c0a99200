#include "charflow/channel.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>

namespace charflow {

double Polyline::eval(double t) const {
  if (t <= ts.front()) return xs.front();
  if (t >= ts.back()) return xs.back();
  std::size_t i =
      static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
  double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
  return xs[i - 1] + w * (xs[i] - xs[i - 1]);
}

double Polyline::lipschitz() const {
  double L = 0.0;
  for (std::size_t i = 1; i < ts.size(); ++i)
    L = std::max(L, std::abs((xs[i] - xs[i - 1]) / (ts[i] - ts[i - 1])));
  return L;
}

void ChannelProblem::validate() const {
  if (gamma1.ts.size() < 2 || gamma2.ts.size() < 2)
    throw std::invalid_argument("channel: boundaries need at least two vertices");
  if (gamma1.ts.front() != 0.0 || gamma2.ts.front() != 0.0)
    throw std::invalid_argument("channel: boundaries must start at t = 0");
  if (gamma1.xs.front() != gamma2.xs.front())
    throw std::invalid_argument("channel: boundaries must share the apex");
  if (gamma1.t_end() != gamma2.t_end())
    throw std::invalid_argument("channel: boundaries must share the horizon");
  std::set<double> times(gamma1.ts.begin(), gamma1.ts.end());
  times.insert(gamma2.ts.begin(), gamma2.ts.end());
  bool open_somewhere = false;
  for (double t : times) {
    double lo = gamma1.eval(t), hi = gamma2.eval(t);
    if (lo > hi) throw std::invalid_argument("channel: gamma1 must stay below gamma2");
    if (t > 0.0 && lo < hi) open_somewhere = true;
  }
  if (!open_somewhere) throw std::invalid_argument("channel: degenerate zero-width channel");
}

namespace {

struct Pt {
  double t, x;
};

double cross3(const Pt& a, const Pt& b, const Pt& c) {
  return (b.t - a.t) * (c.x - a.x) - (b.x - a.x) * (c.t - a.t);
}

bool same_pt(const Pt& a, const Pt& b) { return a.t == b.t && a.x == b.x; }

/// Terminal slope of the taut path from `start` through the vertical portals
/// to `target`; classic funnel sweep, exact for polyline boundaries.
double funnel_terminal_slope(const std::vector<Pt>& portal_lo, const std::vector<Pt>& portal_hi,
                             const Pt& start, const Pt& target) {
  const int m = static_cast<int>(portal_lo.size());
  Pt apex = start, left = start, right = start;
  int li = -1, ri = -1;
  for (int i = 0; i <= m; ++i) {
    Pt L = (i == m) ? target : portal_hi[static_cast<std::size_t>(i)];
    Pt R = (i == m) ? target : portal_lo[static_cast<std::size_t>(i)];
    if (cross3(apex, right, R) >= 0.0) {
      if (same_pt(apex, right) || same_pt(left, R) || cross3(apex, left, R) < 0.0) {
        right = R;
        ri = i;
      } else {
        apex = left;
        right = left;
        ri = li;
        i = li;
        continue;
      }
    }
    if (cross3(apex, left, L) <= 0.0) {
      if (same_pt(apex, left) || same_pt(right, L) || cross3(apex, right, L) > 0.0) {
        left = L;
        li = i;
      } else {
        apex = right;
        left = right;
        li = ri;
        i = ri;
        continue;
      }
    }
  }
  return (target.x - apex.x) / (target.t - apex.t);
}

Polyline reflect(const Polyline& p) {
  Polyline out = p;
  for (double& x : out.xs) x = -x;
  return out;
}

}  // namespace

ChannelSolution::ChannelSolution(ChannelProblem p)
    : prob_(std::move(p)),
      env_{},
      g_{Envelope{EnvelopeKind::convex, 0.0, 1.0, {0.0, 1.0}, {0.0, 0.0}, {0.0}}} {
  prob_.validate();
  if (prob_.a > prob_.b) {
    mirrored_ = true;
    ChannelProblem m;
    m.gamma1 = reflect(prob_.gamma2);
    m.gamma2 = reflect(prob_.gamma1);
    m.a = prob_.b;
    m.b = prob_.a;
    std::vector<double> neg = prob_.flux.values();
    for (double& v : neg) v = -v;
    m.flux = PLFlux(prob_.flux.k(), prob_.flux.u_min(), std::move(neg));
    prob_ = std::move(m);
  }
  if (prob_.a == prob_.b) {
    degenerate_ = true;
    lam_min_ = lam_max_ = prob_.flux.deriv(prob_.a);
    return;
  }
  env_ = envelope(prob_.flux, prob_.a, prob_.b, EnvelopeKind::convex);
  g_ = PseudoInverse(env_);
  lam_min_ = g_.lambda_min();
  lam_max_ = g_.lambda_max();
}

double ChannelSolution::v_inner(double t, double x) const {
  if (!(t > 0.0) || t > prob_.gamma1.t_end())
    throw std::domain_error("channel query outside time range");
  double lo = prob_.gamma1.eval(t), hi = prob_.gamma2.eval(t);
  if (!(x > lo) || !(x < hi)) throw std::domain_error("channel query outside open channel");
  std::set<double> times;
  for (double s : prob_.gamma1.ts)
    if (s > 0.0 && s < t) times.insert(s);
  for (double s : prob_.gamma2.ts)
    if (s > 0.0 && s < t) times.insert(s);
  std::vector<Pt> plo, phi;
  for (double s : times) {
    plo.push_back({s, prob_.gamma1.eval(s)});
    phi.push_back({s, prob_.gamma2.eval(s)});
  }
  Pt start{0.0, prob_.gamma1.xs.front()};
  return funnel_terminal_slope(plo, phi, start, {t, x});
}

double ChannelSolution::v(double t, double x) const {
  if (mirrored_) return -v_inner(t, -x);
  return v_inner(t, x);
}

double ChannelSolution::u(double t, double x) const {
  double w;
  if (degenerate_) {
    v_inner(t, mirrored_ ? -x : x);  // still validate the query point
    return prob_.a;
  }
  double vv = v_inner(t, mirrored_ ? -x : x);
  if (vv <= lam_min_)
    w = prob_.a;
  else if (vv >= lam_max_)
    w = prob_.b;
  else
    w = g_(vv);
  return w;
}

std::pair<double, double> ChannelSolution::gamma_pm(double t, double tol) const {
  double lo = prob_.gamma1.eval(t), hi = prob_.gamma2.eval(t);
  if (!(lo < hi)) return mirrored_ ? std::pair{-hi, -hi} : std::pair{lo, lo};
  double span = hi - lo;
  double eps = std::max(tol, 1e-15 * std::max(1.0, std::abs(lo) + span));

  auto above_a = [&](double x) { return u(t, mirrored_ ? -x : x) > prob_.a; };
  auto below_b = [&](double x) { return u(t, mirrored_ ? -x : x) < prob_.b; };

  double gm;
  if (!above_a(hi - eps)) {
    gm = hi;
  } else if (above_a(lo + eps)) {
    gm = lo;
  } else {
    double xa = lo + eps, xb = hi - eps;
    while (xb - xa > tol) {
      double xm = 0.5 * (xa + xb);
      (above_a(xm) ? xb : xa) = xm;
    }
    gm = 0.5 * (xa + xb);
  }
  double gp;
  if (!below_b(lo + eps)) {
    gp = lo;
  } else if (below_b(hi - eps)) {
    gp = hi;
  } else {
    double xa = lo + eps, xb = hi - eps;
    while (xb - xa > tol) {
      double xm = 0.5 * (xa + xb);
      (below_b(xm) ? xa : xb) = xm;
    }
    gp = 0.5 * (xa + xb);
  }
  if (mirrored_) return {-gp, -gm};
  return {gm, gp};
}

ChannelRegion ChannelSolution::region(double t, double x) const {
  auto [gm, gp] = gamma_pm(t);
  if (x < gm) return mirrored_ ? ChannelRegion::upper : ChannelRegion::lower;
  if (x > gp) return mirrored_ ? ChannelRegion::lower : ChannelRegion::upper;
  return ChannelRegion::middle;
}

}  // namespace charflow
