#include "charflow/fronttrack.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace charflow {

namespace {

constexpr double kTimeTol = 1e-12;
constexpr std::size_t kMaxEvents = 10'000'000;

double collision_time(const Front& l, const Front& r) {
  if (!(l.speed > r.speed)) return std::numeric_limits<double>::infinity();
  // positions equal: l.x_birth + sl (t - l.t_birth) = r.x_birth + sr (t - r.t_birth)
  double num = (r.x_birth - r.speed * r.t_birth) - (l.x_birth - l.speed * l.t_birth);
  return num / (l.speed - r.speed);
}

void push_candidate(FTState& st, std::priority_queue<FTState::Cand>& pq, int li, int ri,
                    double now) {
  if (li < 0 || ri < 0) return;
  const Front& l = st.fronts[static_cast<std::size_t>(li)];
  const Front& r = st.fronts[static_cast<std::size_t>(ri)];
  double tc = collision_time(l, r);
  if (!std::isfinite(tc)) return;
  if (tc < now - kTimeTol) {
    std::ostringstream d;
    d << "collision in the past: fronts " << li << "," << ri << " tc=" << tc << " now=" << now;
    throw InternalSolverError("event queue inconsistency", d.str());
  }
  pq.push({std::max(tc, now), li, ri});
}

}  // namespace

PiecewiseConstant FTSolution::sample(double t) const {
  if (t < 0.0 || t > horizon + kTimeTol) throw std::invalid_argument("sample: time outside horizon");
  struct Item {
    double x, speed, ul, ur;
  };
  std::vector<Item> items;
  for (const Front& f : fronts)
    if (f.alive_at(t)) items.push_back({f.x_at(t), f.speed, f.u_left, f.u_right});
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.speed < b.speed;
  });
  PiecewiseConstant out;
  out.xs.clear();
  out.vals = {left_state};
  for (const Item& it : items) {
    if (!out.xs.empty() && it.x == out.xs.back()) {
      out.vals.back() = it.ur;  // coincident fronts chain through
    } else {
      out.xs.push_back(it.x);
      out.vals.push_back(it.ur);
    }
  }
  return out;
}

double FTSolution::conserved_integral(double t) const {
  PiecewiseConstant u = sample(t);
  if (u.xs.empty()) return 0.0;
  return u.integral_minus(left_state, u.xs.front() - 1.0, u.xs.back() + 1.0);
}

FTState ft_init(const PLFlux& flux, const PiecewiseConstant& u0) {
  FTState st;
  st.flux = flux;
  st.initial = u0.simplified();
  st.left_state = st.initial.left_value();
  for (double v : st.initial.vals)
    if (!flux.on_grid(v)) throw std::invalid_argument("ft_init: initial value off the flux grid");
  int prev_tail = -1;
  for (std::size_t j = 0; j < st.initial.xs.size(); ++j) {
    WaveFan fan =
        solve_riemann(flux, st.initial.vals[j], st.initial.vals[j + 1], OffGridPolicy::strict);
    for (const Wave& w : fan.waves) {
      Front f;
      f.id = static_cast<int>(st.fronts.size());
      f.t_birth = 0.0;
      f.x_birth = st.initial.xs[j];
      f.u_left = w.u_before;
      f.u_right = w.u_after;
      f.speed = w.speed;
      st.fronts.push_back(f);
      st.prev_of.push_back(prev_tail);
      st.next_of.push_back(-1);
      if (prev_tail >= 0)
        st.next_of[static_cast<std::size_t>(prev_tail)] = f.id;
      else
        st.head = f.id;
      prev_tail = f.id;
    }
  }
  return st;
}

FTSolution ft_evolve(FTState st, double T) {
  if (!(T > st.time)) throw std::invalid_argument("ft_evolve: T must exceed current time");
  std::priority_queue<FTState::Cand> pq;
  for (int i = st.head; i >= 0; i = st.next_of[static_cast<std::size_t>(i)])
    push_candidate(st, pq, i, st.next_of[static_cast<std::size_t>(i)], st.time);

  auto alive = [&](int id) {
    return !std::isfinite(st.fronts[static_cast<std::size_t>(id)].t_death) ? true : false;
  };

  std::size_t processed = 0;
  while (!pq.empty()) {
    FTState::Cand c = pq.top();
    if (c.t > T) break;
    pq.pop();
    if (!alive(c.left) || !alive(c.right)) continue;
    if (st.next_of[static_cast<std::size_t>(c.left)] != c.right) continue;

    double tc = c.t;
    double xc = st.fronts[static_cast<std::size_t>(c.left)].x_at(tc);
    double scale = std::max({1.0, std::abs(xc), std::abs(tc)});
    double postol = 1e-12 * scale;

    // Gather every adjacent front meeting this point (merged simultaneous
    // interactions resolve through a single fan of the outer states).
    int lo = c.left, hi = c.right;
    while (true) {
      int p = st.prev_of[static_cast<std::size_t>(lo)];
      if (p >= 0 && std::abs(st.fronts[static_cast<std::size_t>(p)].x_at(tc) - xc) <= postol)
        lo = p;
      else
        break;
    }
    while (true) {
      int n = st.next_of[static_cast<std::size_t>(hi)];
      if (n >= 0 && std::abs(st.fronts[static_cast<std::size_t>(n)].x_at(tc) - xc) <= postol)
        hi = n;
      else
        break;
    }

    Interaction ev;
    ev.id = static_cast<int>(st.events.size());
    ev.t = tc;
    ev.x = xc;
    double umin = 0.0, umax = 0.0;
    for (int i = lo;; i = st.next_of[static_cast<std::size_t>(i)]) {
      Front& f = st.fronts[static_cast<std::size_t>(i)];
      ev.incoming.push_back(i);
      if (i == lo) {
        umin = std::min(f.u_left, f.u_right);
        umax = std::max(f.u_left, f.u_right);
      } else {
        umin = std::min(umin, std::min(f.u_left, f.u_right));
        umax = std::max(umax, std::max(f.u_left, f.u_right));
      }
      f.t_death = tc;
      f.x_death = xc;
      f.death_event = ev.id;
      if (i == hi) break;
    }
    ev.outer_left = st.fronts[static_cast<std::size_t>(lo)].u_left;
    ev.outer_right = st.fronts[static_cast<std::size_t>(hi)].u_right;

    int before = st.prev_of[static_cast<std::size_t>(lo)];
    int after = st.next_of[static_cast<std::size_t>(hi)];

    WaveFan fan = solve_riemann(st.flux, ev.outer_left, ev.outer_right, OffGridPolicy::strict);
    double omin = std::min(ev.outer_left, ev.outer_right);
    double omax = std::max(ev.outer_left, ev.outer_right);
    if (umin < omin) ev.cancelled.push_back({umin, omin});
    if (umax > omax) ev.cancelled.push_back({omax, umax});

    int link_prev = before;
    for (const Wave& w : fan.waves) {
      Front f;
      f.id = static_cast<int>(st.fronts.size());
      f.t_birth = tc;
      f.x_birth = xc;
      f.u_left = w.u_before;
      f.u_right = w.u_after;
      f.speed = w.speed;
      f.birth_event = ev.id;
      ev.outgoing.push_back(f.id);
      st.fronts.push_back(f);
      st.prev_of.push_back(link_prev);
      st.next_of.push_back(-1);
      if (link_prev >= 0)
        st.next_of[static_cast<std::size_t>(link_prev)] = f.id;
      else
        st.head = f.id;
      link_prev = f.id;
    }
    if (link_prev >= 0)
      st.next_of[static_cast<std::size_t>(link_prev)] = after;
    else
      st.head = after;
    if (after >= 0) st.prev_of[static_cast<std::size_t>(after)] = link_prev;

    st.events.push_back(std::move(ev));
    st.time = tc;

    // New adjacencies: fan speeds are strictly increasing, so only the two
    // outer pairs can collide.
    if (!fan.waves.empty()) {
      int first_new = st.events.back().outgoing.front();
      int last_new = st.events.back().outgoing.back();
      if (before >= 0) push_candidate(st, pq, before, first_new, tc);
      if (after >= 0) push_candidate(st, pq, last_new, after, tc);
    } else {
      if (before >= 0 && after >= 0) push_candidate(st, pq, before, after, tc);
    }

    if (++processed > kMaxEvents)
      throw InternalSolverError("event budget exhausted", "events=" + std::to_string(processed));
  }

  FTSolution sol;
  sol.flux = st.flux;
  sol.initial = st.initial;
  sol.horizon = T;
  sol.left_state = st.left_state;
  sol.fronts = std::move(st.fronts);
  sol.events = std::move(st.events);
  return sol;
}

FTSolution ft_run(const PLFlux& flux, const PiecewiseConstant& u0, double T) {
  return ft_evolve(ft_init(flux, u0), T);
}

double ft_l1_distance(const FTSolution& a, const FTSolution& b, double t) {
  return l1_distance(a.sample(t), b.sample(t));
}

}  // namespace charflow
