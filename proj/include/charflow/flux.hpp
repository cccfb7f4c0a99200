#ifndef CHARFLOW_FLUX_HPP_
#define CHARFLOW_FLUX_HPP_

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace charflow {

/// A smooth flux carried as an evaluation procedure plus its analytic
/// derivative, restricted to a closed interval of states.
struct SmoothFlux {
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  double u_lo = -1.0;
  double u_hi = 1.0;
};

inline SmoothFlux burgers_flux(double u_lo = -4.0, double u_hi = 4.0) {
  return {[](double u) { return 0.5 * u * u; }, [](double u) { return u; }, u_lo, u_hi};
}

inline SmoothFlux cubic_flux(double u_lo = -2.0, double u_hi = 2.0) {
  return {[](double u) { return u * u * u; }, [](double u) { return 3.0 * u * u; }, u_lo, u_hi};
}

/// Piecewise-linear flux interpolating node values on the dyadic grid
/// u_min + i * 2^-k.  Evaluation between nodes is the linear interpolant;
/// node values are reproduced exactly.
class PLFlux {
 public:
  PLFlux() = default;
  PLFlux(int k, double u_min, std::vector<double> values) : k_(k), u_min_(u_min), values_(std::move(values)) {
    if (k < 0) throw std::invalid_argument("PLFlux: k must be nonnegative");
    if (values_.size() < 2) throw std::invalid_argument("PLFlux: need at least two nodes");
    h_ = std::ldexp(1.0, -k);
    if (!is_aligned(u_min_)) throw std::invalid_argument("PLFlux: u_min not grid aligned");
    for (double v : values_)
      if (!std::isfinite(v)) throw std::invalid_argument("PLFlux: non-finite node value");
    slopes_.resize(values_.size() - 1);
    for (std::size_t i = 0; i + 1 < values_.size(); ++i) slopes_[i] = (values_[i + 1] - values_[i]) / h_;
  }

  int k() const { return k_; }
  double h() const { return h_; }
  double u_min() const { return u_min_; }
  double u_max() const { return u_min_ + h_ * static_cast<double>(values_.size() - 1); }
  std::size_t node_count() const { return values_.size(); }
  double node(std::size_t i) const { return u_min_ + h_ * static_cast<double>(i); }
  double node_value(std::size_t i) const { return values_[i]; }
  double cell_slope(std::size_t i) const { return slopes_[i]; }
  const std::vector<double>& values() const { return values_; }

  bool is_aligned(double u) const {
    double s = u / h_;
    return s == std::nearbyint(s) && std::isfinite(s);
  }

  /// Index of the grid node equal to u; throws if u is off-grid or outside.
  std::size_t node_index(double u) const {
    double s = (u - u_min_) / h_;
    double r = std::nearbyint(s);
    if (std::abs(s - r) > 1e-9 || r < 0 || r >= static_cast<double>(values_.size()))
      throw std::invalid_argument("PLFlux: value not on grid: " + std::to_string(u));
    return static_cast<std::size_t>(r);
  }

  bool on_grid(double u) const {
    double s = (u - u_min_) / h_;
    double r = std::nearbyint(s);
    return std::abs(s - r) <= 1e-12 * std::max(1.0, std::abs(s)) && r >= 0 &&
           r < static_cast<double>(values_.size());
  }

  /// Nearest grid value, clamped to the domain.
  double quantize(double u) const {
    double r = std::nearbyint((u - u_min_) / h_);
    r = std::max(0.0, std::min(r, static_cast<double>(values_.size() - 1)));
    return node(static_cast<std::size_t>(r));
  }

  double eval(double u) const {
    double s = (u - u_min_) / h_;
    if (s <= 0.0) return values_.front();
    if (s >= static_cast<double>(values_.size() - 1)) return values_.back();
    double fl = std::floor(s);
    auto i = static_cast<std::size_t>(fl);
    double theta = s - fl;
    if (theta == 0.0) return values_[i];
    return values_[i] + (values_[i + 1] - values_[i]) * theta;
  }

  /// Derivative selection at u: the cell slope in the interior of a cell and
  /// the average of the two adjacent slopes at a node (one-sided at the ends).
  double deriv(double u) const {
    double s = (u - u_min_) / h_;
    double r = std::nearbyint(s);
    if (std::abs(s - r) <= 1e-12 * std::max(1.0, std::abs(s))) {
      auto i = static_cast<long>(r);
      if (i <= 0) return slopes_.front();
      if (i >= static_cast<long>(slopes_.size())) return slopes_.back();
      return 0.5 * (slopes_[i - 1] + slopes_[i]);
    }
    long i = static_cast<long>(std::floor(s));
    i = std::max(0L, std::min(i, static_cast<long>(slopes_.size()) - 1));
    return slopes_[i];
  }

  /// Sub/superdifferential bounds of the derivative at u.
  std::pair<double, double> deriv_range(double u) const {
    double s = (u - u_min_) / h_;
    double r = std::nearbyint(s);
    if (std::abs(s - r) <= 1e-12 * std::max(1.0, std::abs(s))) {
      auto i = static_cast<long>(r);
      double lo = (i <= 0) ? slopes_.front() : slopes_[i - 1];
      double hi = (i >= static_cast<long>(slopes_.size())) ? slopes_.back() : slopes_[i];
      return {std::min(lo, hi), std::max(lo, hi)};
    }
    long i = static_cast<long>(std::floor(s));
    i = std::max(0L, std::min(i, static_cast<long>(slopes_.size()) - 1));
    return {slopes_[i], slopes_[i]};
  }

  double max_abs_deriv() const {
    double m = 0.0;
    for (double s : slopes_) m = std::max(m, std::abs(s));
    return m;
  }

 private:
  int k_ = 0;
  double u_min_ = 0.0;
  double h_ = 1.0;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

/// Samples a smooth flux at the nodes of 2^-k Z over [range_lo, range_hi];
/// the range must be grid aligned.
inline PLFlux build_pl_flux(const SmoothFlux& f, int k, double range_lo, double range_hi) {
  if (k < 0) throw std::invalid_argument("build_pl_flux: k must be nonnegative");
  double h = std::ldexp(1.0, -k);
  double nlo = range_lo / h, nhi = range_hi / h;
  if (nlo != std::nearbyint(nlo) || nhi != std::nearbyint(nhi))
    throw std::invalid_argument("build_pl_flux: range not aligned to 2^-k");
  auto n = static_cast<long>(std::nearbyint(nhi - nlo));
  if (n < 1) throw std::invalid_argument("build_pl_flux: empty range");
  std::vector<double> vals(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) {
    double u = range_lo + h * static_cast<double>(i);
    double v = f.eval(u);
    if (!std::isfinite(v)) throw std::invalid_argument("build_pl_flux: non-finite sample");
    vals[static_cast<std::size_t>(i)] = v;
  }
  return PLFlux(k, range_lo, std::move(vals));
}

enum class EnvelopeKind { convex, concave };

/// The convex (lower) or concave (upper) envelope of a PL flux restricted to
/// the grid-aligned interval [a, b].  Breakpoints are the grid values where
/// the envelope touches the flux; slopes are strictly monotone after merging
/// collinear runs.
struct Envelope {
  EnvelopeKind kind = EnvelopeKind::convex;
  double a = 0.0, b = 0.0;
  std::vector<double> breakpoints;   // touch points, ascending, includes a and b
  std::vector<double> break_values;  // flux values there
  std::vector<double> slopes;        // one per hull segment

  double lambda_min() const { return kind == EnvelopeKind::convex ? slopes.front() : slopes.back(); }
  double lambda_max() const { return kind == EnvelopeKind::convex ? slopes.back() : slopes.front(); }

  double eval(double u) const {
    if (u <= breakpoints.front()) return break_values.front();
    if (u >= breakpoints.back()) return break_values.back();
    std::size_t i = 1;
    while (breakpoints[i] < u) ++i;
    return break_values[i - 1] + slopes[i - 1] * (u - breakpoints[i - 1]);
  }
};

/// Monotone-chain hull over the flux nodes in [a, b]; O(n).
inline Envelope envelope(const PLFlux& f, double a, double b, EnvelopeKind kind) {
  if (!(a < b)) throw std::invalid_argument("envelope: need a < b");
  std::size_t ia = f.node_index(a), ib = f.node_index(b);
  Envelope env;
  env.kind = kind;
  env.a = a;
  env.b = b;
  double sgn = (kind == EnvelopeKind::convex) ? 1.0 : -1.0;
  std::vector<std::size_t> hull;
  for (std::size_t j = ia; j <= ib; ++j) {
    while (hull.size() >= 2) {
      std::size_t p = hull[hull.size() - 2], q = hull.back();
      // pop q unless the chain turns strictly toward the envelope side
      double lhs = (f.node_value(q) - f.node_value(p)) * static_cast<double>(j - q);
      double rhs = (f.node_value(j) - f.node_value(q)) * static_cast<double>(q - p);
      if (sgn * (rhs - lhs) <= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(j);
  }
  for (std::size_t idx : hull) {
    env.breakpoints.push_back(f.node(idx));
    env.break_values.push_back(f.node_value(idx));
  }
  for (std::size_t i = 0; i + 1 < hull.size(); ++i)
    env.slopes.push_back((f.node_value(hull[i + 1]) - f.node_value(hull[i])) /
                         (f.node(hull[i + 1]) - f.node(hull[i])));
  return env;
}

/// A maximal interval of states on which the flux derivative is constant
/// within tolerance.
struct LDComponent {
  double lo = 0.0;
  double hi = 0.0;
  double speed = 0.0;
  bool contains(double u) const { return u >= lo && u <= hi; }
};

/// Maximal runs of equal cell slopes.  Only nontrivial components (at least
/// two cells wide) are materialized.
inline std::vector<LDComponent> ld_components(const PLFlux& f, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("ld_components: tol must be positive");
  std::vector<LDComponent> out;
  std::size_t n = f.node_count() - 1;  // number of cells
  std::size_t run_start = 0;
  auto flush = [&](std::size_t run_end) {  // cells [run_start, run_end)
    if (run_end - run_start >= 2) {
      double lo = f.node(run_start), hi = f.node(run_end);
      double sum = 0.0;
      for (std::size_t c = run_start; c < run_end; ++c) sum += f.cell_slope(c);
      out.push_back({lo, hi, sum / static_cast<double>(run_end - run_start)});
    }
  };
  for (std::size_t c = 1; c < n; ++c) {
    if (std::abs(f.cell_slope(c) - f.cell_slope(run_start)) > tol) {
      flush(c);
      run_start = c;
    }
  }
  flush(n);
  return out;
}

inline double default_ld_tol(const PLFlux& f) { return 1e-9 * std::max(1.0, f.max_abs_deriv()); }

/// Components of a smooth flux, detected on a fine sampling grid.
inline std::vector<LDComponent> ld_components(const SmoothFlux& f, double tol, int k = 12) {
  PLFlux pl = build_pl_flux(f, k, std::floor(f.u_lo * std::ldexp(1.0, k)) * std::ldexp(1.0, -k),
                            std::ceil(f.u_hi * std::ldexp(1.0, k)) * std::ldexp(1.0, -k));
  return ld_components(pl, tol);
}

/// Characteristic speed of the state pair: the derivative selection when the
/// states agree, the Rankine-Hugoniot secant otherwise.
inline double wave_speed(const PLFlux& f, double u_left, double u_right) {
  if (u_left == u_right) return f.deriv(u_left);
  return (f.eval(u_right) - f.eval(u_left)) / (u_right - u_left);
}

inline double wave_speed(const SmoothFlux& f, double u_left, double u_right) {
  if (u_left == u_right) return f.deriv(u_left);
  return (f.eval(u_right) - f.eval(u_left)) / (u_right - u_left);
}

}  // namespace charflow

#endif  // CHARFLOW_FLUX_HPP_
