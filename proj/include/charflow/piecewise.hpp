#ifndef CHARFLOW_PIECEWISE_HPP_
#define CHARFLOW_PIECEWISE_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace charflow {

/// A piecewise-constant function on the real line.
///
/// `xs` holds the strictly increasing breakpoints, `vals` the values on the
/// open intervals they bound; vals.size() == xs.size() + 1.  At a breakpoint
/// the function takes the value from the right.
struct PiecewiseConstant {
  std::vector<double> xs;
  std::vector<double> vals;

  PiecewiseConstant() : vals{0.0} {}
  PiecewiseConstant(std::vector<double> breakpoints, std::vector<double> values)
      : xs(std::move(breakpoints)), vals(std::move(values)) {
    if (vals.size() != xs.size() + 1)
      throw std::invalid_argument("PiecewiseConstant: need one more value than breakpoint");
    for (std::size_t i = 1; i < xs.size(); ++i)
      if (!(xs[i - 1] < xs[i]))
        throw std::invalid_argument("PiecewiseConstant: breakpoints must be strictly increasing");
  }

  static PiecewiseConstant constant(double c) {
    PiecewiseConstant p;
    p.vals = {c};
    return p;
  }

  double operator()(double x) const {
    std::size_t i = 0;
    while (i < xs.size() && x >= xs[i]) ++i;
    return vals[i];
  }

  double left_value() const { return vals.front(); }
  double right_value() const { return vals.back(); }

  /// Removes zero-strength jumps.
  PiecewiseConstant simplified() const {
    PiecewiseConstant out;
    out.xs.clear();
    out.vals = {vals[0]};
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (vals[i + 1] != out.vals.back()) {
        out.xs.push_back(xs[i]);
        out.vals.push_back(vals[i + 1]);
      }
    }
    return out;
  }

  double total_variation() const {
    double tv = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) tv += std::abs(vals[i + 1] - vals[i]);
    return tv;
  }

  /// Exact integral of (u - c) over [lo, hi].
  double integral_minus(double c, double lo, double hi) const {
    if (!(lo <= hi)) throw std::invalid_argument("integral_minus: empty window");
    double acc = 0.0, cur = lo;
    std::size_t i = 0;
    while (i < xs.size() && xs[i] <= lo) ++i;
    for (; i < xs.size() && xs[i] < hi; ++i) {
      acc += (vals[i] - c) * (xs[i] - cur);
      cur = xs[i];
    }
    acc += (vals[i] - c) * (hi - cur);
    return acc;
  }
};

/// Merges the breakpoints of two piecewise-constant functions and applies a
/// binary functional exactly, integrating over [lo, hi].
inline double integrate_pair(const PiecewiseConstant& a, const PiecewiseConstant& b, double lo,
                             double hi, const std::function<double(double, double)>& fn) {
  double acc = 0.0, cur = lo;
  std::size_t ia = 0, ib = 0;
  while (ia < a.xs.size() && a.xs[ia] <= lo) ++ia;
  while (ib < b.xs.size() && b.xs[ib] <= lo) ++ib;
  while (cur < hi) {
    double nxt = hi;
    if (ia < a.xs.size() && a.xs[ia] < nxt) nxt = a.xs[ia];
    if (ib < b.xs.size() && b.xs[ib] < nxt) nxt = b.xs[ib];
    acc += fn(a.vals[ia], b.vals[ib]) * (nxt - cur);
    cur = nxt;
    if (ia < a.xs.size() && a.xs[ia] == cur) ++ia;
    if (ib < b.xs.size() && b.xs[ib] == cur) ++ib;
  }
  return acc;
}

/// Exact L1 distance on the whole line; the tails must agree.
inline double l1_distance(const PiecewiseConstant& a, const PiecewiseConstant& b) {
  if (a.left_value() != b.left_value() || a.right_value() != b.right_value())
    throw std::invalid_argument("l1_distance: mismatched tail states");
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto* p : {&a, &b}) {
    if (!p->xs.empty()) {
      lo = any ? std::min(lo, p->xs.front()) : p->xs.front();
      hi = any ? std::max(hi, p->xs.back()) : p->xs.back();
      any = true;
    }
  }
  if (!any) return 0.0;
  return integrate_pair(a, b, lo - 1.0, hi + 1.0,
                        [](double u, double v) { return std::abs(u - v); });
}

}  // namespace charflow

#endif  // CHARFLOW_PIECEWISE_HPP_
