#include "charflow/laxoracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace charflow {

PotentialDatum::PotentialDatum(const PiecewiseConstant& u0) {
  if (u0.xs.empty()) {
    xs = {0.0};
    U = {0.0};
    slopes = {u0.vals[0], u0.vals[0]};
    return;
  }
  xs = u0.xs;
  slopes = u0.vals;
  U.assign(xs.size(), 0.0);
  for (std::size_t i = 1; i < xs.size(); ++i)
    U[i] = U[i - 1] + slopes[i] * (xs[i] - xs[i - 1]);
}

double PotentialDatum::eval(double y) const {
  if (y <= xs.front()) return U.front() + slopes.front() * (y - xs.front());
  if (y >= xs.back()) return U.back() + slopes.back() * (y - xs.back());
  std::size_t i = static_cast<std::size_t>(
      std::upper_bound(xs.begin(), xs.end(), y) - xs.begin());
  return U[i - 1] + slopes[i] * (y - xs[i - 1]);
}

LaxValue lax_value(const PotentialDatum& U0, double t, double x) {
  if (!(t > 0.0)) throw std::invalid_argument("lax_value: need t > 0");
  std::vector<double> cand = U0.xs;
  // per-piece stationary points y = x - t * slope, kept when inside the piece
  for (std::size_t p = 0; p < U0.slopes.size(); ++p) {
    double y = x - t * U0.slopes[p];
    double lo = (p == 0) ? -std::numeric_limits<double>::infinity() : U0.xs[p - 1];
    double hi = (p == U0.slopes.size() - 1) ? std::numeric_limits<double>::infinity() : U0.xs[p];
    if (y > lo && y < hi) cand.push_back(y);
  }
  auto val = [&](double y) { return U0.eval(y) + (x - y) * (x - y) / (2.0 * t); };
  double best = std::numeric_limits<double>::infinity();
  for (double y : cand) best = std::min(best, val(y));
  double scale = std::max(1.0, std::abs(best));
  LaxValue out;
  out.U = best;
  for (double y : cand)
    if (val(y) <= best + 1e-12 * scale) out.minimizers.push_back(y);
  std::sort(out.minimizers.begin(), out.minimizers.end());
  out.minimizers.erase(std::unique(out.minimizers.begin(), out.minimizers.end(),
                                   [](double a, double b) { return std::abs(a - b) <= 1e-14; }),
                       out.minimizers.end());
  return out;
}

double lax_u(const PotentialDatum& U0, double t, double x) {
  LaxValue v = lax_value(U0, t, x);
  return (x - v.minimizers.front()) / t;
}

std::vector<double> lax_sample_u(const PotentialDatum& U0, double t,
                                 const std::vector<double>& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = lax_u(U0, t, grid[i]);
  return out;
}

double square_density_criterion(const std::vector<std::array<double, 2>>& C, double y,
                                const std::vector<double>& thetas) {
  double best = 0.0;
  for (double theta : thetas) {
    if (!(theta > 0.0)) throw std::invalid_argument("square_density_criterion: theta > 0");
    double hi = y + theta;
    double inside = 0.0;
    for (const auto& iv : C) {
      double lo = std::max(y, iv[0]);
      double up = std::min(hi, iv[1]);
      if (lo < up) inside += up - lo;
    }
    best = std::max(best, (theta - inside) / (theta * theta));
  }
  return best;
}

}  // namespace charflow
