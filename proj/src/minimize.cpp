#include <cmath>
#include <vector>

#include "annulus/errors.hpp"
#include "annulus/numerics.hpp"

namespace annulus {

ScalarMinimum minimize_scalar(const ScalarFn& f, double a, double b, double tol,
                              std::size_t scan_points) {
  if (b < a) std::swap(a, b);
  if (scan_points < 2) scan_points = 2;
  if (a == b) return {a, f(a)};

  const double step = (b - a) / static_cast<double>(scan_points - 1);
  ScalarMinimum best{a, f(a)};
  std::size_t best_index = 0;
  for (std::size_t k = 1; k < scan_points; ++k) {
    const double x = k + 1 == scan_points ? b : a + step * static_cast<double>(k);
    const double fx = f(x);
    if (fx < best.min) {
      best = {x, fx};
      best_index = k;
    }
  }

  double lo = best_index == 0 ? a : a + step * static_cast<double>(best_index - 1);
  double hi = best_index + 1 >= scan_points ? b : a + step * static_cast<double>(best_index + 1);

  constexpr double kInvPhi = 0.6180339887498948482;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
    if (x1 >= x2) break;
  }
  if (f1 < best.min) best = {x1, f1};
  if (f2 < best.min) best = {x2, f2};
  return best;
}

ScalarMinimum maximize_scalar(const ScalarFn& f, double a, double b, double tol,
                              std::size_t scan_points) {
  const ScalarMinimum m =
      minimize_scalar([&f](double x) { return -f(x); }, a, b, tol, scan_points);
  return {m.argmin, -m.min};
}

}  // namespace annulus
