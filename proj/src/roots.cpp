#include <cmath>
#include <string>

#include "annulus/errors.hpp"
#include "annulus/numerics.hpp"

namespace annulus {

double find_root_bracketed(const ScalarFn& f, double lo, double hi, double tol) {
  if (lo > hi) std::swap(lo, hi);
  double flo = f(lo);
  if (flo == 0.0) return lo;
  double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw Error(ErrorCode::NoBracket, "f(" + std::to_string(lo) + ") and f(" +
                                          std::to_string(hi) + ") have the same sign");
  }

  double best = std::abs(flo) < std::abs(fhi) ? lo : hi;
  double fbest = std::min(std::abs(flo), std::abs(fhi));
  double last_width = hi - lo;
  bool force_bisect = false;

  for (int iter = 0; iter < 400; ++iter) {
    const double width = hi - lo;
    if (width <= tol || fbest <= tol) break;

    const double mid = lo + 0.5 * width;
    double x = mid;
    if (!force_bisect) {
      const double secant = hi - fhi * (hi - lo) / (fhi - flo);
      if (secant > lo && secant < hi) x = secant;
    }
    if (x <= lo || x >= hi) break;  // bracket exhausted at machine resolution

    const double fx = f(x);
    if (std::abs(fx) < fbest) {
      fbest = std::abs(fx);
      best = x;
    }
    if (fx == 0.0) return x;
    if (std::signbit(fx) == std::signbit(flo)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    // A secant step that failed to halve the bracket triggers a bisection.
    const double new_width = hi - lo;
    force_bisect = !force_bisect && new_width > 0.5 * last_width;
    last_width = new_width;
  }

  if (fbest <= tol) return best;
  // Bracket is narrow; report its best end.
  return std::abs(flo) < std::abs(fhi) ? lo : hi;
}

}  // namespace annulus
