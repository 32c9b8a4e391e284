#include <algorithm>
#include <cmath>
#include <string>

#include "annulus/errors.hpp"
#include "annulus/numerics.hpp"

namespace annulus {
namespace {

void check_layout(const std::vector<double>& knots, const std::vector<double>& values) {
  if (knots.size() < 2 || knots.size() != values.size()) {
    throw Error(ErrorCode::BadParameter, "interpolant needs >= 2 knots and matching values");
  }
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] > knots[i - 1])) {
      throw Error(ErrorCode::BadParameter, "interpolant knots must be strictly increasing");
    }
  }
}

int sign(double x) { return (x > 0.0) - (x < 0.0); }

// Fritsch-Carlson: restrict slopes so every cell of monotone data stays monotone.
void limit_slopes(const std::vector<double>& knots, const std::vector<double>& values,
                  std::vector<double>& slopes) {
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double secant = (values[i + 1] - values[i]) / (knots[i + 1] - knots[i]);
    if (secant == 0.0) {
      slopes[i] = 0.0;
      slopes[i + 1] = 0.0;
      continue;
    }
    if (sign(slopes[i]) != sign(secant)) slopes[i] = 0.0;
    if (sign(slopes[i + 1]) != sign(secant)) slopes[i + 1] = 0.0;
    const double alpha = slopes[i] / secant;
    const double beta = slopes[i + 1] / secant;
    const double radius2 = alpha * alpha + beta * beta;
    if (radius2 > 9.0) {
      const double tau = 3.0 / std::sqrt(radius2);
      slopes[i] = tau * alpha * secant;
      slopes[i + 1] = tau * beta * secant;
    }
  }
}

}  // namespace

Interpolant::Interpolant(std::vector<double> knots, std::vector<double> values,
                         std::vector<double> slopes)
    : knots_(std::move(knots)), values_(std::move(values)), slopes_(std::move(slopes)) {}

Interpolant Interpolant::monotone(std::vector<double> knots, std::vector<double> values) {
  check_layout(knots, values);
  const std::size_t n = knots.size();
  std::vector<double> h(n - 1);
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = knots[i + 1] - knots[i];
    delta[i] = (values[i + 1] - values[i]) / h[i];
  }
  std::vector<double> slopes(n, 0.0);
  if (n == 2) {
    slopes[0] = slopes[1] = delta[0];
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) continue;
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      slopes[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
    const auto edge = [](double h0, double h1, double d0, double d1) {
      double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
      if (sign(m) != sign(d0)) {
        m = 0.0;
      } else if (sign(d0) != sign(d1) && std::abs(m) > 3.0 * std::abs(d0)) {
        m = 3.0 * d0;
      }
      return m;
    };
    slopes[0] = edge(h[0], h[1], delta[0], delta[1]);
    slopes[n - 1] = edge(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }
  limit_slopes(knots, values, slopes);
  return Interpolant(std::move(knots), std::move(values), std::move(slopes));
}

Interpolant Interpolant::with_slopes(std::vector<double> knots, std::vector<double> values,
                                     std::vector<double> slopes) {
  check_layout(knots, values);
  if (slopes.size() != knots.size()) {
    throw Error(ErrorCode::BadParameter, "slope count must match knot count");
  }
  limit_slopes(knots, values, slopes);
  return Interpolant(std::move(knots), std::move(values), std::move(slopes));
}

std::size_t Interpolant::cell(double x) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  if (it == knots_.begin()) return 0;
  const auto index = static_cast<std::size_t>(it - knots_.begin()) - 1;
  return std::min(index, knots_.size() - 2);
}

namespace {

void check_range(double x, double lo, double hi) {
  const double slack = 1e-12 * (hi - lo);
  if (!(x >= lo - slack && x <= hi + slack)) {
    throw Error(ErrorCode::OutOfDomain, "interpolant queried at " + std::to_string(x) +
                                            " outside [" + std::to_string(lo) + ", " +
                                            std::to_string(hi) + "]");
  }
}

}  // namespace

double Interpolant::operator()(double x) const {
  check_range(x, knots_.front(), knots_.back());
  const std::size_t i = cell(x);
  const double h = knots_[i + 1] - knots_[i];
  const double t = std::clamp((x - knots_[i]) / h, 0.0, 1.0);
  if (t == 0.0) return values_[i];
  if (t == 1.0) return values_[i + 1];
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * values_[i] + (t3 - 2.0 * t2 + t) * h * slopes_[i] +
         (-2.0 * t3 + 3.0 * t2) * values_[i + 1] + (t3 - t2) * h * slopes_[i + 1];
}

double Interpolant::derivative(double x) const {
  check_range(x, knots_.front(), knots_.back());
  const std::size_t i = cell(x);
  const double h = knots_[i + 1] - knots_[i];
  const double t = std::clamp((x - knots_[i]) / h, 0.0, 1.0);
  const double t2 = t * t;
  return (6.0 * t2 - 6.0 * t) * (values_[i] - values_[i + 1]) / h +
         (3.0 * t2 - 4.0 * t + 1.0) * slopes_[i] + (3.0 * t2 - 2.0 * t) * slopes_[i + 1];
}

}  // namespace annulus
