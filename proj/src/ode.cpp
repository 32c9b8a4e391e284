#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "annulus/errors.hpp"
#include "annulus/numerics.hpp"

namespace annulus {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Fifth minus fourth order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct TrialStep {
  double y_new;
  double k_new;  // rhs at the new point (FSAL)
  double error;
};

TrialStep dp_trial(const OdeRhs& rhs, double s, double y, double k1, double h) {
  const double k2 = rhs(s + c2 * h, y + h * a21 * k1);
  const double k3 = rhs(s + c3 * h, y + h * (a31 * k1 + a32 * k2));
  const double k4 = rhs(s + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const double k5 = rhs(s + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const double k6 =
      rhs(s + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  const double y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const double k7 = rhs(s + h, y_new);
  const double error = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  return {y_new, k7, error};
}

class Stepper {
 public:
  Stepper(const OdeRhs& rhs, double s0, double y0, double tol, double span, double max_step)
      : rhs_(rhs), s_(s0), y_(y0), k_(rhs(s0, y0)), tol_(tol), span_(span),
        max_step_(max_step), h_(std::min(max_step, 0.01 * span)) {}

  // Accepted steps are reported through `on_accept(s, y, slope)`.
  template <typename OnAccept>
  void advance_to(double target, OnAccept&& on_accept) {
    const double direction = target >= s_ ? 1.0 : -1.0;
    while (s_ != target) {
      const double remaining = std::abs(target - s_);
      double h = std::min(h_, remaining);
      bool last = h >= remaining * (1.0 - 1e-12);
      if (last) h = remaining;
      if (h < 1e-14 * span_) {
        throw Error(ErrorCode::StepUnderflow,
                    "step " + std::to_string(h) + " at s = " + std::to_string(s_));
      }
      const TrialStep trial = dp_trial(rhs_, s_, y_, k_, direction * h);
      const double scale = tol_ * (1.0 + std::max(std::abs(y_), std::abs(trial.y_new)));
      const double ratio = std::isfinite(trial.error) ? std::abs(trial.error) / scale : 1e10;
      const double factor =
          ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
      if (ratio <= 1.0 && std::isfinite(trial.y_new)) {
        s_ = last ? target : s_ + direction * h;
        y_ = trial.y_new;
        k_ = trial.k_new;
        on_accept(s_, y_, k_);
        // A step clipped to hit the target does not limit the next one.
        if (!last || factor < 1.0) h_ = std::min(max_step_, h * factor);
      } else {
        h_ = h * std::min(factor, 0.5);
      }
    }
  }

  double y() const { return y_; }

 private:
  const OdeRhs& rhs_;
  double s_;
  double y_;
  double k_;
  double tol_;
  double span_;
  double max_step_;
  double h_;
};

}  // namespace

double dormand_prince_step(const OdeRhs& rhs, double s, double y, double h) {
  if (h == 0.0) return y;
  return dp_trial(rhs, s, y, rhs(s, y), h).y_new;
}

std::vector<double> ode_integrate_to(const OdeRhs& rhs, double y0, double s0,
                                     std::span<const double> outputs, double tol) {
  std::vector<double> result;
  if (outputs.empty()) return result;
  const double span = std::abs(outputs.back() - s0);
  if (span == 0.0) return std::vector<double>(outputs.size(), y0);
  Stepper stepper(rhs, s0, y0, tol, span, span);
  result.reserve(outputs.size());
  for (const double target : outputs) {
    stepper.advance_to(target, [](double, double, double) {});
    result.push_back(stepper.y());
  }
  return result;
}

Interpolant ode_integrate(const OdeRhs& rhs, double y0, double s0, double s1, double tol) {
  const double span = std::abs(s1 - s0);
  if (span == 0.0) {
    throw Error(ErrorCode::BadParameter, "ode_integrate needs a non-empty interval");
  }
  std::vector<double> s{s0};
  std::vector<double> y{y0};
  std::vector<double> slope{rhs(s0, y0)};
  Stepper stepper(rhs, s0, y0, tol, span, span / 64.0);
  stepper.advance_to(s1, [&](double si, double yi, double ki) {
    s.push_back(si);
    y.push_back(yi);
    slope.push_back(ki);
  });
  if (s1 < s0) {
    std::reverse(s.begin(), s.end());
    std::reverse(y.begin(), y.end());
    std::reverse(slope.begin(), slope.end());
  }
  return Interpolant::with_slopes(std::move(s), std::move(y), std::move(slope));
}

}  // namespace annulus
