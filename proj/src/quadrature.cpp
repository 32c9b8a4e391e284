#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "annulus/errors.hpp"
#include "annulus/numerics.hpp"

namespace annulus {
namespace {

// Kronrod 15-point abscissae on [-1, 1] (positive half) and weights; the
// odd-indexed abscissae carry the embedded 7-point Gauss rule.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kSingularProbeOffset = 1e-12;
constexpr double kSingularThreshold = 1e6;
constexpr double kDivergenceThreshold = 1e12;
constexpr double kGrowthThreshold = 1e3;

struct Panel {
  double a;
  double b;
  double integral;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const ScalarFn& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod)) {
    throw Error(ErrorCode::DivergentIntegral,
                "non-finite integrand on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

double integrate_regular(const ScalarFn& f, double a, double b, double tol,
                         std::size_t max_panels) {
  if (a == b) return 0.0;
  std::priority_queue<Panel> queue;
  Panel first = gauss_kronrod(f, a, b);
  double total = first.integral;
  double total_error = first.error;
  queue.push(first);
  std::size_t panels = 1;
  const double eps = std::numeric_limits<double>::epsilon();

  while (total_error > tol) {
    const Panel worst = queue.top();
    // Rounding floor: the panel can no longer be split meaningfully.
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= std::min(worst.a, worst.b) || mid >= std::max(worst.a, worst.b)) break;
    if (total_error <= 50.0 * eps * std::abs(total)) break;
    if (panels + 1 > max_panels) {
      throw Error(ErrorCode::NoConvergence,
                  "quadrature panel limit reached (error estimate " +
                      std::to_string(total_error) + ")");
    }
    queue.pop();
    const Panel left = gauss_kronrod(f, worst.a, mid);
    const Panel right = gauss_kronrod(f, mid, worst.b);
    total += left.integral + right.integral - worst.integral;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
  }

  // Re-sum to shed the drift from incremental updates.
  double sum = 0.0;
  while (!queue.empty()) {
    sum += queue.top().integral;
    queue.pop();
  }
  return sum;
}

// Integral of F(t) over t in [0, length], where F(t) = f(endpoint +/- t), via
// t = u^2. Checks that the transformed integrand stays bounded at u -> 0.
double integrate_substituted(const ScalarFn& offset_fn, double endpoint, double length,
                             bool exact_offsets, double tol, std::size_t max_panels) {
  // With an offset-exact form, t = u^2 is used as is. Otherwise endpoint + u^2
  // is rounded; the integrand is then evaluated at the representable node with
  // its exact offset t and weighted by 2 sqrt(t), which keeps t^{-1/2} f(t)
  // smooth instead of amplifying the rounding of t.
  const ScalarFn transformed = [&offset_fn, endpoint, exact_offsets](double u) {
    if (u == 0.0) return 0.0;
    if (exact_offsets) return 2.0 * u * offset_fn(u * u);
    double t = std::abs((endpoint + u * u) - endpoint);
    if (t == 0.0) {
      t = std::nextafter(std::abs(endpoint), std::numeric_limits<double>::infinity()) -
          std::abs(endpoint);
    }
    return 2.0 * std::sqrt(t) * offset_fn(t);
  };

  // Without an offset-exact form, endpoint + t must stay representable.
  const double ulp =
      std::nextafter(std::abs(endpoint), std::numeric_limits<double>::infinity()) -
      std::abs(endpoint);
  const double u_probe = exact_offsets ? 1e-12 : std::sqrt(std::max(1e-24, 16.0 * ulp));
  const double g0 = transformed(u_probe);
  const double g1 = transformed(16.0 * u_probe);
  if (!std::isfinite(g0) || std::abs(g0) > kDivergenceThreshold ||
      (std::abs(g0) > kSingularThreshold && std::abs(g0) > 12.0 * std::abs(g1))) {
    throw Error(ErrorCode::DivergentIntegral,
                "integrand not integrable at endpoint " + std::to_string(endpoint));
  }
  return integrate_regular(transformed, 0.0, std::sqrt(length), tol, max_panels);
}

}  // namespace

double integrate_adaptive(const ScalarFn& f, double a, double b, double tol,
                          const QuadratureOptions& options) {
  if (a == b) return 0.0;
  if (b < a) return -integrate_adaptive(f, b, a, tol, options);
  if (!(tol > 0.0)) throw Error(ErrorCode::BadParameter, "quadrature tolerance must be positive");

  const ScalarFn lower = options.near_lower ? options.near_lower
                                            : ScalarFn([&f, a](double t) { return f(a + t); });
  const ScalarFn upper = options.near_upper ? options.near_upper
                                            : ScalarFn([&f, b](double t) { return f(b - t); });

  const auto looks_singular = [&](const ScalarFn& g) {
    if (b - a <= 2.0 * kSingularProbeOffset) return false;
    const double v = g(kSingularProbeOffset);
    if (!std::isfinite(v) || std::abs(v) > kSingularThreshold) return true;
    // A milder blow-up still shows as growth toward the endpoint.
    return std::abs(v) > kGrowthThreshold && std::abs(v) > 3.0 * std::abs(g(16.0 * kSingularProbeOffset));
  };
  const bool sub_lower = options.substitute_lower || looks_singular(lower);
  const bool sub_upper = options.substitute_upper || looks_singular(upper);

  if (!sub_lower && !sub_upper) return integrate_regular(f, a, b, tol, options.max_panels);

  if (sub_lower && sub_upper) {
    const double mid = 0.5 * (a + b);
    return integrate_substituted(lower, a, mid - a, static_cast<bool>(options.near_lower),
                                 0.5 * tol, options.max_panels) +
           integrate_substituted(upper, b, b - mid, static_cast<bool>(options.near_upper),
                                 0.5 * tol, options.max_panels);
  }
  if (sub_lower) {
    return integrate_substituted(lower, a, b - a, static_cast<bool>(options.near_lower), tol,
                                 options.max_panels);
  }
  return integrate_substituted(upper, b, b - a, static_cast<bool>(options.near_upper), tol,
                               options.max_panels);
}

}  // namespace annulus
