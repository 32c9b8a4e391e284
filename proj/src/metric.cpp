#include "annulus/metric.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "annulus/errors.hpp"
#include "annulus/numerics.hpp"

namespace annulus {
namespace {

constexpr double kHyperbolicMargin = 1e-9;
constexpr double kScanTolerance = 1e-12;
constexpr double kAreaTolerance = 1e-12;

RadialMetric power_metric(double a) {
  RadialMetric m;
  m.name = "power:" + std::to_string(a);
  m.eval = [a](double y) { return std::pow(y, a); };
  m.deriv = [a](double y) { return a * std::pow(y, a - 1.0); };
  m.deriv2 = [a](double y) { return a * (a - 1.0) * std::pow(y, a - 2.0); };
  return m;
}

double parse_parameter(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw Error(ErrorCode::BadParameter, "malformed metric parameter '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

RadialMetric parse_metric(std::string_view spec) {
  if (spec == "euclidean") {
    return {"euclidean", [](double) { return 1.0; }, [](double) { return 0.0; },
            [](double) { return 0.0; }, {}};
  }
  if (spec == "inverse_r") {
    return {"inverse_r", [](double y) { return 1.0 / y; },
            [](double y) { return -1.0 / (y * y); },
            [](double y) { return 2.0 / (y * y * y); }, {}};
  }
  if (spec == "sphere") {
    // rho = (1 + y^2)^-2
    return {"sphere",
            [](double y) {
              const double u = 1.0 + y * y;
              return 1.0 / (u * u);
            },
            [](double y) {
              const double u = 1.0 + y * y;
              return -4.0 * y / (u * u * u);
            },
            [](double y) {
              const double u = 1.0 + y * y;
              return (20.0 * y * y - 4.0) / (u * u * u * u);
            },
            {}};
  }
  if (spec == "hyperbolic") {
    // rho = (1 - y^2)^-2, only on subannuli of the unit disk.
    return {"hyperbolic",
            [](double y) {
              const double u = 1.0 - y * y;
              return 1.0 / (u * u);
            },
            [](double y) {
              const double u = 1.0 - y * y;
              return 4.0 * y / (u * u * u);
            },
            [](double y) {
              const double u = 1.0 - y * y;
              return (20.0 * y * y + 4.0) / (u * u * u * u);
            },
            {0.0, 1.0 - kHyperbolicMargin}};
  }
  constexpr std::string_view kPower = "power:";
  if (spec.starts_with(kPower)) {
    RadialMetric m = power_metric(parse_parameter(spec.substr(kPower.size())));
    m.name = std::string(spec);
    return m;
  }
  if (spec == "power") throw Error(ErrorCode::BadParameter, "power metric needs ':a'");
  throw Error(ErrorCode::UnknownMetric, "unknown metric '" + std::string(spec) + "'");
}

RadialMetric scaled_metric(const RadialMetric& metric, double factor) {
  RadialMetric m = metric;
  m.name = metric.name + "*" + std::to_string(factor);
  m.eval = [f = metric.eval, factor](double y) { return factor * f(y); };
  m.deriv = [f = metric.deriv, factor](double y) { return factor * f(y); };
  m.deriv2 = [f = metric.deriv2, factor](double y) { return factor * f(y); };
  return m;
}

void require_annulus(const RadialMetric& metric, double q, double Q) {
  if (!(q > 0.0 && q < Q)) {
    throw Error(ErrorCode::OutOfDomain,
                "need 0 < q < Q, got q = " + std::to_string(q) + ", Q = " + std::to_string(Q));
  }
  if (!metric.valid_interval.contains(q) || !metric.valid_interval.contains(Q)) {
    throw Error(ErrorCode::OutOfDomain, "[" + std::to_string(q) + ", " + std::to_string(Q) +
                                            "] leaves the valid interval of " + metric.name);
  }
}

double curvature(const RadialMetric& metric, double y) {
  if (!metric.valid_interval.contains(y)) {
    throw Error(ErrorCode::OutOfDomain, "radius " + std::to_string(y) + " outside the valid interval of " + metric.name);
  }
  const double rho = metric.eval(y);
  const double g1 = metric.deriv(y) / rho;  // (log rho)'
  const double g2 = metric.deriv2(y) / rho - g1 * g1;  // (log rho)''
  return -(g2 + g1 / y) / rho;
}

double area(const RadialMetric& metric, double q, double Q) {
  require_annulus(metric, q, Q);
  const double integral = integrate_adaptive(
      [&metric](double y) { return metric.eval(y) * y; }, q, Q, kAreaTolerance);
  return 2.0 * std::numbers::pi * integral;
}

double approx_analytic_constant(const RadialMetric& metric, double q, double Q) {
  require_annulus(metric, q, Q);
  return maximize_scalar(
             [&metric](double y) { return std::abs(metric.deriv(y)) / metric.eval(y); }, q, Q,
             kScanTolerance)
      .min;
}

DensityRange density_range(const RadialMetric& metric, double q, double Q) {
  require_annulus(metric, q, Q);
  const double lo = minimize_scalar(metric.eval, q, Q, kScanTolerance).min;
  const double hi = maximize_scalar(metric.eval, q, Q, kScanTolerance).min;
  return {lo, hi};
}

MetricDiagnostics admissibility_report(const RadialMetric& metric, double q, double Q) {
  require_annulus(metric, q, Q);
  const auto kappa = [&metric](double y) { return curvature(metric, y); };
  const DensityRange range = density_range(metric, q, Q);
  return {minimize_scalar(kappa, q, Q, kScanTolerance).min,
          maximize_scalar(kappa, q, Q, kScanTolerance).min,
          area(metric, q, Q),
          approx_analytic_constant(metric, q, Q),
          range.inf,
          range.sup};
}

}  // namespace annulus
