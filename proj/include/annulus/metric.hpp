#pragma once

#include <functional>
#include <limits>
#include <string>
#include <string_view>

namespace annulus {

/// Radii (lo, hi] on which a radial density is positive and smooth.
struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double y) const { return y > lo && y <= hi; }
};

/// A radial density rho(|w|) together with its first two derivatives.
/// Derivatives are supplied analytically; nothing is differentiated
/// numerically.
struct RadialMetric {
  std::string name;
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  std::function<double(double)> deriv2;
  Interval valid_interval;

  double operator()(double y) const { return eval(y); }
};

/// Builds one of the built-in metrics: "euclidean", "inverse_r", "sphere",
/// "hyperbolic" or "power:a". Throws UnknownMetric / BadParameter.
RadialMetric parse_metric(std::string_view spec);

/// factor * rho, with derivatives scaled accordingly.
RadialMetric scaled_metric(const RadialMetric& metric, double factor);

/// Throws OutOfDomain unless 0 < q < Q and [q, Q] lies in the valid interval.
void require_annulus(const RadialMetric& metric, double q, double Q);

/// Gauss curvature -Delta log(rho) / rho with the radial Laplacian.
double curvature(const RadialMetric& metric, double y);

/// Area of the annulus q < |w| < Q in the metric: 2 pi int_q^Q rho(y) y dy.
double area(const RadialMetric& metric, double q, double Q);

/// Smallest P with |grad rho| <= P rho on q <= |w| <= Q, i.e. the sup of
/// |rho'| / rho.
double approx_analytic_constant(const RadialMetric& metric, double q, double Q);

struct DensityRange {
  double inf;
  double sup;
};

DensityRange density_range(const RadialMetric& metric, double q, double Q);

struct MetricDiagnostics {
  double curvature_min;
  double curvature_max;
  double area;
  double p_constant;
  double rho_inf;
  double rho_sup;
};

/// Raw admissibility numbers (curvature bounds, area, P constant and density
/// bounds) on q <= |w| <= Q. No pass/fail judgement is made.
MetricDiagnostics admissibility_report(const RadialMetric& metric, double q, double Q);

}  // namespace annulus
