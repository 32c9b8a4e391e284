#pragma once

// Scalar numerical kernels shared by the solver and the verification code:
// adaptive quadrature with square-root endpoint substitution, safeguarded
// bracketed root finding, scan + golden-section minimization, monotone cubic
// Hermite interpolation and an embedded Runge-Kutta integrator.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace annulus {

using ScalarFn = std::function<double(double)>;

// ---------------------------------------------------------------------------
// Quadrature

struct QuadratureOptions {
  /// Optional evaluation of f(a + t) that keeps the offset t exact; used when
  /// the integrand cancels badly next to the endpoint.
  ScalarFn near_lower;
  /// Same for f(b - t).
  ScalarFn near_upper;
  /// Apply y = a + u^2 (resp. b - u^2) regardless of the singularity probe.
  bool substitute_lower = false;
  bool substitute_upper = false;
  std::size_t max_panels = 1'000'000;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b] with absolute
/// error target `tol`. Integrable inverse-square-root endpoint singularities
/// are removed by the substitution y = a + u^2 / y = b - u^2.
/// Throws NoConvergence or DivergentIntegral.
double integrate_adaptive(const ScalarFn& f, double a, double b, double tol,
                          const QuadratureOptions& options = {});

// ---------------------------------------------------------------------------
// Root finding

/// Bisection with secant acceleration. Only evaluates f inside [lo, hi].
/// Returns x with |f(x)| <= tol or a final bracket narrower than tol.
/// Throws NoBracket when f(lo) and f(hi) share a sign.
double find_root_bracketed(const ScalarFn& f, double lo, double hi, double tol);

// ---------------------------------------------------------------------------
// Minimization

struct ScalarMinimum {
  double argmin;
  double min;
};

/// Global scan of `scan_points` equispaced samples (endpoints included), then
/// golden-section refinement of the best cell down to width `tol`.
ScalarMinimum minimize_scalar(const ScalarFn& f, double a, double b, double tol,
                              std::size_t scan_points = 1024);

/// Convenience wrapper: the maximum of f over [a, b] by the same scheme.
ScalarMinimum maximize_scalar(const ScalarFn& f, double a, double b, double tol,
                              std::size_t scan_points = 1024);

// ---------------------------------------------------------------------------
// Interpolation

/// Piecewise cubic Hermite interpolant. Slopes are limited (Fritsch-Carlson)
/// so that monotone data yields a monotone curve.
class Interpolant {
 public:
  enum class Mode { MonotoneCubic };

  Interpolant() = default;

  /// Slopes estimated from the data (Fritsch-Butland harmonic mean).
  static Interpolant monotone(std::vector<double> knots, std::vector<double> values);

  /// Caller-supplied slopes, limited where they would break monotonicity.
  static Interpolant with_slopes(std::vector<double> knots, std::vector<double> values,
                                 std::vector<double> slopes);

  double operator()(double x) const;
  double derivative(double x) const;

  Mode mode() const noexcept { return Mode::MonotoneCubic; }
  std::span<const double> knots() const noexcept { return knots_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> slopes() const noexcept { return slopes_; }
  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }
  bool empty() const noexcept { return knots_.empty(); }

  /// Index i of the cell [knots[i], knots[i+1]] containing x (clamped).
  std::size_t cell(double x) const;

 private:
  Interpolant(std::vector<double> knots, std::vector<double> values,
              std::vector<double> slopes);

  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

// ---------------------------------------------------------------------------
// ODE integration

using OdeRhs = std::function<double(double s, double y)>;

/// One Dormand-Prince 5(4) step of size h from (s, y); returns the fifth-order
/// solution. No error control.
double dormand_prince_step(const OdeRhs& rhs, double s, double y, double h);

/// Adaptive Dormand-Prince 5(4) integration of y' = rhs(s, y) from s0 to each
/// point of `outputs` in turn (the outputs must be ordered in the direction of
/// integration). Returns y at the outputs. Throws StepUnderflow.
std::vector<double> ode_integrate_to(const OdeRhs& rhs, double y0, double s0,
                                     std::span<const double> outputs, double tol);

/// Adaptive integration from s0 to s1 (either direction); dense output is a
/// monotone cubic interpolant over the accepted steps.
Interpolant ode_integrate(const OdeRhs& rhs, double y0, double s0, double s1, double tol);

}  // namespace annulus
