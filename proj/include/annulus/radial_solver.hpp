#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "annulus/metric.hpp"
#include "annulus/numerics.hpp"

namespace annulus {

/// Radial minimization problem: domain annulus r < |z| < 1 onto the target
/// annulus q < |w| < Q, weighted by `metric`.
struct ProblemSpec {
  RadialMetric metric;
  double q = 0.0;
  double Q = 0.0;
  double r = 0.0;

  /// Throws OutOfDomain unless 0 < q < Q inside the valid interval and 0 < r < 1.
  void validate() const;
};

/// Domain annulus r1 < |z| < R1 rescaled to r1/R1 < |z| < 1.
ProblemSpec normalized_problem(RadialMetric metric, double q, double Q, double r1, double R1);

struct SolverConfig {
  double tol_c = 1e-9;
  double tol_quad = 1e-11;
  double tol_ode = 1e-10;
  int profile_knots = 512;
  std::uint64_t seed = 42;  // perturbation probes in the verification suite

  void validate() const;
};

enum class Classification { Conformal, Expanding, Subcritical, Critical };

std::string_view to_string(Classification c);

Classification classify(double c, double critical_c, double tol_c);

/// y^2 rho(y), the quantity whose minimum over [q, Q] fixes the critical constant.
double radial_weight(const RadialMetric& metric, double y);

struct CriticalPoint {
  double c;       // -min y^2 rho(y)
  double radius;  // where the minimum is attained
};

CriticalPoint critical_point(const RadialMetric& metric, double q, double Q);

/// -min{y^2 rho(y) : q <= y <= Q}; strictly negative.
double critical_constant(const RadialMetric& metric, double q, double Q);

/// mu(c) = int_q^Q dy / sqrt(y^2 + c / rho(y)); the domain annulus is then
/// exp(-mu(c)) < |z| < 1. Throws BelowCritical for c < c_crit and
/// DivergentModulus when the integral diverges at c = c_crit.
double modulus_of_c(const RadialMetric& metric, double q, double Q, double c,
                    double tol = 1e-11);

/// Solves mu(c) = log(1/r). Throws BelowCriticalError when r is below the
/// critical inner radius.
double solve_c(const ProblemSpec& spec, const SolverConfig& config = {});

/// exp(-mu(c_crit)), or 0 when mu(c_crit) diverges (every r then admits a
/// radial minimizer).
double critical_inner_radius(const RadialMetric& metric, double q, double Q,
                             double tol = 1e-11);

/// The radial minimizer w(s e^{it}) = p(s) e^{it} on r <= s <= 1.
///
/// Knots are equispaced in s. `radius()` refines the stored knots with one
/// Dormand-Prince step of the profile equation from the nearest interior knot,
/// so it is accurate far beyond the cubic interpolant and smooth enough to
/// be finite-differenced. In an end cell where the radicand nearly vanishes
/// it inverts the modulus integral instead. `radius_derivative()` evaluates the profile equation
/// p' = sqrt(p^2 + c / rho(p)) / s at that value.
class MinimizerProfile {
 public:
  MinimizerProfile(ProblemSpec spec, double c, double critical_c, Classification classification,
                   std::vector<double> knots, std::vector<double> values,
                   double endpoint_mismatch, std::function<double(double)> closed_form = {});

  const ProblemSpec& spec() const noexcept { return spec_; }
  const RadialMetric& metric() const noexcept { return spec_.metric; }
  double c() const noexcept { return c_; }
  /// The constant of rho(w) w_z conj(w_zbar) = hopf_constant / z^2, i.e. c / 4.
  double hopf_constant() const noexcept { return 0.25 * c_; }
  double critical_c() const noexcept { return critical_c_; }
  Classification classification() const noexcept { return classification_; }
  /// |p(r) - q| as produced by the integrator, before the boundary knot is pinned.
  double endpoint_mismatch() const noexcept { return endpoint_mismatch_; }

  const Interpolant& profile() const noexcept { return profile_; }
  const Interpolant& inverse() const noexcept { return inverse_; }

  double radius(double s) const;
  double radius_derivative(double s) const;
  /// y^2 + c / rho(y), written as (y^2 rho(y) + c) / rho(y) so that it vanishes
  /// exactly where c = c_crit attains its minimum.
  double radicand(double y) const;
  /// Right-hand side of the profile equation.
  double slope(double s, double p) const;
  /// s with p(s) = y, found by bracketed root finding on `radius()`.
  double inverse_at(double y) const;

 private:
  /// p(s) in the first (lower) or last cell from s = r exp(int_q^p dy / sqrt(R))
  /// resp. s = exp(-int_p^Q dy / sqrt(R)); used where the radicand nearly
  /// vanishes at the end knot and a Runge-Kutta step loses accuracy.
  double end_cell_radius(double s, bool lower) const;

  ProblemSpec spec_;
  double c_;
  double critical_c_;
  Classification classification_;
  double endpoint_mismatch_;
  std::vector<double> knots_;
  std::vector<double> values_;
  Interpolant profile_;
  Interpolant inverse_;
  std::function<double(double)> closed_form_;
};

/// Integrates the profile equation backward from p(1) = Q down to s = r.
/// Throws ProfileMismatch if p(r) misses q, NegativeRadicand if the radicand
/// goes noticeably negative.
MinimizerProfile build_profile(const ProblemSpec& spec, double c,
                               const SolverConfig& config = {});

/// solve_c followed by build_profile.
MinimizerProfile solve(const ProblemSpec& spec, const SolverConfig& config = {});

/// Closed-form Euclidean critical map w(z) = (r^2 + |z|^2) / (conj(z) (1 + r^2))
/// from r < |z| < 1 onto 2r/(1+r^2) < |w| < 1.
MinimizerProfile euclidean_nitsche_map(double r, int knots = 512);

}  // namespace annulus
