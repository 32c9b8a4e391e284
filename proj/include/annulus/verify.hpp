#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "annulus/field.hpp"
#include "annulus/radial_solver.hpp"

namespace annulus {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

/// passed = (measured <= tolerance); NaN never passes.
CheckResult make_check(std::string name, double measured, double tolerance,
                       std::string detail = {});

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  const CheckResult* find(std::string_view name) const;
};

/// Interior sample set for the finite-difference residuals: 16 radii spread
/// over the middle half of the annulus times 32 angles.
std::vector<Complex> residual_points(const MinimizerProfile& profile);

/// max |tau| with tau = w_{z zbar} + (log rho)_w(w) w_z w_zbar, every
/// derivative of w taken by centered Cartesian differences of step h.
/// Throws StencilOutOfDomain for h <= 0 or h > (1 - r) / 8.
double pde_residual(const MinimizerProfile& profile, double h);

/// max |d/dzbar (rho(w) w_z conj(w_zbar))| by centered differences of step h.
double general_harmonic_residual(const MinimizerProfile& profile, double h);

struct HopfStatistics {
  std::complex<double> mean;  // of z^2 rho(w) w_z conj(w_zbar)
  double stddev;              // sample standard deviation (complex modulus)
  double max_deviation;       // max |z^2 hopf - c / 4|
  double max_imaginary;       // max |Im(z^2 hopf)|
};

HopfStatistics hopf_statistics(const MinimizerProfile& profile, const PolarGrid& grid);

/// measured = max |z^2 hopf - c/4| over the grid.
CheckResult hopf_constancy_check(const MinimizerProfile& profile, const PolarGrid& grid,
                                 double tol);

/// E[p + eps phi] - E[p] for a fixed-endpoint radial perturbation phi.
double perturbed_energy_excess(const MinimizerProfile& profile,
                               const std::function<double(double)>& phi,
                               const std::function<double(double)>& dphi, double eps);

/// Random sine-series perturbations phi (phi(r) = phi(1) = 0, sup |phi| = 1)
/// at eps and eps / 10. Passes when no excess drops below -1e-10 and every
/// excess ratio lies in [50, 200].
CheckResult minimality_probe(const MinimizerProfile& profile, int n_perturbations, double eps,
                             std::uint64_t seed);

/// sign(c) against sign(log(Q/q) - log(1/r)) for each r; BelowCritical radii
/// are skipped and counted in the detail.
CheckResult modulus_equivalence_check(const RadialMetric& metric, double q, double Q,
                                      std::span<const double> r_values,
                                      const SolverConfig& config = {});

struct SuiteOptions {
  int grid_s = 32;
  int grid_t = 64;
  double fd_step = 2e-3;
  int perturbations = 20;
  double perturbation_eps = 1e-2;
  /// Multiplies every numeric tolerance (not the structural ones).
  double tolerance_scale = 1.0;
};

/// Solves `spec` and runs every check in a fixed order. Solver failures are
/// reported as a failed "solve" entry rather than thrown.
VerificationReport run_full_suite(const ProblemSpec& spec, const SolverConfig& config = {},
                                  const SuiteOptions& options = {});

}  // namespace annulus
