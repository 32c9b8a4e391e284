#include "annulus/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

#include "annulus/errors.hpp"
#include "annulus/metric.hpp"
#include "annulus/numerics.hpp"

namespace annulus {
namespace {

constexpr int kResidualRadii = 16;
constexpr int kResidualAngles = 32;
constexpr double kExcessFloor = -1e-10;
constexpr double kRatioLow = 50.0;
constexpr double kRatioHigh = 200.0;
constexpr int kMaxResamples = 100;
constexpr double kResidualNoiseFloor = 1e-8;

std::string format(const char* fmt, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, fmt, a);
  return buf;
}

std::string format(const char* fmt, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

void require_stencil(const MinimizerProfile& profile, double h) {
  const double r = profile.spec().r;
  if (!(h > 0.0) || h > (1.0 - r) / 8.0) {
    throw Error(ErrorCode::StencilOutOfDomain,
                "step " + std::to_string(h) + " does not fit the residual band");
  }
}

struct Stencil {
  Complex center, east, west, north, south;
};

template <class F>
Stencil sample_stencil(F&& f, Complex z, double h) {
  return {f(z), f(z + h), f(z - h), f(z + Complex(0.0, h)), f(z - Complex(0.0, h))};
}

Complex d_z(const Stencil& st, double h) {
  const Complex dx = (st.east - st.west) / (2.0 * h);
  const Complex dy = (st.north - st.south) / (2.0 * h);
  return 0.5 * (dx - Complex(0.0, 1.0) * dy);
}

Complex d_zbar(const Stencil& st, double h) {
  const Complex dx = (st.east - st.west) / (2.0 * h);
  const Complex dy = (st.north - st.south) / (2.0 * h);
  return 0.5 * (dx + Complex(0.0, 1.0) * dy);
}

// Sine series on [r, 1] with sup norm 1.
struct Bump {
  double r;
  double a[3];
  double scale = 1.0;

  double arg(double s) const { return std::numbers::pi * (s - r) / (1.0 - r); }
  double operator()(double s) const {
    const double x = arg(s);
    return scale * (a[0] * std::sin(x) + a[1] * std::sin(2.0 * x) + a[2] * std::sin(3.0 * x));
  }
  double derivative(double s) const {
    const double x = arg(s);
    const double k = std::numbers::pi / (1.0 - r);
    return scale * k *
           (a[0] * std::cos(x) + 2.0 * a[1] * std::cos(2.0 * x) + 3.0 * a[2] * std::cos(3.0 * x));
  }
};

double uniform_pm1(std::mt19937_64& gen) {
  return 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0;
}

bool stays_in_range(const MinimizerProfile& profile, const Bump& phi, double eps) {
  const Interval valid = profile.metric().valid_interval;
  const double r = profile.spec().r;
  constexpr int kSamples = 257;
  for (int k = 0; k < kSamples; ++k) {
    const double s = r + (1.0 - r) * k / (kSamples - 1.0);
    const double y = profile.radius(s) + eps * phi(s);
    if (!(y > 0.0) || !valid.contains(y)) return false;
  }
  return true;
}

}  // namespace

CheckResult make_check(std::string name, double measured, double tolerance, std::string detail) {
  CheckResult out;
  out.name = std::move(name);
  out.measured = measured;
  out.tolerance = tolerance;
  out.passed = measured <= tolerance;
  out.detail = std::move(detail);
  return out;
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* VerificationReport::find(std::string_view name) const {
  for (const CheckResult& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<Complex> residual_points(const MinimizerProfile& profile) {
  const double r = profile.spec().r;
  const double lo = r + 0.25 * (1.0 - r);
  const double hi = 1.0 - 0.25 * (1.0 - r);
  std::vector<Complex> points;
  points.reserve(kResidualRadii * kResidualAngles);
  for (int i = 0; i < kResidualRadii; ++i) {
    const double s = lo + (hi - lo) * i / (kResidualRadii - 1.0);
    for (int j = 0; j < kResidualAngles; ++j) {
      points.push_back(std::polar(s, 2.0 * std::numbers::pi * j / kResidualAngles));
    }
  }
  return points;
}

double pde_residual(const MinimizerProfile& profile, double h) {
  require_stencil(profile, h);
  const RadialMetric& metric = profile.metric();
  const auto w = [&profile](Complex z) { return map_point(profile, z); };
  double worst = 0.0;
  for (const Complex z : residual_points(profile)) {
    const Stencil st = sample_stencil(w, z, h);
    const Complex wzzb = (st.east + st.west + st.north + st.south - 4.0 * st.center) / (4.0 * h * h);
    const double m = std::abs(st.center);
    const Complex log_rho_w = 0.5 * metric.deriv(m) / metric.eval(m) * std::conj(st.center) / m;
    const Complex tau = wzzb + log_rho_w * d_z(st, h) * d_zbar(st, h);
    worst = std::max(worst, std::abs(tau));
  }
  return worst;
}

double general_harmonic_residual(const MinimizerProfile& profile, double h) {
  require_stencil(profile, h);
  const auto field = [&profile](Complex z) { return hopf_quantity(profile, z); };
  double worst = 0.0;
  for (const Complex z : residual_points(profile)) {
    worst = std::max(worst, std::abs(d_zbar(sample_stencil(field, z, h), h)));
  }
  return worst;
}

HopfStatistics hopf_statistics(const MinimizerProfile& profile, const PolarGrid& grid) {
  grid.validate();
  std::vector<Complex> values;
  values.reserve(grid.size());
  for (int i = 0; i < grid.n_s; ++i) {
    for (int j = 0; j < grid.n_t; ++j) {
      const Complex z = std::polar(grid.s(i), grid.t(j));
      values.push_back(z * z * hopf_quantity(profile, z));
    }
  }
  Complex mean = 0.0;
  for (const Complex v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  double max_dev = 0.0;
  double max_im = 0.0;
  const double target = profile.hopf_constant();
  for (const Complex v : values) {
    ss += std::norm(v - mean);
    max_dev = std::max(max_dev, std::abs(v - target));
    max_im = std::max(max_im, std::abs(v.imag()));
  }
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1)), max_dev, max_im};
}

CheckResult hopf_constancy_check(const MinimizerProfile& profile, const PolarGrid& grid,
                                 double tol) {
  const HopfStatistics st = hopf_statistics(profile, grid);
  return make_check("hopf_constancy", st.max_deviation, tol,
                    format("constant %.17g, mean real part %.17g", profile.hopf_constant(),
                           st.mean.real()));
}

double perturbed_energy_excess(const MinimizerProfile& profile,
                               const std::function<double(double)>& phi,
                               const std::function<double(double)>& dphi, double eps) {
  const RadialMetric& metric = profile.metric();
  const auto lagrangian = [&metric](double s, double p, double dp) {
    return metric.eval(p) * (dp * dp + p * p / (s * s)) * s;
  };
  const auto difference = [&](double s) {
    const double p = profile.radius(s);
    const double dp = profile.slope(s, p);
    return lagrangian(s, p + eps * phi(s), dp + eps * dphi(s)) - lagrangian(s, p, dp);
  };
  const double tol = std::max(1e-15, 1e-9 * eps * eps);
  return 2.0 * std::numbers::pi * integrate_adaptive(difference, profile.spec().r, 1.0, tol);
}

CheckResult minimality_probe(const MinimizerProfile& profile, int n_perturbations, double eps,
                             std::uint64_t seed) {
  if (n_perturbations < 0 || !(eps > 0.0) || eps > 1e-2) {
    throw Error(ErrorCode::BadParameter, "minimality probe needs n >= 0 and 0 < eps <= 1e-2");
  }
  const double r = profile.spec().r;
  std::mt19937_64 gen(seed);
  int failures = 0;
  double min_excess = std::numeric_limits<double>::infinity();
  double ratio_lo = std::numeric_limits<double>::infinity();
  double ratio_hi = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_perturbations; ++k) {
    Bump phi{r, {0.0, 0.0, 0.0}};
    bool accepted = false;
    for (int attempt = 0; attempt < kMaxResamples && !accepted; ++attempt) {
      for (double& a : phi.a) a = uniform_pm1(gen);
      phi.scale = 1.0;
      const double sup =
          maximize_scalar([&phi](double s) { return std::abs(phi(s)); }, r, 1.0, 1e-12).min;
      if (!(sup > 1e-6)) continue;
      phi.scale = 1.0 / sup;
      accepted = stays_in_range(profile, phi, eps);
    }
    if (!accepted) {
      throw Error(ErrorCode::PerturbationLeavesRange,
                  "no admissible perturbation after " + std::to_string(kMaxResamples) + " draws");
    }
    const auto f = [&phi](double s) { return phi(s); };
    const auto df = [&phi](double s) { return phi.derivative(s); };
    const double big = perturbed_energy_excess(profile, f, df, eps);
    const double small = perturbed_energy_excess(profile, f, df, 0.1 * eps);
    const double ratio = big / small;
    min_excess = std::min({min_excess, big, small});
    ratio_lo = std::min(ratio_lo, ratio);
    ratio_hi = std::max(ratio_hi, ratio);
    if (big < kExcessFloor || small < kExcessFloor || !(ratio >= kRatioLow && ratio <= kRatioHigh)) {
      ++failures;
    }
  }
  std::string detail = format("min excess %.6g", min_excess);
  if (n_perturbations > 0) detail += format(", excess ratio in [%.6g, %.6g]", ratio_lo, ratio_hi);
  return make_check("radial_local_minimality", failures, 0.0, detail);
}

CheckResult modulus_equivalence_check(const RadialMetric& metric, double q, double Q,
                                      std::span<const double> r_values,
                                      const SolverConfig& config) {
  int mismatches = 0;
  int skipped = 0;
  const auto sign = [&config](double v) { return v > config.tol_c ? 1 : (v < -config.tol_c ? -1 : 0); };
  for (const double r : r_values) {
    double c = 0.0;
    try {
      c = solve_c(ProblemSpec{metric, q, Q, r}, config);
    } catch (const BelowCriticalError&) {
      ++skipped;
      continue;
    }
    const double gap = std::log(Q / q) - std::log(1.0 / r);
    if (sign(c) != sign(gap)) ++mismatches;
  }
  return make_check("modulus_sign_law", mismatches, 0.0,
                    std::to_string(r_values.size() - skipped) + " solved, " +
                        std::to_string(skipped) + " below critical");
}

VerificationReport run_full_suite(const ProblemSpec& spec, const SolverConfig& config,
                                  const SuiteOptions& options) {
  VerificationReport report;
  const double scale = options.tolerance_scale;
  const auto add = [&report](CheckResult c) { report.checks.push_back(std::move(c)); };

  std::optional<MinimizerProfile> solved;
  try {
    solved.emplace(solve(spec, config));
  } catch (const BelowCriticalError& e) {
    add(make_check("solve", 1.0, 0.0,
                   format("BelowCritical: critical_r %.17g", e.critical_r())));
    return report;
  } catch (const Error& e) {
    add(make_check("solve", 1.0, 0.0, e.what()));
    return report;
  }
  const MinimizerProfile& profile = *solved;
  const double c = profile.c();
  const double r = spec.r;
  const RadialMetric& metric = spec.metric;
  add(make_check("solve", 0.0, 0.0,
                 format("c %.17g, ", c) + std::string(to_string(profile.classification()))));

  add(make_check("critical_constant_bound", std::max(0.0, profile.critical_c() - c),
                 config.tol_c * scale, format("critical_c %.17g", profile.critical_c())));

  add(make_check("profile_endpoints",
                 std::max(std::abs(profile.radius(1.0) - spec.Q), profile.endpoint_mismatch()),
                 1e-6 * spec.Q * scale));

  {
    double worst = 0.0;
    double unt = std::numeric_limits<double>::infinity();
    constexpr int kSamples = 101;
    for (int k = 0; k < kSamples; ++k) {
      const double s = r + (1.0 - r) * k / (kSamples - 1.0);
      const double p = profile.radius(s);
      worst = std::max(worst, std::abs(profile.inverse_at(p) - s));
      unt = std::min(unt, radial_weight(metric, p) + c);
    }
    add(make_check("inverse_round_trip", worst, 1e-8 * scale));
    add(make_check("constraint_lower_bound", std::max(0.0, -unt), 1e-10 * scale,
                   format("min p^2 rho(p) + c = %.6g", unt)));
  }

  PolarGrid grid{options.grid_s, options.grid_t, r};
  const HopfStatistics hs = hopf_statistics(profile, grid);
  add(make_check("hopf_constancy", hs.max_deviation, 1e-6 * (1.0 + std::abs(c)) * scale,
                 format("constant %.17g, mean real part %.17g", profile.hopf_constant(),
                        hs.mean.real())));
  add(make_check("hopf_real", hs.max_imaginary, 1e-8 * scale));

  const double h = options.fd_step;
  {
    const double fine = pde_residual(profile, h);
    const double coarse = pde_residual(profile, 2.0 * h);
    add(make_check("pde_residual", fine, 1e-4 * scale, format("h %.3g", h)));
    if (coarse < kResidualNoiseFloor) {
      add(make_check("pde_residual_order", 0.0, 0.5, "residual at noise floor"));
    } else {
      add(make_check("pde_residual_order", std::abs(coarse / fine - 4.0), 0.5,
                     format("ratio %.6g", coarse / fine)));
    }
  }
  {
    const double fine = general_harmonic_residual(profile, h);
    const double coarse = general_harmonic_residual(profile, 2.0 * h);
    add(make_check("general_harmonic_residual", fine, 1e-4 * scale, format("h %.3g", h)));
    if (coarse < kResidualNoiseFloor) {
      add(make_check("general_harmonic_residual_order", 0.0, 0.5, "residual at noise floor"));
    } else {
      add(make_check("general_harmonic_residual_order", std::abs(coarse / fine - 4.0), 0.5,
                     format("ratio %.6g", coarse / fine)));
    }
  }

  const double e = energy(profile);
  const double bound = 2.0 * area(metric, spec.q, spec.Q);
  add(make_check("energy_lower_bound", std::max(0.0, bound - e), 1e-9 * scale,
                 format("energy %.17g, 2 area %.17g", e, bound)));
  if (std::abs(c) <= 1e-8) {
    add(make_check("energy_equals_lower_bound", std::abs(e - bound), 1e-8 * scale));
  }

  const std::vector<FieldSample> samples = export_grid(profile, grid);
  const QuasiconformalConstants kk = kk_constants(profile);
  double kk_excess = -std::numeric_limits<double>::infinity();
  double identity_err = 0.0;
  double formula_err = 0.0;
  double min_jac = std::numeric_limits<double>::infinity();
  for (const FieldSample& f : samples) {
    const double a = std::abs(f.wz);
    const double b = std::abs(f.wzb);
    kk_excess = std::max(kk_excess, f.opnorm * f.opnorm - 2.0 * kk.K * f.jac - kk.K_prime);
    identity_err = std::max({identity_err, std::abs(f.opnorm - (a + b)) / f.opnorm,
                             std::abs(f.jac - f.opnorm * f.lonorm) / (f.opnorm * f.opnorm)});
    const double s = std::abs(f.z);
    const double p = std::abs(f.w);
    const double rho = metric.eval(p);
    const double op_sq = (p * p + std::max(c, 0.0) / rho) / (s * s);
    const double lo_sq = (p * p + std::min(c, 0.0) / rho) / (s * s);
    formula_err = std::max({formula_err, std::abs(f.opnorm * f.opnorm - op_sq) / op_sq,
                            std::abs(f.lonorm * f.lonorm - lo_sq) / op_sq});
    min_jac = std::min(min_jac, f.jac);
  }
  add(make_check("kk_inequality", std::max(0.0, kk_excess), 1e-9 * scale,
                 format("K 1, K' %.17g", kk.K_prime)));
  add(make_check("norm_identities", identity_err, 1e-12 * scale));
  add(make_check("operator_norm_formulas", formula_err, 1e-10 * scale));
  add(make_check("jacobian_sign", std::max(0.0, -min_jac), 1e-12 * scale,
                 format("min J %.6g", min_jac)));

  const LipschitzBounds lb = lipschitz_constant(profile);
  if (c >= 0.0) {
    add(make_check("bi_lipschitz_lower_bound", std::max(0.0, spec.q - lb.inf_lo), 1e-9 * scale,
                   format("inf l(Dw) %.17g, q %.17g", lb.inf_lo, spec.q)));
  }
  if (profile.classification() == Classification::Critical) {
    add(make_check("critical_degeneracy", lb.inf_lo, 1e-6 * scale,
                   format("inf l(Dw) %.6g", lb.inf_lo)));
  }

  const double rs[] = {r};
  add(modulus_equivalence_check(metric, spec.q, spec.Q, rs, config));

  add(minimality_probe(profile, options.perturbations, options.perturbation_eps, config.seed));
  return report;
}

}  // namespace annulus
