#include "annulus/radial_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "annulus/errors.hpp"

namespace annulus {
namespace {

constexpr double kArgminTolerance = 1e-12;
// Below this offset from the anchor, m(anchor + t) - m(anchor) is taken from
// its second-order Taylor polynomial instead of a cancelling difference.
constexpr double kTaylorOffset = 1e-6;
// Forced square-root substitution window above c_crit.
constexpr double kNearCriticalGap = 1e-6;
// End cells whose radicand is below this fraction of y^2 are evaluated by
// inverting the modulus integral.
constexpr double kSteepRadicand = 1e-2;
constexpr double kEndCellTolerance = 1e-13;

double weight_derivative(const RadialMetric& metric, double y) {
  return 2.0 * y * metric.eval(y) + y * y * metric.deriv(y);
}

double weight_second_derivative(const RadialMetric& metric, double y) {
  return 2.0 * metric.eval(y) + 4.0 * y * metric.deriv(y) + y * y * metric.deriv2(y);
}

// 1 / sqrt(radicand) at anchor + direction * t, with the offset t kept exact.
ScalarFn near_integrand(const RadialMetric& metric, double c, double Q, double anchor,
                        double direction) {
  const double m_anchor = radial_weight(metric, anchor);
  const double d1 = weight_derivative(metric, anchor);
  const double d2 = weight_second_derivative(metric, anchor);
  const double base = m_anchor + c;
  return [&metric, anchor, direction, m_anchor, d1, d2, base, Q](double t) {
    const double y = anchor + direction * t;
    const double dm = t <= kTaylorOffset * Q ? direction * d1 * t + 0.5 * d2 * t * t
                                             : radial_weight(metric, y) - m_anchor;
    return 1.0 / std::sqrt((base + dm) / metric.eval(y));
  };
}

std::string describe(const ProblemSpec& spec) {
  return spec.metric.name + " q=" + std::to_string(spec.q) + " Q=" + std::to_string(spec.Q) +
         " r=" + std::to_string(spec.r);
}

}  // namespace

void ProblemSpec::validate() const {
  require_annulus(metric, q, Q);
  if (!(r > 0.0 && r < 1.0)) {
    throw Error(ErrorCode::OutOfDomain, "domain inner radius must lie in (0, 1), got " +
                                            std::to_string(r));
  }
}

ProblemSpec normalized_problem(RadialMetric metric, double q, double Q, double r1, double R1) {
  if (!(r1 > 0.0 && R1 > r1)) {
    throw Error(ErrorCode::OutOfDomain, "domain annulus needs 0 < r1 < R1");
  }
  return {std::move(metric), q, Q, r1 / R1};
}

void SolverConfig::validate() const {
  if (!(tol_c > 0.0 && tol_quad > 0.0 && tol_ode > 0.0)) {
    throw Error(ErrorCode::BadParameter, "solver tolerances must be positive");
  }
  if (profile_knots < 16) throw Error(ErrorCode::BadParameter, "profile_knots must be >= 16");
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::Conformal: return "Conformal";
    case Classification::Expanding: return "Expanding";
    case Classification::Subcritical: return "Subcritical";
    case Classification::Critical: return "Critical";
  }
  return "Unknown";
}

Classification classify(double c, double critical_c, double tol_c) {
  if (std::abs(c) <= tol_c) return Classification::Conformal;
  if (c > tol_c) return Classification::Expanding;
  if (c - critical_c <= tol_c) return Classification::Critical;
  return Classification::Subcritical;
}

double radial_weight(const RadialMetric& metric, double y) { return y * y * metric.eval(y); }

CriticalPoint critical_point(const RadialMetric& metric, double q, double Q) {
  require_annulus(metric, q, Q);
  const ScalarMinimum m = minimize_scalar(
      [&metric](double y) { return radial_weight(metric, y); }, q, Q, kArgminTolerance);
  return {-m.min, m.argmin};
}

double critical_constant(const RadialMetric& metric, double q, double Q) {
  return critical_point(metric, q, Q).c;
}

double modulus_of_c(const RadialMetric& metric, double q, double Q, double c, double tol) {
  const CriticalPoint cp = critical_point(metric, q, Q);
  const double scale = std::max(1.0, std::abs(cp.c));
  if (c < cp.c - 1e-14 * scale) {
    throw Error(ErrorCode::BelowCritical, "c = " + std::to_string(c) + " is below c_crit = " +
                                              std::to_string(cp.c));
  }
  c = std::max(c, cp.c);
  const double gap = c - cp.c;
  const double span = Q - q;
  const double y_star = cp.radius;
  const bool star_lower = y_star - q <= 1e-9 * span;
  const bool star_upper = Q - y_star <= 1e-9 * span;
  const bool near_critical = gap <= kNearCriticalGap * scale;

  if (gap == 0.0) {
    // The radicand has a double zero at an interior or flat minimum.
    const double slope = std::abs(weight_derivative(metric, y_star));
    if ((!star_lower && !star_upper) || slope * span <= 1e-9 * radial_weight(metric, y_star)) {
      throw Error(ErrorCode::DivergentModulus,
                  "modulus diverges: y^2 rho(y) has a flat minimum at y = " +
                      std::to_string(y_star));
    }
  }

  const auto integrand = [&metric, c](double y) {
    return 1.0 / std::sqrt((radial_weight(metric, y) + c) / metric.eval(y));
  };
  const auto near = [&metric, c, Q](double anchor, double direction) {
    return near_integrand(metric, c, Q, anchor, direction);
  };

  try {
    if (near_critical && !star_lower && !star_upper) {
      QuadratureOptions left;
      left.near_lower = near(q, 1.0);
      left.near_upper = near(y_star, -1.0);
      left.substitute_upper = true;
      QuadratureOptions right;
      right.near_lower = near(y_star, 1.0);
      right.near_upper = near(Q, -1.0);
      right.substitute_lower = true;
      return integrate_adaptive(integrand, q, y_star, 0.5 * tol, left) +
             integrate_adaptive(integrand, y_star, Q, 0.5 * tol, right);
    }
    QuadratureOptions options;
    options.near_lower = near(q, 1.0);
    options.near_upper = near(Q, -1.0);
    options.substitute_lower = near_critical && star_lower;
    options.substitute_upper = near_critical && star_upper;
    return integrate_adaptive(integrand, q, Q, tol, options);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DivergentIntegral) {
      throw Error(ErrorCode::DivergentModulus, e.what());
    }
    throw;
  }
}

double critical_inner_radius(const RadialMetric& metric, double q, double Q, double tol) {
  const double c_crit = critical_constant(metric, q, Q);
  try {
    return std::exp(-modulus_of_c(metric, q, Q, c_crit, tol));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DivergentModulus) return 0.0;
    throw;
  }
}

double solve_c(const ProblemSpec& spec, const SolverConfig& config) {
  spec.validate();
  config.validate();
  const RadialMetric& metric = spec.metric;
  const double target = -std::log(spec.r);
  const double mu_zero = std::log(spec.Q / spec.q);  // c = 0 integrates dy / y
  const auto excess = [&](double c) {
    return modulus_of_c(metric, spec.q, spec.Q, c, config.tol_quad) - target;
  };
  const double root_tol = 1e-3 * config.tol_c;

  if (std::abs(mu_zero - target) <= config.tol_c) return 0.0;

  if (target < mu_zero) {
    // Thinner domain than the target: c > 0. mu decreases to 0 as c grows.
    double lo = 0.0;
    double hi = 1.0;
    while (excess(hi) >= 0.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e18) throw Error(ErrorCode::NoBracket, "no upper bracket for c: " + describe(spec));
    }
    return find_root_bracketed(excess, lo, hi, root_tol);
  }

  const double c_crit = critical_constant(metric, spec.q, spec.Q);
  double mu_max = std::numeric_limits<double>::infinity();
  try {
    mu_max = modulus_of_c(metric, spec.q, spec.Q, c_crit, config.tol_quad);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DivergentModulus) throw;
  }
  // mu_max is only known to the quadrature tolerance.
  const double mu_tol = config.tol_c + config.tol_quad;
  if (target > mu_max + mu_tol) {
    throw BelowCriticalError(std::exp(-mu_max),
                             "domain annulus is below the critical configuration (r_crit = " +
                                 std::to_string(std::exp(-mu_max)) + "): " + describe(spec));
  }
  if (std::abs(target - mu_max) <= mu_tol) return c_crit;

  double lo = c_crit;
  if (!std::isfinite(mu_max)) {
    lo = c_crit + std::max(1e-12, 1e-12 * std::abs(c_crit));
    if (excess(lo) <= 0.0) {
      throw Error(ErrorCode::NoConvergence,
                  "domain modulus beyond double-precision resolution of mu near c_crit: " +
                      describe(spec));
    }
  }
  return find_root_bracketed(excess, lo, 0.0, root_tol);
}

// ---------------------------------------------------------------------------
// MinimizerProfile

MinimizerProfile::MinimizerProfile(ProblemSpec spec, double c, double critical_c,
                                   Classification classification, std::vector<double> knots,
                                   std::vector<double> values, double endpoint_mismatch,
                                   std::function<double(double)> closed_form)
    : spec_(std::move(spec)),
      c_(c),
      critical_c_(critical_c),
      classification_(classification),
      endpoint_mismatch_(endpoint_mismatch),
      knots_(std::move(knots)),
      values_(std::move(values)),
      closed_form_(std::move(closed_form)) {
  for (std::size_t k = 1; k < values_.size(); ++k) {
    if (!(values_[k] > values_[k - 1])) {
      throw Error(ErrorCode::ProfileMismatch,
                  "profile is not strictly increasing near s = " + std::to_string(knots_[k]));
    }
  }
  std::vector<double> slopes(knots_.size());
  for (std::size_t k = 0; k < knots_.size(); ++k) slopes[k] = slope(knots_[k], values_[k]);
  profile_ = Interpolant::with_slopes(knots_, values_, std::move(slopes));
  inverse_ = Interpolant::monotone(values_, knots_);
}

double MinimizerProfile::radicand(double y) const {
  return (radial_weight(spec_.metric, y) + c_) / spec_.metric.eval(y);
}

double MinimizerProfile::slope(double s, double p) const {
  return std::sqrt(std::max(0.0, radicand(p))) / s;
}

namespace {

double clamp_to_range(double x, double lo, double hi, const char* what) {
  const double slack = 1e-12 * std::max(1.0, hi);
  if (!(x >= lo - slack && x <= hi + slack)) {
    throw Error(ErrorCode::OutOfDomain, std::string(what) + " " + std::to_string(x) +
                                            " outside [" + std::to_string(lo) + ", " +
                                            std::to_string(hi) + "]");
  }
  return std::clamp(x, lo, hi);
}

}  // namespace

double MinimizerProfile::radius(double s) const {
  s = clamp_to_range(s, spec_.r, 1.0, "radius");
  if (s == knots_.front()) return values_.front();
  if (s == knots_.back()) return values_.back();
  if (closed_form_) return closed_form_(s);

  const std::size_t n = knots_.size();
  const double delta = (1.0 - spec_.r) / static_cast<double>(n - 1);
  // Never start from an end knot: the radicand may vanish there.
  if (s < knots_[1] && radicand(spec_.q) < kSteepRadicand * spec_.q * spec_.q) {
    return end_cell_radius(s, true);
  }
  if (s > knots_[n - 2] && radicand(spec_.Q) < kSteepRadicand * spec_.Q * spec_.Q) {
    return end_cell_radius(s, false);
  }
  const auto nearest = static_cast<long long>(std::llround((s - spec_.r) / delta));
  const auto k = static_cast<std::size_t>(std::clamp<long long>(nearest, 1, static_cast<long long>(n) - 2));
  if (s == knots_[k]) return values_[k];
  return dormand_prince_step([this](double si, double p) { return slope(si, p); }, knots_[k],
                             values_[k], s - knots_[k]);
}

double MinimizerProfile::end_cell_radius(double s, bool lower) const {
  const RadialMetric& metric = spec_.metric;
  const double q = spec_.q;
  const double Q = spec_.Q;
  const std::size_t n = values_.size();
  const auto integrand = [this](double y) { return 1.0 / std::sqrt(radicand(y)); };
  if (lower) {
    QuadratureOptions options;
    options.near_lower = near_integrand(metric, c_, Q, q, 1.0);
    options.substitute_lower = true;
    const double target = std::log(s / spec_.r);
    const auto f = [&](double p) {
      if (p <= q) return -target;
      return integrate_adaptive(integrand, q, p, kEndCellTolerance, options) - target;
    };
    return find_root_bracketed(f, q, values_[std::min<std::size_t>(2, n - 1)], 1e-16);
  }
  QuadratureOptions options;
  options.near_upper = near_integrand(metric, c_, Q, Q, -1.0);
  options.substitute_upper = true;
  const double target = -std::log(s);
  const auto f = [&](double p) {
    if (p >= Q) return target;
    return target - integrate_adaptive(integrand, p, Q, kEndCellTolerance, options);
  };
  return find_root_bracketed(f, values_[n >= 3 ? n - 3 : 0], Q, 1e-16);
}

double MinimizerProfile::radius_derivative(double s) const {
  s = clamp_to_range(s, spec_.r, 1.0, "radius");
  return slope(s, radius(s));
}

double MinimizerProfile::inverse_at(double y) const {
  y = clamp_to_range(y, spec_.q, spec_.Q, "target radius");
  if (y <= values_.front()) return knots_.front();
  if (y >= values_.back()) return knots_.back();
  const auto it = std::upper_bound(values_.begin(), values_.end(), y);
  const auto k = static_cast<std::size_t>(it - values_.begin()) - 1;
  if (values_[k] == y) return knots_[k];
  return find_root_bracketed([this, y](double s) { return radius(s) - y; }, knots_[k],
                             knots_[k + 1], 4e-16);
}

// ---------------------------------------------------------------------------
// Construction

MinimizerProfile build_profile(const ProblemSpec& spec, double c, const SolverConfig& config) {
  spec.validate();
  config.validate();
  const RadialMetric& metric = spec.metric;
  const double c_crit = critical_constant(metric, spec.q, spec.Q);
  if (c < c_crit - config.tol_c) {
    throw Error(ErrorCode::BelowCritical,
                "c = " + std::to_string(c) + " below c_crit = " + std::to_string(c_crit));
  }
  c = std::max(c, c_crit);

  const auto n = static_cast<std::size_t>(config.profile_knots);
  std::vector<double> knots(n);
  for (std::size_t k = 0; k < n; ++k) {
    knots[k] = spec.r + (1.0 - spec.r) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  knots.back() = 1.0;

  const auto radicand = [&metric, c](double y) {
    return (radial_weight(metric, y) + c) / metric.eval(y);
  };
  const OdeRhs rhs = [&radicand](double s, double p) {
    return std::sqrt(std::max(0.0, radicand(p))) / s;
  };

  double s_start = 1.0;
  double p_start = spec.Q;
  if (radicand(spec.Q) <= 1e-14 * spec.Q * spec.Q) {
    // p'(1) = 0: the profile equation is not Lipschitz at the start, so step
    // off the boundary along the Taylor expansion p(1 - h) = Q + p''(1) h^2 / 2.
    const double rho = metric.eval(spec.Q);
    const double p2 = spec.Q - c * metric.deriv(spec.Q) / (2.0 * rho * rho);
    const double h = 0.25 * (knots[n - 1] - knots[n - 2]);
    s_start = 1.0 - h;
    p_start = spec.Q + 0.5 * p2 * h * h;
  }

  std::vector<double> outputs(knots.rbegin() + 1, knots.rend());
  const std::vector<double> integrated =
      ode_integrate_to(rhs, p_start, s_start, outputs, config.tol_ode);

  std::vector<double> values(n);
  values.back() = spec.Q;
  for (std::size_t i = 0; i < integrated.size(); ++i) values[n - 2 - i] = integrated[i];

  const double mismatch = std::abs(values.front() - spec.q);
  if (!(mismatch <= 1e-6 * spec.Q)) {
    throw Error(ErrorCode::ProfileMismatch,
                "p(r) = " + std::to_string(values.front()) + " misses q by " +
                    std::to_string(mismatch) + ": " + describe(spec) + " c=" + std::to_string(c));
  }
  double worst = 0.0;
  for (const double p : values) worst = std::min(worst, radicand(p));
  if (worst < -1e-10) {
    throw Error(ErrorCode::NegativeRadicand,
                "radicand reached " + std::to_string(worst) + ": " + describe(spec));
  }
  values.front() = spec.q;

  return MinimizerProfile(spec, c, c_crit, classify(c, c_crit, config.tol_c), std::move(knots),
                          std::move(values), mismatch);
}

MinimizerProfile solve(const ProblemSpec& spec, const SolverConfig& config) {
  return build_profile(spec, solve_c(spec, config), config);
}

MinimizerProfile euclidean_nitsche_map(double r, int knot_count) {
  if (!(r > 0.0 && r < 1.0)) {
    throw Error(ErrorCode::OutOfDomain, "Nitsche map needs 0 < r < 1");
  }
  if (knot_count < 16) throw Error(ErrorCode::BadParameter, "knots must be >= 16");
  const double q = 2.0 * r / (1.0 + r * r);
  ProblemSpec spec{parse_metric("euclidean"), q, 1.0, r};
  const double c = -radial_weight(spec.metric, q);  // = -4 r^2 / (1 + r^2)^2
  const auto p = [r](double s) { return (r * r + s * s) / (s * (1.0 + r * r)); };

  const auto n = static_cast<std::size_t>(knot_count);
  std::vector<double> knots(n);
  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    knots[k] = r + (1.0 - r) * static_cast<double>(k) / static_cast<double>(n - 1);
    values[k] = p(knots[k]);
  }
  knots.back() = 1.0;
  values.front() = q;
  values.back() = 1.0;
  return MinimizerProfile(std::move(spec), c, c, Classification::Critical, std::move(knots),
                          std::move(values), 0.0, p);
}

}  // namespace annulus
