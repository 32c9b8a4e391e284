#include "annulus/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "annulus/errors.hpp"
#include "annulus/metric.hpp"
#include "annulus/numerics.hpp"

namespace annulus {
namespace {

constexpr double kEnergyTolerance = 1e-12;
constexpr double kExtremumTolerance = 1e-12;
constexpr std::size_t kExtremumScan = 2048;

struct PolarPoint {
  double s;
  Complex phase;  // e^{it}
};

PolarPoint polar(const MinimizerProfile& profile, Complex z) {
  const double s = std::abs(z);
  const double r = profile.spec().r;
  if (!(s >= r * (1.0 - 1e-12) && s <= 1.0 + 1e-12)) {
    throw Error(ErrorCode::OutOfAnnulus, "|z| = " + std::to_string(s) + " outside [" +
                                             std::to_string(r) + ", 1]");
  }
  return {std::clamp(s, r, 1.0), z / s};
}

}  // namespace

void PolarGrid::validate() const {
  if (n_s < 2 || n_t < 4) throw Error(ErrorCode::BadParameter, "grid needs n_s >= 2, n_t >= 4");
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorCode::BadParameter, "grid inner radius not in (0, 1)");
}

double PolarGrid::s(int i) const {
  if (i == n_s - 1) return 1.0;
  return r + (1.0 - r) * static_cast<double>(i) / static_cast<double>(n_s - 1);
}

double PolarGrid::t(int j) const {
  return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_t);
}

Complex map_point(const MinimizerProfile& profile, Complex z) {
  const PolarPoint pt = polar(profile, z);
  return profile.radius(pt.s) * pt.phase;
}

WirtingerPair derivatives_point(const MinimizerProfile& profile, Complex z) {
  const PolarPoint pt = polar(profile, z);
  const double p = profile.radius(pt.s);
  const double dp = profile.slope(pt.s, p);
  const double tangential = p / pt.s;
  return {Complex(0.5 * (dp + tangential), 0.0), 0.5 * (dp - tangential) * pt.phase * pt.phase};
}

OperatorNorms operator_norms(const MinimizerProfile& profile, Complex z) {
  const PolarPoint pt = polar(profile, z);
  const double p = profile.radius(pt.s);
  const double dp = profile.slope(pt.s, p);
  const double tangential = p / pt.s;
  return {std::max(tangential, dp), std::min(tangential, dp)};
}

Complex hopf_quantity(const MinimizerProfile& profile, Complex z) {
  const PolarPoint pt = polar(profile, z);
  const double p = profile.radius(pt.s);
  const WirtingerPair d = derivatives_point(profile, z);
  return profile.metric().eval(p) * d.wz * std::conj(d.wzb);
}

FieldSample sample_point(const MinimizerProfile& profile, Complex z) {
  const PolarPoint pt = polar(profile, z);
  const double p = profile.radius(pt.s);
  const double dp = profile.slope(pt.s, p);
  const double tangential = p / pt.s;
  const Complex wz(0.5 * (dp + tangential), 0.0);
  const Complex wzb = 0.5 * (dp - tangential) * pt.phase * pt.phase;
  const double a = std::abs(wz);
  const double b = std::abs(wzb);
  return {z,
          p * pt.phase,
          wz,
          wzb,
          a * a - b * b,
          a + b,
          std::abs(a - b),
          profile.metric().eval(p) * wz * std::conj(wzb)};
}

double energy(const MinimizerProfile& profile) {
  const auto density = [&profile](double s) {
    const double p = profile.radius(s);
    const double dp = profile.slope(s, p);
    return profile.metric().eval(p) * (dp * dp + p * p / (s * s)) * s;
  };
  return 2.0 * std::numbers::pi *
         integrate_adaptive(density, profile.spec().r, 1.0, kEnergyTolerance);
}

LipschitzBounds lipschitz_constant(const MinimizerProfile& profile) {
  const double r = profile.spec().r;
  const auto op = [&profile](double s) { return operator_norms(profile, Complex(s, 0.0)).opnorm; };
  const auto lo = [&profile](double s) { return operator_norms(profile, Complex(s, 0.0)).lonorm; };
  return {maximize_scalar(op, r, 1.0, kExtremumTolerance, kExtremumScan).min,
          minimize_scalar(lo, r, 1.0, kExtremumTolerance, kExtremumScan).min};
}

QuasiconformalConstants kk_constants(const MinimizerProfile& profile) {
  const ProblemSpec& spec = profile.spec();
  const double rho_inf = density_range(spec.metric, spec.q, spec.Q).inf;
  return {1.0, std::abs(profile.c()) / (spec.r * spec.r * rho_inf)};
}

std::vector<FieldSample> export_grid(const MinimizerProfile& profile, const PolarGrid& grid) {
  grid.validate();
  std::vector<FieldSample> rows;
  rows.reserve(grid.size());
  for (int i = 0; i < grid.n_s; ++i) {
    const double s = grid.s(i);
    for (int j = 0; j < grid.n_t; ++j) {
      rows.push_back(sample_point(profile, std::polar(s, grid.t(j))));
    }
  }
  return rows;
}

}  // namespace annulus
