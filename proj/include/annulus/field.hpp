#pragma once

#include <complex>
#include <vector>

#include "annulus/radial_solver.hpp"

namespace annulus {

using Complex = std::complex<double>;

/// Polar sample grid s_i = r + i (1 - r) / (n_s - 1), t_j = 2 pi j / n_t.
struct PolarGrid {
  int n_s = 32;
  int n_t = 64;
  double r = 0.5;

  void validate() const;
  double s(int i) const;
  double t(int j) const;
  std::size_t size() const { return static_cast<std::size_t>(n_s) * static_cast<std::size_t>(n_t); }
};

/// Pointwise differential data of the minimizer at z.
struct FieldSample {
  Complex z;
  Complex w;
  Complex wz;
  Complex wzb;
  double jac;     // |w_z|^2 - |w_zbar|^2
  double opnorm;  // |Dw| = |w_z| + |w_zbar|
  double lonorm;  // l(Dw) = ||w_z| - |w_zbar||
  Complex hopf;   // rho(w) w_z conj(w_zbar)
};

struct WirtingerPair {
  Complex wz;
  Complex wzb;
};

struct OperatorNorms {
  double opnorm;
  double lonorm;
};

struct LipschitzBounds {
  double sup_op;
  double inf_lo;
};

struct QuasiconformalConstants {
  double K;
  double K_prime;
};

/// w(z) = p(|z|) z / |z|. Throws OutOfAnnulus unless r <= |z| <= 1.
Complex map_point(const MinimizerProfile& profile, Complex z);

/// For z = s e^{it}: w_z = (p' + p/s) / 2 and w_zbar = e^{2it} (p' - p/s) / 2,
/// with p' taken from the profile equation.
WirtingerPair derivatives_point(const MinimizerProfile& profile, Complex z);

/// (max{p/s, p'}, min{p/s, p'}).
OperatorNorms operator_norms(const MinimizerProfile& profile, Complex z);

/// rho(w) w_z conj(w_zbar); equals hopf_constant / z^2 on the whole annulus.
Complex hopf_quantity(const MinimizerProfile& profile, Complex z);

FieldSample sample_point(const MinimizerProfile& profile, Complex z);

/// 2 pi int_r^1 rho(p) (p'^2 + p^2 / s^2) s ds.
double energy(const MinimizerProfile& profile);

/// sup |Dw| and inf l(Dw) over the closed annulus (both depend on s only).
LipschitzBounds lipschitz_constant(const MinimizerProfile& profile);

/// K = 1 and K' = |c| / (r^2 inf rho), so that ||Dw||^2 <= 2 K J + K'.
QuasiconformalConstants kk_constants(const MinimizerProfile& profile);

/// One sample per grid point, s-major then t.
std::vector<FieldSample> export_grid(const MinimizerProfile& profile, const PolarGrid& grid);

}  // namespace annulus
