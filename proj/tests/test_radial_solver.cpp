#include <gtest/gtest.h>

#include <cmath>

#include "annulus/errors.hpp"
#include "annulus/metric.hpp"
#include "annulus/radial_solver.hpp"

using namespace annulus;

namespace {

ProblemSpec euclid(double r) { return {parse_metric("euclidean"), 0.8, 1.0, r}; }

// Closed form of the modulus for rho = 1.
double euclid_mu(double q, double Q, double c) {
  return std::log((Q + std::sqrt(Q * Q + c)) / (q + std::sqrt(q * q + c)));
}

}  // namespace

TEST(critical_constant, builtins) {
  EXPECT_DOUBLE_EQ(critical_constant(parse_metric("euclidean"), 0.8, 1.0), -0.64);
  EXPECT_DOUBLE_EQ(critical_constant(parse_metric("inverse_r"), 0.5, 1.0), -0.5);
  EXPECT_NEAR(critical_constant(parse_metric("sphere"), 0.5, 1.0), -0.16, 1e-15);
  EXPECT_NEAR(critical_constant(parse_metric("hyperbolic"), 0.3, 0.8), -0.10868252626494384,
              1e-14);
}

TEST(modulus_of_c, euclidean) {
  const RadialMetric m = parse_metric("euclidean");
  EXPECT_NEAR(modulus_of_c(m, 0.8, 1.0, 0.0), std::log(1.25), 1e-10);
  EXPECT_NEAR(modulus_of_c(m, 0.8, 1.0, -0.64), std::log(2.0), 1e-10);
  for (const double c : {-0.5, -0.1, 0.3, 4.0}) {
    EXPECT_NEAR(modulus_of_c(m, 0.8, 1.0, c), euclid_mu(0.8, 1.0, c), 1e-10) << c;
  }
}

TEST(modulus_of_c, inverse_r_closed_form) {
  const auto F = [](double y, double c) { return 2.0 * std::log(std::sqrt(y) + std::sqrt(y + c)); };
  const RadialMetric m = parse_metric("inverse_r");
  for (const double c : {0.5, 0.3, -0.1, -0.3, 2.0, -0.5}) {
    EXPECT_NEAR(modulus_of_c(m, 0.5, 1.0, c), F(1.0, c) - F(0.5, c), 1e-10) << c;
  }
  EXPECT_NEAR(modulus_of_c(m, 0.5, 1.0, 0.5), 0.5296844955220916, 1e-10);
}

TEST(modulus_of_c, mpmath_reference_values) {
  EXPECT_NEAR(modulus_of_c(parse_metric("sphere"), 0.5, 1.0, -0.16), 1.7507538029157525, 1e-9);
  EXPECT_NEAR(modulus_of_c(parse_metric("sphere"), 0.5, 1.0, 0.3), 0.44742641731449993, 1e-10);
  EXPECT_NEAR(modulus_of_c(parse_metric("hyperbolic"), 0.3, 0.8, -0.10868252626494384),
              1.5050000298141263, 1e-9);
  EXPECT_NEAR(modulus_of_c(parse_metric("hyperbolic"), 0.3, 0.8, 0.3), 0.74213954968844505, 1e-10);
}

TEST(modulus_of_c, below_critical) {
  try {
    modulus_of_c(parse_metric("euclidean"), 0.8, 1.0, -0.7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BelowCritical);
  }
}

TEST(modulus_of_c, interior_minimum_diverges) {
  // y^2 rho(y) is constant, so the radicand vanishes identically at c_crit.
  try {
    modulus_of_c(parse_metric("power:-2"), 0.5, 1.0, -1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DivergentModulus);
  }
  EXPECT_EQ(critical_inner_radius(parse_metric("power:-2"), 0.5, 1.0), 0.0);
}

TEST(solve_c, euclidean_examples) {
  EXPECT_EQ(solve_c(euclid(0.8)), 0.0);
  EXPECT_NEAR(solve_c(euclid(0.5)), -0.64, 1e-12);
  EXPECT_NEAR(solve_c(euclid(0.6)), -0.609375, 1e-9);
  EXPECT_NEAR(solve_c(euclid(0.9)), 2.7922437673132632, 1e-8);
}

TEST(solve_c, below_critical_carries_radius) {
  try {
    solve_c(euclid(0.4));
    FAIL();
  } catch (const BelowCriticalError& e) {
    EXPECT_EQ(e.code(), ErrorCode::BelowCritical);
    EXPECT_NEAR(e.critical_r(), 0.5, 1e-8);
  }
}

TEST(solve_c, round_trip_other_metrics) {
  struct Case {
    const char* metric;
    double q, Q, c;
  };
  for (const Case& k : {Case{"sphere", 0.5, 1.0, 0.3}, Case{"sphere", 0.5, 1.0, -0.1},
                        Case{"hyperbolic", 0.3, 0.8, -0.1}, Case{"inverse_r", 0.5, 1.0, 2.0}}) {
    const RadialMetric m = parse_metric(k.metric);
    const double r = std::exp(-modulus_of_c(m, k.q, k.Q, k.c));
    EXPECT_NEAR(solve_c(ProblemSpec{m, k.q, k.Q, r}), k.c, 1e-7) << k.metric << " " << k.c;
  }
}

TEST(critical_inner_radius, euclidean) {
  EXPECT_NEAR(critical_inner_radius(parse_metric("euclidean"), 0.8, 1.0), 0.5, 1e-10);
  for (const double r : {0.3, 0.7}) {
    EXPECT_NEAR(critical_inner_radius(parse_metric("euclidean"), 2 * r / (1 + r * r), 1.0), r,
                1e-10);
  }
}

TEST(critical_inner_radius, inverse_r_and_sphere) {
  EXPECT_NEAR(critical_inner_radius(parse_metric("inverse_r"), 0.5, 1.0), 0.1715728752538099,
              1e-10);
  EXPECT_NEAR(critical_inner_radius(parse_metric("sphere"), 0.5, 1.0), 0.17364300150360134,
              1e-10);
}

TEST(classify, boundaries) {
  EXPECT_EQ(classify(0.0, -0.64, 1e-9), Classification::Conformal);
  EXPECT_EQ(classify(5e-10, -0.64, 1e-9), Classification::Conformal);
  EXPECT_EQ(classify(1e-3, -0.64, 1e-9), Classification::Expanding);
  EXPECT_EQ(classify(-0.3, -0.64, 1e-9), Classification::Subcritical);
  EXPECT_EQ(classify(-0.64 + 5e-10, -0.64, 1e-9), Classification::Critical);
}

TEST(build_profile, conformal_identity) {
  const MinimizerProfile p = build_profile(euclid(0.8), 0.0);
  EXPECT_EQ(p.classification(), Classification::Conformal);
  for (int k = 0; k <= 20; ++k) {
    const double s = 0.8 + 0.01 * k;
    EXPECT_NEAR(p.radius(s), s, 1e-12);
  }
}

TEST(build_profile, nitsche_profile) {
  const MinimizerProfile p = build_profile(euclid(0.5), -0.64);
  EXPECT_EQ(p.classification(), Classification::Critical);
  EXPECT_NEAR(p.radius(0.7), (0.25 + 0.49) / (0.7 * 1.25), 1e-10);
  EXPECT_DOUBLE_EQ(p.radius(0.5), 0.8);
  EXPECT_DOUBLE_EQ(p.radius(1.0), 1.0);
  for (const double s : {0.5 + 1e-9, 0.5 + 1e-6, 0.5004, 0.52, 0.99}) {
    EXPECT_NEAR(p.radius(s), (0.25 + s * s) / (1.25 * s), 1e-11) << s;
  }
}

TEST(build_profile, inconsistent_constant) {
  try {
    build_profile(euclid(0.5), -0.3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ProfileMismatch);
  }
}

TEST(MinimizerProfile, invariants) {
  const RadialMetric m = parse_metric("sphere");
  const double r = 0.38341000060454675;
  const MinimizerProfile p = solve(ProblemSpec{m, 0.5, 1.0, r});
  EXPECT_NEAR(p.c(), -0.1, 1e-8);
  EXPECT_EQ(p.classification(), Classification::Subcritical);
  EXPECT_DOUBLE_EQ(p.hopf_constant(), 0.25 * p.c());
  EXPECT_GE(p.c(), p.critical_c());
  double prev = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double s = r + (1.0 - r) * k / 100.0;
    const double y = p.radius(s);
    EXPECT_GT(y, prev);
    prev = y;
    EXPECT_NEAR(p.inverse_at(y), s, 1e-8);
    EXPECT_NEAR(p.inverse()(y), s, 1e-5);
  }
  EXPECT_NEAR(p.radius(r), 0.5, 1e-12);
  EXPECT_NEAR(p.radius(1.0), 1.0, 1e-12);
}

TEST(MinimizerProfile, first_integral) {
  const MinimizerProfile p = solve(ProblemSpec{parse_metric("hyperbolic"), 0.3, 0.8, 0.3});
  const RadialMetric& m = p.metric();
  for (const double s : {0.31, 0.5, 0.77, 0.95}) {
    const double y = p.radius(s);
    const double dy = p.radius_derivative(s);
    EXPECT_NEAR(m(y) * (s * s * dy * dy - y * y), p.c(), 1e-11);
  }
}

TEST(euclidean_nitsche_map, closed_form) {
  const MinimizerProfile p = euclidean_nitsche_map(0.5);
  EXPECT_DOUBLE_EQ(p.spec().q, 0.8);
  EXPECT_NEAR(p.c(), -0.64, 1e-15);
  EXPECT_DOUBLE_EQ(p.radius(1.0), 1.0);
  EXPECT_NEAR(p.radius_derivative(0.5), 0.0, 1e-15);
  EXPECT_EQ(p.classification(), Classification::Critical);
}

TEST(normalized_problem, rescales_domain) {
  const ProblemSpec s = normalized_problem(parse_metric("euclidean"), 0.8, 1.0, 1.0, 2.0);
  EXPECT_DOUBLE_EQ(s.r, 0.5);
}

TEST(ProblemSpec, validation) {
  try {
    solve(ProblemSpec{parse_metric("euclidean"), 0.8, 1.0, 1.2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfDomain);
  }
}
