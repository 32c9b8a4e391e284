#include <gtest/gtest.h>

#include <cmath>

#include "annulus/errors.hpp"
#include "annulus/verify.hpp"

using namespace annulus;

namespace {

ProblemSpec euclid(double r) { return {parse_metric("euclidean"), 0.8, 1.0, r}; }

const MinimizerProfile& critical() {
  static const MinimizerProfile p = solve(euclid(0.5));
  return p;
}

const MinimizerProfile& conformal() {
  static const MinimizerProfile p = solve(euclid(0.8));
  return p;
}

const MinimizerProfile& sphere() {
  static const MinimizerProfile p =
      solve(ProblemSpec{parse_metric("sphere"), 0.5, 1.0, 0.63927125381535218});
  return p;
}

}  // namespace

TEST(make_check, pass_rule) {
  EXPECT_TRUE(make_check("a", 1.0, 1.0).passed);
  EXPECT_FALSE(make_check("a", 1.1, 1.0).passed);
  EXPECT_FALSE(make_check("a", std::nan(""), 1.0).passed);
}

TEST(pde_residual, nitsche_is_harmonic) { EXPECT_LE(pde_residual(critical(), 1e-3), 1e-5); }

TEST(pde_residual, conformal) {
  for (const double h : {2e-3, 5e-3, 2e-2}) EXPECT_LE(pde_residual(conformal(), h), 1e-10);
  EXPECT_LE(pde_residual(conformal(), 1e-3), 2e-10);
}

TEST(pde_residual, second_order_on_sphere) {
  const double ratio = pde_residual(sphere(), 2e-3) / pde_residual(sphere(), 1e-3);
  EXPECT_GE(ratio, 3.5);
  EXPECT_LE(ratio, 4.5);
}

TEST(pde_residual, stencil_too_large) {
  try {
    pde_residual(critical(), 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StencilOutOfDomain);
  }
}

TEST(general_harmonic_residual, values) {
  EXPECT_LE(general_harmonic_residual(conformal(), 1e-3), 1e-12);
  EXPECT_LE(general_harmonic_residual(critical(), 1e-3), 1e-5);
  const double ratio =
      general_harmonic_residual(sphere(), 2e-3) / general_harmonic_residual(sphere(), 1e-3);
  EXPECT_GE(ratio, 3.5);
  EXPECT_LE(ratio, 4.5);
}

TEST(hopf_constancy_check, constants) {
  CheckResult c = hopf_constancy_check(critical(), PolarGrid{32, 64, 0.5}, 1e-6);
  EXPECT_TRUE(c.passed) << c.measured;
  const HopfStatistics st = hopf_statistics(critical(), PolarGrid{32, 64, 0.5});
  EXPECT_NEAR(st.mean.real(), -0.16, 1e-10);
  c = hopf_constancy_check(conformal(), PolarGrid{32, 64, 0.8}, 1e-10);
  EXPECT_TRUE(c.passed);
  EXPECT_EQ(c.measured, 0.0);
}

TEST(minimality_probe, conformal_and_critical) {
  CheckResult c = minimality_probe(conformal(), 20, 1e-2, 42);
  EXPECT_TRUE(c.passed) << c.detail;
  c = minimality_probe(critical(), 20, 1e-2, 42);
  EXPECT_TRUE(c.passed) << c.detail;
}

TEST(minimality_probe, zero_perturbation) {
  const auto zero = [](double) { return 0.0; };
  EXPECT_EQ(perturbed_energy_excess(critical(), zero, zero, 1e-2), 0.0);
}

TEST(minimality_probe, deterministic) {
  const CheckResult a = minimality_probe(sphere(), 5, 1e-2, 7);
  const CheckResult b = minimality_probe(sphere(), 5, 1e-2, 7);
  EXPECT_EQ(a.detail, b.detail);
}

TEST(modulus_equivalence_check, euclidean) {
  const double rs[] = {0.9, 0.8, 0.6, 0.4};
  const CheckResult c = modulus_equivalence_check(parse_metric("euclidean"), 0.8, 1.0, rs);
  EXPECT_TRUE(c.passed);
  EXPECT_EQ(c.detail, "3 solved, 1 below critical");
}

TEST(run_full_suite, critical_pair) {
  const VerificationReport rep = run_full_suite(euclid(0.5));
  EXPECT_TRUE(rep.all_passed());
  const CheckResult* deg = rep.find("critical_degeneracy");
  ASSERT_NE(deg, nullptr);
  EXPECT_LE(deg->measured, 1e-12);
}

TEST(run_full_suite, below_critical_is_reported) {
  const VerificationReport rep = run_full_suite(euclid(0.4));
  ASSERT_EQ(rep.checks.size(), 1u);
  EXPECT_EQ(rep.checks[0].name, "solve");
  EXPECT_FALSE(rep.all_passed());
}

TEST(run_full_suite, conformal_equality) {
  const VerificationReport rep = run_full_suite(euclid(0.8));
  EXPECT_TRUE(rep.all_passed());
  const CheckResult* eq = rep.find("energy_equals_lower_bound");
  ASSERT_NE(eq, nullptr);
  EXPECT_TRUE(eq->passed);
}

TEST(run_full_suite, deterministic) {
  const ProblemSpec spec{parse_metric("hyperbolic"), 0.3, 0.8, 0.3};
  const VerificationReport a = run_full_suite(spec);
  const VerificationReport b = run_full_suite(spec);
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t k = 0; k < a.checks.size(); ++k) {
    EXPECT_EQ(a.checks[k].measured, b.checks[k].measured) << a.checks[k].name;
    EXPECT_EQ(a.checks[k].detail, b.checks[k].detail);
  }
}

TEST(run_full_suite, cross_product) {
  struct Case {
    const char* metric;
    double q, Q;
    double r[3];
  };
  const Case cases[] = {
      {"euclidean", 0.8, 1.0, {0.9, 0.8, 0.6}},
      {"inverse_r", 0.5, 1.0, {0.55998135251065339, 0.5, 0.47254515612012714}},
      {"sphere", 0.5, 1.0, {0.63927125381535218, 0.5, 0.38341000060454675}},
      {"hyperbolic", 0.3, 0.8, {0.47609419784903678, 0.375, 0.27149854466522599}},
  };
  for (const Case& k : cases) {
    for (const double r : k.r) {
      const VerificationReport rep = run_full_suite(ProblemSpec{parse_metric(k.metric), k.q, k.Q, r});
      for (const CheckResult& c : rep.checks) {
        EXPECT_TRUE(c.passed) << k.metric << " r=" << r << " " << c.name << " " << c.measured;
      }
    }
  }
}
