// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "btspec/asymptotics.hpp"

using namespace btspec;

TEST_CASE("mu_k0 exact values and the kappa0 identity") {
  CHECK(mu_k0(1) == cdouble(0.5, 0.5));
  CHECK(mu_k0(2) == cdouble(1.5, 1.5));
  CHECK_THROWS_AS(mu_k0(0), std::invalid_argument);
  for (int n : {1, 2, 3}) {
    const double eps = 0.1;
    CHECK(std::abs(kappa0(n, eps) - (cdouble(0.0, 1.0) + eps * mu_k0(n))) == 0.0);
  }
}

TEST_CASE("mu_11 closed form is 3/16 + i/2") {
  const cdouble v = mu_k1_closed_form();
  CHECK(std::abs(v - cdouble(3.0 / 16.0, 0.5)) < 1e-15);
}

TEST_CASE("mu_11 quadrature agrees with the closed form") {
  const Grid1D g = Grid1D::make(-12.0, 12.0, 3200);
  const cdouble q = mu_k1_quadrature(1, g);
  CHECK(std::abs(q - mu_k1_closed_form()) < 1e-6);
}

TEST_CASE("mu_11 quadrature is truncation stable") {
  const cdouble a = mu_k1_quadrature(1, Grid1D::make(-10.0, 10.0, 4000));
  const cdouble b = mu_k1_quadrature(1, Grid1D::make(-12.0, 12.0, 4800));
  CHECK(std::abs(a - b) < 1e-8);
}

TEST_CASE("sesquilinear pairing is the wrong pairing (negative control)") {
  const Grid1D g = Grid1D::make(-12.0, 12.0, 3200);
  const cdouble wrong = mu_k1_quadrature(1, g, 4, false);
  CHECK(std::abs(wrong - mu_k1_closed_form()) > 1e-2);
}

TEST_CASE("fit_slope recovers a synthetic power law") {
  std::vector<double> eps = {0.08, 0.04, 0.02};
  std::vector<double> errs;
  for (double e : eps) errs.push_back(3.7 * e * e);
  CHECK(fit_slope(eps, errs) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_slope({0.1}, {1.0}), std::invalid_argument);
}

TEST_CASE("mu_k1_branch matches measured second order coefficients") {
  // Frozen from Richardson extrapolation of (kappa_k - kappa_k^0)/eps^2
  // over eps in {0.02, 0.01}: 0.3125 + 0.0001i for k = 1 and
  // -0.4375 - 0.0003i for k = 2.
  CHECK(mu_k1_branch(1) == cdouble(5.0 / 16.0, 0.0));
  CHECK(mu_k1_branch(2) == cdouble(-7.0 / 16.0, 0.0));
  CHECK_THROWS_AS(mu_k1_branch(0), std::invalid_argument);
}

TEST_CASE("eigenvalue asymptotics: empty request") {
  CHECK(verify_eigenvalue_asymptotics({0.08, 0.04}, 0).rows.empty());
}

TEST_CASE("eigenvalue asymptotics: quick two-eps order check") {
  const auto rep = verify_eigenvalue_asymptotics({0.08, 0.04}, 1);
  REQUIRE(rep.rows.size() == 2);
  REQUIRE(rep.slopes.size() == 1);
  CHECK(rep.slopes[0] > 1.5);
  CHECK(rep.slopes[0] < 2.5);
  CHECK(rep.refined_slope > 2.5);
  CHECK(rep.refined_slope < 3.5);
  for (const auto& r : rep.rows) CHECK(r.err < 0.6 * r.eps);
  const std::string csv = rep.to_csv();
  CHECK(csv.rfind("n,eps,", 0) == 0);
  CHECK(rep.to_json().find("refined_slope") != std::string::npos);
}

TEST_CASE("resolvent bound sampler respects the excluded balls") {
  const double eps = 0.05, rho = 1.0, rhat = 10.0;
  const auto rep = verify_resolvent_bound(eps, rho, rhat, 25, 7);
  CHECK(rep.samples.size() == 25);
  CHECK(rep.max_ratio > 0.0);
  CHECK(rep.accretive_ok);
  const double ball = rhat * eps * eps;
  for (const auto& s : rep.samples) {
    CHECK(s.lambda.real() <= rho * eps);
    CHECK(s.lambda.imag() != 0.0);
    const cdouble c = kappa0(1, eps);
    CHECK(std::abs(s.lambda - c) >= ball);
    CHECK(std::abs(s.lambda - std::conj(c)) >= ball);
    CHECK(s.ratio == s.norm / s.bound);
  }
  CHECK(rep.to_csv().rfind("re,im,norm,bound,ratio\n", 0) == 0);
  // identical seed reproduces the draw exactly
  const auto rep2 = verify_resolvent_bound(eps, rho, rhat, 25, 7);
  CHECK(rep2.max_ratio == rep.max_ratio);
  CHECK_THROWS_AS(verify_resolvent_bound(eps, rho, 0.5, 5, 1), std::invalid_argument);
}

TEST_CASE("strip estimate: bounded ratios and the left half plane check") {
  const auto rep = verify_strip_estimate(0.1, 0.3, 15, 11);
  CHECK(rep.samples.size() == 15);
  CHECK(rep.max_component_ratio > 0.0);
  CHECK(rep.max_resolvent_ratio > 0.0);
  CHECK(rep.left_accretive_ok);
  const double strip = std::sqrt(1.0 - 2.0 * std::pow(0.3, 4.0)) / std::sqrt(rep.eps_check);
  for (const auto& s : rep.samples) {
    CHECK(std::abs(s.lambda.imag()) > 0.0);
    CHECK(std::abs(s.lambda.imag()) <= strip);
  }
  CHECK_THROWS_AS(verify_strip_estimate(0.1, 0.0, 5, 1), std::invalid_argument);
  CHECK(rep.to_json().find("max_component_ratio") != std::string::npos);
}
