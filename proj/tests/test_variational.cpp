// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "btspec/operators.hpp"
#include "btspec/spectra.hpp"
#include "btspec/variational.hpp"

using namespace btspec;
using std::numbers::pi;

TEST_CASE("rho0 on (0,1): floor, self-convergence, minimizer quality") {
  const auto r = compute_rho0(0.0, 1.0, {511, 1023, 2047});
  CHECK(r.rho0 > pi * pi);
  REQUIRE(r.rho0_history.size() == 3);
  // The coarse-pair extrapolant must agree with the full ladder.
  const auto coarse = compute_rho0(0.0, 1.0, {511, 1023});
  CHECK(std::abs(coarse.rho0 - r.rho0) < 1e-6);
  CHECK(r.el_residual < 1e-6);
  // Normalization ||(x^2+1)^{1/2} w||_h = 1 and positivity.
  double weighted = 0.0, lo = r.minimizer[0], hi = r.minimizer[0];
  for (int i = 0; i < r.grid.n; ++i) {
    const double x = r.grid.node(i);
    weighted += r.grid.h * (1.0 + x * x) * r.minimizer[i] * r.minimizer[i];
    lo = std::min(lo, r.minimizer[i]);
    hi = std::max(hi, r.minimizer[i]);
  }
  CHECK(weighted == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(lo > 0.0);
  CHECK(hi > 0.0);
}

TEST_CASE("rho0 floors and reflection invariance") {
  CHECK(compute_rho0(-1.0, 1.0, {511}).rho0 > pi * pi / 4.0);
  const double direct = compute_rho0(0.0, 1.0, {255, 511}).rho0;
  const double mirrored = compute_rho0(-1.0, 0.0, {255, 511}).rho0;
  CHECK(std::abs(direct - mirrored) < 1e-9);
  CHECK_THROWS_AS(compute_rho0(1.0, 0.0, {63}), std::invalid_argument);
  CHECK_THROWS_AS(compute_rho0(0.0, 1.0, {}), std::invalid_argument);
}

TEST_CASE("nu is positive at the Dirichlet floor and crosses once") {
  const double eps = 0.1, rho0 = 10.5121417;
  const int n = 155;
  const double floor = pi * pi * eps * eps;
  CHECK(nu_of_lambda(floor, eps, 0.0, 1.0, n) > 0.0);

  std::vector<double> samples(16);
  for (size_t i = 0; i < samples.size(); ++i)
    samples[i] = floor + (2.0 * rho0 * eps * eps - floor) *
                             static_cast<double>(i) / 15.0;
  const auto curve = nu_curve(eps, 0.0, 1.0, samples, n);
  REQUIRE(curve.crossing.has_value());
  CHECK(*curve.crossing > floor);
  CHECK(*curve.crossing < 2.0 * rho0 * eps * eps);
  // Continuity: sampled curve has no jumps beyond a slope bound, and is
  // decreasing through the bracketing pair.
  bool decreasing_at_cross = false;
  for (size_t i = 0; i + 1 < curve.nus.size(); ++i) {
    const double dl = curve.lambdas[i + 1] - curve.lambdas[i];
    CHECK(std::abs(curve.nus[i + 1] - curve.nus[i]) < 20.0 * dl);
    if (curve.nus[i] > 0.0 && curve.nus[i + 1] < 0.0)
      decreasing_at_cross = true;
  }
  CHECK(decreasing_at_cross);
  CHECK(curve.to_csv().rfind("lambda,nu", 0) == 0);
  CHECK(curve.to_json().find("crossing") != std::string::npos);
}

TEST_CASE("nu crossing equals the coupled interval eigenvalue") {
  // The dense reduced operator is the exact Schur complement of the
  // discrete 3x3 system on the same grid, so the crossing and the direct
  // eigenvalue must agree far below the discretization error.
  const double eps = 0.05;
  const int n = 155;
  const double e2 = eps * eps;
  std::vector<double> samples(16);
  for (size_t i = 0; i < samples.size(); ++i)
    samples[i] = pi * pi * e2 + (20.0 * e2 - pi * pi * e2) *
                                    static_cast<double>(i) / 15.0;
  const auto curve = nu_curve(eps, 0.0, 1.0, samples, n);
  REQUIRE(curve.crossing.has_value());

  OperatorSpec spec;
  spec.kind = OperatorKind::RotatedBlochTorrey;
  spec.grid = Grid1D::make(0.0, 1.0, n);
  spec.order = 2;
  spec.eps = eps;
  const auto loc = locate_eigenvalue(spec, cdouble(*curve.crossing, 0.0), 1e-12);
  CHECK(std::abs(loc.eigenvalue - cdouble(*curve.crossing, 0.0)) < 1e-6);
  CHECK(std::abs(loc.eigenvalue.imag()) < 1e-9);
}

TEST_CASE("nu curve input validation") {
  CHECK_THROWS_AS(nu_curve(0.1, 0.0, 1.0, {-1e-3}, 63), std::invalid_argument);
  CHECK_THROWS_AS(nu_curve(0.1, 1.0, 0.0, {1e-3}, 63), std::invalid_argument);
  // Lambda beyond the resolvent-average window propagates from validation.
  CHECK_THROWS_AS(nu_of_lambda(1.0, 0.1, 0.0, 1.0, 63), std::invalid_argument);
  const auto flat = nu_curve(0.1, 0.0, 1.0, {1e-3, 2e-3}, 63);
  CHECK_FALSE(flat.crossing.has_value());
}

TEST_CASE("scaling law over a short eps ladder") {
  const auto rep = verify_scaling_law({0.1, 0.05}, 0.0, 1.0, 155);
  REQUIRE(rep.ratios.size() == 2);
  CHECK(rep.within_bounds);
  CHECK(rep.error_decreasing);
  for (double ratio : rep.ratios)
    CHECK(std::abs(ratio - rep.rho0) < 0.1 * rep.rho0);
  CHECK(rep.to_csv().rfind("eps,lambda1,ratio", 0) == 0);
  CHECK(rep.to_json().find("within_bounds") != std::string::npos);
  CHECK_THROWS_AS(verify_scaling_law({0.05, 0.1}, 0.0, 1.0, 63),
                  std::invalid_argument);
  CHECK_THROWS_AS(verify_scaling_law({0.1}, 0.0, 1.0, 63),
                  std::invalid_argument);
}

TEST_CASE("auxiliary resolvent estimate stays bounded and is homogeneous") {
  const auto r = compute_rho0(0.0, 1.0, {511, 1023});
  const double K = 2.0 * r.rho0;
  const auto big = auxiliary_airy_estimate(0.1, K, r.grid, r.minimizer);
  const auto small = auxiliary_airy_estimate(0.05, K, r.grid, r.minimizer);
  CHECK(big.ratio_plus > 0.0);
  CHECK(small.ratio_plus <= 2.0 * big.ratio_plus);
  CHECK(small.ratio_minus <= 2.0 * big.ratio_minus);

  std::vector<double> doubled(r.minimizer);
  for (double& x : doubled) x *= 2.0;
  const auto scaled = auxiliary_airy_estimate(0.1, K, r.grid, doubled);
  CHECK(scaled.ratio_plus == doctest::Approx(big.ratio_plus).epsilon(1e-12));

  const std::vector<double> zeros(static_cast<size_t>(r.grid.n), 0.0);
  const auto trivial = auxiliary_airy_estimate(0.1, K, r.grid, zeros);
  CHECK(trivial.ratio_plus == 0.0);
  CHECK(trivial.ratio_minus == 0.0);

  CHECK_THROWS_AS(auxiliary_airy_estimate(0.5, 100.0, r.grid, r.minimizer),
                  std::invalid_argument);
  CHECK(big.to_json().find("ratio_plus") != std::string::npos);
}

TEST_CASE("variational serialization headers") {
  const auto r = compute_rho0(0.0, 1.0, {63, 127});
  CHECK(r.to_csv().rfind("n,rho0_n", 0) == 0);
  CHECK(r.to_json().find("rho0") != std::string::npos);
}
