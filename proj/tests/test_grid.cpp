// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "btspec/banded.hpp"
#include "btspec/dense.hpp"
#include "btspec/grid.hpp"
#include "btspec/linalg.hpp"

using namespace btspec;
using std::numbers::pi;

namespace {

double smallest_laplacian_eig(int n, int order) {
  const Grid1D g = Grid1D::make(0.0, 1.0, n);
  const ComplexBandedMatrix d2 = second_derivative_matrix(g, order);
  const auto r = shift_invert_eigenvalue(d2, cdouble(9.0, 0.0), 1e-10);
  return r.eigenvalue.real();
}

} // namespace

TEST_CASE("grid construction and node layout") {
  const Grid1D g = Grid1D::make(0.0, 1.0, 3);
  CHECK(g.h == doctest::Approx(0.25));
  CHECK(g.node(0) == doctest::Approx(0.25));
  CHECK(g.node(2) == doctest::Approx(0.75));
  CHECK(g.nodes().size() == 3);
  CHECK_THROWS_AS(Grid1D::make(1.0, 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(Grid1D::make(0.0, 1.0, 2), std::invalid_argument);
  const Grid1D r = g.refined();
  CHECK(r.n == 7);
  CHECK(r.h == doctest::Approx(g.h / 2));
}

TEST_CASE("order-2 stencil entries on (0,1), n=3") {
  const Grid1D g = Grid1D::make(0.0, 1.0, 3);
  const ComplexBandedMatrix m = second_derivative_matrix(g, 2);
  CHECK(m.at(0, 0).real() == doctest::Approx(32.0));
  CHECK(m.at(1, 0).real() == doctest::Approx(-16.0));
  CHECK(m.at(0, 1).real() == doctest::Approx(-16.0));
  CHECK(m.at(2, 2).real() == doctest::Approx(32.0));
  CHECK(m.at(0, 2) == cdouble{});
}

TEST_CASE("order-2 matrix is exactly symmetric") {
  const Grid1D g = Grid1D::make(-2.0, 3.0, 40);
  const ComplexBandedMatrix m = second_derivative_matrix(g, 2);
  for (int i = 0; i < g.n; ++i)
    for (int j = std::max(0, i - 1); j <= std::min(g.n - 1, i + 1); ++j)
      CHECK(m.at(i, j) == m.at(j, i));
}

TEST_CASE("Dirichlet Laplacian smallest eigenvalue, order 2") {
  const double lam = smallest_laplacian_eig(1023, 2);
  CHECK(std::abs(lam - pi * pi) / (pi * pi) < 1e-4);
}

TEST_CASE("Dirichlet Laplacian smallest eigenvalue, order 4") {
  const double lam = smallest_laplacian_eig(1023, 4);
  CHECK(std::abs(lam - pi * pi) / (pi * pi) < 1e-8);
}

TEST_CASE("order-4 rejects tiny grids") {
  const Grid1D g = Grid1D::make(0.0, 1.0, 4);
  CHECK_THROWS_AS(second_derivative_matrix(g, 4), std::invalid_argument);
  CHECK_THROWS_AS(second_derivative_matrix(Grid1D::make(0, 1, 8), 3),
                  std::invalid_argument);
}

TEST_CASE("richardson: exact quadratic model") {
  const cdouble v = richardson_extrapolate({{0.1, {1.01, 0.0}}, {0.05, {1.0025, 0.0}}}, 2);
  CHECK(std::abs(v - cdouble(1.0, 0.0)) < 1e-13);
}

TEST_CASE("richardson: errors") {
  CHECK_THROWS_AS(richardson_extrapolate({{0.1, {1.0, 0.0}}}, 2), std::invalid_argument);
  CHECK_THROWS_AS(richardson_extrapolate({{0.1, {1.0, 0.0}}, {0.1, {1.0, 0.0}}}, 2),
                  std::invalid_argument);
}

TEST_CASE("richardson on Laplacian eigenvalue, order 2") {
  std::vector<std::pair<double, cdouble>> samples;
  for (int n : {255, 511}) {
    const Grid1D g = Grid1D::make(0.0, 1.0, n);
    samples.push_back({g.h, {smallest_laplacian_eig(n, 2), 0.0}});
  }
  const cdouble v = richardson_extrapolate(samples, 2);
  CHECK(std::abs(v.real() - pi * pi) < 1e-7);
}

TEST_CASE("order-2 eigenvalues real and inside (0, 4/h^2)") {
  const Grid1D g = Grid1D::make(0.0, 1.0, 30);
  const ComplexBandedMatrix m = second_derivative_matrix(g, 2);
  DenseComplexMatrix d(g.n);
  const auto cols = m.to_dense();
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) d.at(i, j) = cols[static_cast<size_t>(j) * g.n + i];
  const EigenResult er = dense_eigenvalues(d, 1e-10);
  for (const auto& z : er.eigenvalues) {
    CHECK(std::abs(z.imag()) < 1e-10);
    CHECK(z.real() > 0.0);
    CHECK(z.real() < 4.0 / (g.h * g.h));
  }
}

TEST_CASE("quadratic form matches ||u'||^2 for sin(k pi x)") {
  const int n = 400;
  const Grid1D g = Grid1D::make(0.0, 1.0, n);
  const ComplexBandedMatrix m = second_derivative_matrix(g, 2);
  for (int k : {1, 2, 3}) {
    std::vector<cdouble> u(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) u[static_cast<size_t>(i)] = std::sin(k * pi * g.node(i));
    const auto mu = m.matvec(u);
    cdouble q{};
    for (int i = 0; i < n; ++i) q += std::conj(u[static_cast<size_t>(i)]) * mu[static_cast<size_t>(i)];
    q *= g.h;
    const double exact = k * k * pi * pi / 2.0; // ||(sin k pi x)'||^2 on (0,1)
    CHECK(std::abs(q.real() - exact) / exact < 1e-3);
    CHECK(std::abs(q.imag()) < 1e-12);
  }
}

TEST_CASE("l2_norm approximates the continuum L2 norm") {
  const Grid1D g = Grid1D::make(0.0, 1.0, 999);
  std::vector<cdouble> u(static_cast<size_t>(g.n));
  for (int i = 0; i < g.n; ++i) u[static_cast<size_t>(i)] = std::sin(pi * g.node(i));
  CHECK(l2_norm(g, u) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-5));
}
