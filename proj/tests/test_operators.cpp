// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "btspec/airy.hpp"
#include "btspec/banded.hpp"
#include "btspec/dense.hpp"
#include "btspec/grid.hpp"
#include "btspec/linalg.hpp"
#include "btspec/operators.hpp"
#include "btspec/rng.hpp"

using namespace btspec;
using std::numbers::pi;

namespace {

DenseComplexMatrix dense_of(const ComplexBandedMatrix& m) {
  DenseComplexMatrix d(m.n());
  const auto cols = m.to_dense();
  for (int j = 0; j < m.n(); ++j)
    for (int i = 0; i < m.n(); ++i) d.at(i, j) = cols[static_cast<size_t>(j) * m.n() + i];
  return d;
}

std::vector<cdouble> random_unit(int n, uint64_t seed) {
  CounterRng rng(seed);
  std::vector<cdouble> u(static_cast<size_t>(n));
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    u[static_cast<size_t>(i)] = cdouble(rng.normal(2 * static_cast<uint64_t>(i)),
                                        rng.normal(2 * static_cast<uint64_t>(i) + 1));
    s += std::norm(u[static_cast<size_t>(i)]);
  }
  for (auto& z : u) z /= std::sqrt(s);
  return u;
}

cdouble quad_form(const ComplexBandedMatrix& m, const std::vector<cdouble>& u) {
  const auto mu = m.matvec(u);
  cdouble q{};
  for (size_t i = 0; i < u.size(); ++i) q += std::conj(u[i]) * mu[i];
  return q;
}

OperatorSpec bt_interval(double a, double b, int n, double eps, double b0) {
  OperatorSpec s;
  s.kind = OperatorKind::BlochTorreyInterval;
  s.grid = Grid1D::make(a, b, n);
  s.eps = eps;
  s.b0 = b0;
  return s;
}

} // namespace

TEST_CASE("coupling block at the x=0 node matches the system display") {
  // grid (-1,1) with n=3 puts the middle node exactly at x=0
  const OperatorSpec s = bt_interval(-1.0, 1.0, 3, 0.1, 1.0);
  const auto m = build_bloch_torrey(s);
  const int base = 3; // node index 1
  CHECK(m.at(base + 0, base + 1) == cdouble{});
  CHECK(m.at(base + 1, base + 2) == cdouble{1, 0});
  CHECK(m.at(base + 2, base + 1) == cdouble{-1, 0});
  CHECK(m.at(base + 0, base + 2) == cdouble{});
  // off the center node the (1,2) entry carries x_i
  CHECK(m.at(0, 1) == cdouble{-0.5, 0});
  CHECK(m.at(1, 0) == cdouble{0.5, 0});
}

TEST_CASE("discrete accretivity on 100 random vectors") {
  const OperatorSpec s = bt_interval(0.0, 1.0, 60, 0.05, 1.0);
  const auto m = build_bloch_torrey(s);
  for (uint64_t k = 0; k < 100; ++k) {
    const auto u = random_unit(m.n(), 1000 + k);
    CHECK(quad_form(m, u).real() >= -1e-12);
  }
}

TEST_CASE("constant-field system decouples into three scalar spectra") {
  const double eps = 0.2, gfield = 1.0;
  OperatorSpec s;
  s.kind = OperatorKind::GeneralField;
  s.grid = Grid1D::make(0.0, 1.0, 150);
  s.eps = eps;
  s.xi2 = 0.0;
  s.xi3 = 0.0;
  s.bfield = std::vector<std::array<double, 3>>(150, {0.0, 0.0, gfield});
  const auto eigs = dense_eigenvalues(dense_of(build_bloch_torrey(s)), 1e-10).eigenvalues;
  std::vector<cdouble> targets;
  for (int k = 1; k <= 3; ++k) {
    const double base = eps * eps * pi * pi * k * k;
    targets.push_back({base, 0.0});
    targets.push_back({base, gfield});
    targets.push_back({base, -gfield});
  }
  const auto idx = match_to_targets(eigs, targets);
  for (size_t t = 0; t < targets.size(); ++t) {
    REQUIRE(idx[t].has_value());
    CHECK(std::abs(eigs[*idx[t]] - targets[t]) < 5e-3);
  }
}

TEST_CASE("rotated system matches the unit-field system spectrum") {
  OperatorSpec rot;
  rot.kind = OperatorKind::RotatedBlochTorrey;
  rot.grid = Grid1D::make(-4.0, 4.0, 200);
  rot.eps = 0.3;
  const auto a = dense_eigenvalues(dense_of(build_rotated(rot)), 1e-10).eigenvalues;
  const auto b = dense_eigenvalues(
      dense_of(build_bloch_torrey(bt_interval(-4.0, 4.0, 200, 0.3, 1.0))), 1e-10)
                     .eigenvalues;
  const auto idx = match_to_targets(b, a);
  for (size_t t = 0; t < a.size(); ++t) {
    REQUIRE(idx[t].has_value());
    CHECK(std::abs(b[*idx[t]] - a[t]) < 1e-8);
  }
}

TEST_CASE("rotated coupling entries") {
  OperatorSpec rot;
  rot.kind = OperatorKind::RotatedBlochTorrey;
  rot.grid = Grid1D::make(-1.0, 1.0, 9);
  rot.eps = 0.1;
  const auto m = build_rotated(rot);
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < 9; ++i) {
    CHECK(m.at(3 * i + 0, 3 * i + 2) == cdouble{s, 0});
    CHECK(m.at(3 * i + 1, 3 * i + 2) == cdouble{s, 0});
    CHECK(m.at(3 * i + 2, 3 * i + 0) == cdouble{-s, 0});
    CHECK(m.at(3 * i + 2, 3 * i + 1) == cdouble{-s, 0});
    // diagonal entry is the kinetic stencil center plus the ix potential
    const double kin = 2.0 * 0.1 * 0.1 / (0.2 * 0.2);
    CHECK(m.at(3 * i + 0, 3 * i + 0) == cdouble(kin, Grid1D::make(-1, 1, 9).node(i)));
    CHECK(m.at(3 * i + 1, 3 * i + 1) == cdouble(kin, -Grid1D::make(-1, 1, 9).node(i)));
  }
}

TEST_CASE("system spectrum is conjugation symmetric") {
  const auto eigs = dense_eigenvalues(
      dense_of(build_bloch_torrey(bt_interval(0.0, 1.0, 80, 0.1, 1.0))), 1e-10)
                        .eigenvalues;
  std::vector<cdouble> conj_eigs;
  for (const auto& z : eigs) conj_eigs.push_back(std::conj(z));
  const auto idx = match_to_targets(eigs, conj_eigs);
  for (size_t t = 0; t < conj_eigs.size(); ++t) {
    REQUIRE(idx[t].has_value());
    CHECK(std::abs(eigs[*idx[t]] - conj_eigs[t]) < 1e-8);
  }
}

TEST_CASE("complex harmonic oscillator: leading eigenvalues") {
  OperatorSpec s;
  s.kind = OperatorKind::ComplexHarmonic;
  s.grid = Grid1D::make(-12.0, 12.0, 900);
  s.order = 4;
  const auto m = build_scalar(s);
  for (int k = 1; k <= 3; ++k) {
    const cdouble target = cdouble(2 * k - 1, -(2 * k - 1));
    const auto r = shift_invert_eigenvalue(m, target + cdouble(0.01, 0.01), 1e-10);
    CHECK(std::abs(r.eigenvalue - target) < 1e-4);
  }
}

TEST_CASE("HatL at eps=0, mu=0 reduces to -d2 + 2s^2") {
  OperatorSpec s;
  s.kind = OperatorKind::HatL;
  s.grid = Grid1D::make(-10.0, 10.0, 800);
  s.order = 4;
  s.eps = 0.0;
  s.mu = cdouble{};
  const auto m = build_scalar(s);
  const double want = std::sqrt(2.0);
  const auto r = shift_invert_eigenvalue(m, cdouble(want + 0.01, 0.0), 1e-10);
  CHECK(std::abs(r.eigenvalue - cdouble(want, 0.0)) < 1e-6);
}

TEST_CASE("complex Airy on (0,1): positive real part scaling like eps^{2/3}") {
  auto min_re = [](double eps) {
    OperatorSpec s;
    s.kind = OperatorKind::ComplexAiryPlus;
    s.grid = Grid1D::make(0.0, 1.0, 1000);
    s.eps = eps;
    const auto eigs = dense_eigenvalues(dense_of(build_scalar(s)), 1e-10).eigenvalues;
    double best = 1e300;
    for (const auto& z : eigs) best = std::min(best, z.real());
    return best;
  };
  const double r2 = min_re(1e-2);
  const double r3 = min_re(1e-3);
  CHECK(r2 > 0.0);
  CHECK(r3 > 0.0);
  const double slope = std::log(r2 / r3) / std::log(10.0);
  CHECK(slope > 0.55);
  CHECK(slope < 0.8);
}

TEST_CASE("quartic potential rejects nodes on the singular set") {
  OperatorSpec s;
  s.kind = OperatorKind::QuarticM;
  s.grid = Grid1D::make(-3.0, 3.0, 5); // node at x=1 when symmetric
  s.eps = 0.1;
  s.lambda = cdouble{1.0, 0.0}; // on the nonnegative real axis
  CHECK_THROWS_AS(build_scalar(s), std::invalid_argument);
  s.lambda = cdouble{1.0, 0.5};
  CHECK_NOTHROW(build_scalar(s));
}

TEST_CASE("quartic far-from-spectrum probe dominated by 1/eps term") {
  OperatorSpec s;
  s.kind = OperatorKind::QuarticM;
  s.grid = Grid1D::make(-6.0, 6.0, 400);
  s.eps = 0.05;
  s.lambda = cdouble{-5.0, 0.0};
  const auto m = build_scalar(s);
  const auto r = shift_invert_eigenvalue(m, cdouble{}, 1e-8);
  CHECK(std::abs(r.eigenvalue) > 0.5 / 0.05);
}

TEST_CASE("P_Lambda: symmetry defect, positivity at the floor, Eq-form identity") {
  const double eps = 0.1, a = 0.0, b = 1.0;
  const double floorl = pi * pi * eps * eps / ((b - a) * (b - a));
  OperatorSpec s;
  s.kind = OperatorKind::IntervalPLambda;
  s.grid = Grid1D::make(a, b, 180);
  s.eps = eps;
  s.lambda = cdouble{floorl, 0.0};

  const auto p_raw = build_interval_plambda(s, false);
  double num = 0.0, den = 0.0;
  for (int j = 0; j < p_raw.n(); ++j)
    for (int i = 0; i < p_raw.n(); ++i) {
      num += std::norm(p_raw.at(i, j) - p_raw.at(j, i));
      den += std::norm(p_raw.at(i, j));
    }
  CHECK(std::sqrt(num / den) < 1e-10);

  const auto p = build_interval_plambda(s);
  // nu at the floor: smallest eigenvalue of P - Lambda must be positive
  DenseComplexMatrix shifted = p;
  for (int i = 0; i < p.n(); ++i) shifted.at(i, i) -= floorl;
  double nu = 1e300;
  for (const auto& z : dense_eigenvalues(shifted, 1e-10).eigenvalues)
    nu = std::min(nu, z.real());
  CHECK(nu > 0.0);

  // quadratic-form identity against the two resolvent solves
  const Grid1D& g = s.grid;
  const double h = g.h;
  const auto d2 = second_derivative_matrix(g, 2);
  ComplexBandedMatrix lp(g.n, 1, 1), lm(g.n, 1, 1);
  for (int j = 0; j < g.n; ++j)
    for (int i = std::max(0, j - 1); i <= std::min(g.n - 1, j + 1); ++i) {
      lp.set(i, j, eps * eps * d2.at(i, j));
      lm.set(i, j, eps * eps * d2.at(i, j));
    }
  for (int i = 0; i < g.n; ++i) {
    lp.add(i, i, cdouble(0.0, g.node(i)) - floorl);
    lm.add(i, i, cdouble(0.0, -g.node(i)) - floorl);
  }
  CounterRng rng(5);
  std::vector<cdouble> u(static_cast<size_t>(g.n));
  for (int i = 0; i < g.n; ++i) u[static_cast<size_t>(i)] = rng.normal(static_cast<uint64_t>(i));
  const auto pu = p.matvec(u);
  cdouble lhs{};
  for (int i = 0; i < g.n; ++i) lhs += std::conj(u[static_cast<size_t>(i)]) * pu[static_cast<size_t>(i)];
  lhs *= h;
  const auto wp = BandedLU(lp).solve(u);
  const auto wm = BandedLU(lm).solve(u);
  auto grad_sq = [&](const std::vector<cdouble>& w) {
    double sum = std::norm(w.front()) + std::norm(w.back());
    for (size_t i = 0; i + 1 < w.size(); ++i) sum += std::norm(w[i + 1] - w[i]);
    return sum / h;
  };
  auto norm_sq = [&](const std::vector<cdouble>& w) {
    double sum = 0.0;
    for (const auto& z : w) sum += std::norm(z);
    return sum * h;
  };
  const double rhs = eps * eps * (grad_sq(u) + 0.5 * (grad_sq(wp) + grad_sq(wm))) -
                     0.5 * floorl * (norm_sq(wp) + norm_sq(wm));
  CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-8);
}

TEST_CASE("P_Lambda rejects parameters above the Airy threshold") {
  OperatorSpec s;
  s.kind = OperatorKind::IntervalPLambda;
  s.grid = Grid1D::make(0.0, 1.0, 50);
  s.eps = 0.1;
  s.lambda = cdouble{std::pow(0.1, 2.0 / 3.0) * airy_threshold() * 1.01, 0.0};
  CHECK_THROWS_AS(build_interval_plambda(s), std::invalid_argument);
}

TEST_CASE("limit pair: weights and the strict Poincare-type floor") {
  OperatorSpec s;
  s.kind = OperatorKind::LimitAtilde;
  s.grid = Grid1D::make(0.0, 1.0, 255);
  const auto [a, bw] = build_limit_atilde(s);
  for (int i = 0; i < 255; ++i) {
    const double x = s.grid.node(i);
    CHECK(bw.at(i, i).real() == doctest::Approx(s.grid.h * (1.0 + x * x)));
    CHECK(bw.at(i, i).real() > 0.0);
  }
  // generalized smallest eigenvalue via symmetric scaling by Bw^{-1/2}
  auto smallest_gen = [](const ComplexBandedMatrix& am, const ComplexBandedMatrix& bm) {
    const int n = am.n();
    DenseComplexMatrix c(n);
    for (int j = 0; j < n; ++j)
      for (int i = std::max(0, j - 1); i <= std::min(n - 1, j + 1); ++i)
        c.at(i, j) = am.at(i, j) /
                     std::sqrt(bm.at(i, i).real() * bm.at(j, j).real());
    double best = 1e300;
    for (const auto& z : dense_eigenvalues(c, 1e-10).eigenvalues)
      best = std::min(best, z.real());
    return best;
  };
  CHECK(smallest_gen(a, bw) > pi * pi);

  OperatorSpec s2 = s;
  s2.grid = Grid1D::make(-1.0, 1.0, 255);
  const auto [a2, bw2] = build_limit_atilde(s2);
  CHECK(smallest_gen(a2, bw2) > pi * pi / 4.0);
}

TEST_CASE("spec validation: extras rejected, requirements enforced") {
  OperatorSpec s;
  s.kind = OperatorKind::ComplexHarmonic;
  s.grid = Grid1D::make(-10.0, 10.0, 100);
  CHECK_NOTHROW(s.validate());
  s.eps = 0.1; // irrelevant for this kind
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);

  OperatorSpec t;
  t.kind = OperatorKind::BlochTorreyLine;
  t.grid = Grid1D::make(-8.0, 8.0, 100);
  t.eps = 0.1;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument); // b0 missing
  t.b0 = 1.0;
  CHECK_NOTHROW(t.validate());

  OperatorSpec d;
  d.kind = OperatorKind::DilatedM;
  d.grid = Grid1D::make(-6.0, 6.0, 100);
  d.eps = 0.1;
  d.lambda = cdouble{1.0, 1.0};
  d.theta = cdouble{0.0, 3.0 * pi / 16.0 + 0.01};
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  d.theta = cdouble{0.0, pi / 8.0};
  CHECK_NOTHROW(d.validate());
}

TEST_CASE("JSON round trip and unknown-field rejection") {
  OperatorSpec s;
  s.kind = OperatorKind::QuarticM;
  s.grid = Grid1D::make(-6.0, 6.0, 200);
  s.eps = 0.05;
  s.lambda = cdouble{2.0, 1.5};
  const std::string text = s.to_json();
  const OperatorSpec back = OperatorSpec::from_json(text);
  CHECK(back.kind == s.kind);
  CHECK(back.grid.n == s.grid.n);
  CHECK(back.eps == s.eps);
  CHECK(back.lambda == s.lambda);
  // identical specs must produce bitwise identical matrices
  CHECK(build_scalar(back) == build_scalar(s));

  CHECK_THROWS_AS(OperatorSpec::from_json("{\"kind\": \"complex_harmonic\", "
                                          "\"grid\": {\"a\": -1, \"b\": 1, \"n\": 10}, "
                                          "\"mystery\": 3}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(OperatorSpec::from_json("not json"), std::invalid_argument);
}

TEST_CASE("dilation invariance of the near-zero quartic eigenvalue") {
  // fixed lambda in the admissible sector 3pi/8 < arg < 13pi/8
  const cdouble lam = 3.0 * std::exp(cdouble(0.0, pi / 2.0));
  const double epsc = 0.2;
  std::vector<cdouble> found;
  for (double th : {0.0, pi / 16.0, pi / 8.0}) {
    OperatorSpec s;
    s.kind = th == 0.0 ? OperatorKind::QuarticM : OperatorKind::DilatedM;
    s.grid = Grid1D::make(-8.0, 8.0, 1200);
    s.order = 4;
    s.eps = epsc;
    s.lambda = lam;
    if (th != 0.0) s.theta = cdouble{0.0, th};
    const auto r = shift_invert_eigenvalue(build_scalar(s), found.empty() ? cdouble{} : found[0],
                                           1e-9, 400);
    found.push_back(r.eigenvalue);
  }
  CHECK(std::abs(found[1] - found[0]) < 1e-6);
  CHECK(std::abs(found[2] - found[0]) < 1e-6);
}
