// SPDX-License-Identifier: Apache-2.0
#include "btspec/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "btspec/linalg.hpp"
#include "btspec/rng.hpp"
#include "btspec/spectra.hpp"

namespace btspec {

using std::numbers::pi;

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

OperatorSpec line_spec(double eps, double L, double h, int order) {
  OperatorSpec s;
  s.kind = OperatorKind::BlochTorreyLine;
  const int n = std::max(5, static_cast<int>(std::lround(2.0 * L / h)) - 1);
  s.grid = Grid1D::make(-L, L, n);
  s.order = order;
  s.eps = eps;
  s.b0 = 1.0;
  return s;
}

double lnorm(const std::vector<cdouble>& v, double h) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(h * s);
}

} // namespace

cdouble mu_k0(int k) {
  if (k < 1) throw std::invalid_argument("mu_k0: k must be positive");
  return (2.0 * k - 1.0) / 2.0 * cdouble(1.0, 1.0);
}

cdouble kappa0(int n, double eps) { return cdouble(0.0, 1.0) + eps * mu_k0(n); }

cdouble kappa_refined(int n, double eps, cdouble mu1) {
  return cdouble(0.0, 1.0) + eps * mu_k0(n) + eps * eps * mu1;
}

cdouble mu_k1_closed_form() {
  // Gaussian moments of f = exp(-alpha w^2 / 2), alpha = 1 - i, divided out:
  // <w^2>/<1> = 1/(2 alpha), <w^4>/<1> = 3/(4 alpha^2). The correction
  // integrand expands to w^4 - 2 mu0 w^2 + mu0^2 - 1.
  const cdouble alpha(1.0, -1.0);
  const cdouble mu0 = mu_k0(1);
  const cdouble num = 3.0 / (4.0 * alpha * alpha) - mu0 / alpha + mu0 * mu0 - 1.0;
  return num / cdouble(0.0, 2.0);
}

cdouble mu_k1_branch(int k) {
  if (k < 1) throw std::invalid_argument("mu_k1_branch: k must be positive");
  const double m = 2.0 * k * k - 2.0 * k + 1.0;
  return cdouble((8.0 - 3.0 * m) / 16.0, 0.0);
}

cdouble mu_k1_quadrature(int k, const Grid1D& grid, int order, bool bilinear) {
  OperatorSpec s;
  s.kind = OperatorKind::ComplexHarmonic;
  s.grid = grid;
  s.order = order;
  const cdouble target(2.0 * k - 1.0, -(2.0 * k - 1.0));
  const auto r = shift_invert_eigenvalue(build_scalar(s), target, 1e-12, 400);
  if (r.residual > 1e-8)
    throw std::runtime_error("mu_k1_quadrature: oscillator eigenfunction residual " +
                             std::to_string(r.residual) + " above 1e-8");
  const cdouble mu0 = mu_k0(k);
  cdouble num{}, den{};
  for (int i = 0; i < grid.n; ++i) {
    const double w = grid.node(i);
    const cdouble f = r.eigenvector[static_cast<size_t>(i)];
    const cdouble f2 = bilinear ? f * f : std::conj(f) * f;
    const cdouble d = w * w - mu0;
    num += (d * d - 1.0) * f2;
    den += f2;
  }
  return num / (cdouble(0.0, 2.0) * den);
}

double fit_slope(const std::vector<double>& eps_values, const std::vector<double>& errs) {
  if (eps_values.size() != errs.size() || eps_values.size() < 2)
    throw std::invalid_argument("fit_slope: need matched samples, at least two");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(eps_values.size());
  for (size_t i = 0; i < eps_values.size(); ++i) {
    const double x = std::log(eps_values[i]);
    const double y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

AsymptoticsReport verify_eigenvalue_asymptotics(const std::vector<double>& eps_values,
                                                int N) {
  AsymptoticsReport rep;
  if (N == 0 || eps_values.empty()) return rep;
  const cdouble mu1 = mu_k1_branch(1);
  for (int n = 1; n <= N; ++n) {
    std::vector<double> errs;
    std::vector<double> refined;
    for (const double eps : eps_values) {
      // the eigenfunction lives on the x-scale sqrt(eps)
      const double h = std::sqrt(eps) / 14.0;
      const OperatorSpec s = line_spec(eps, 8.0, h, 4);
      const auto tg = locate_eigenvalue_two_grid(s, kappa0(n, eps), 1e-11);
      AsymptoticsRow row;
      row.n = n;
      row.eps = eps;
      row.kappa = tg.extrapolated;
      row.err = std::abs(tg.extrapolated - kappa0(n, eps));
      if (n == 1) {
        row.refined_err = std::abs(tg.extrapolated - kappa_refined(1, eps, mu1));
        refined.push_back(row.refined_err);
      }
      errs.push_back(row.err);
      rep.rows.push_back(row);
    }
    rep.slopes.push_back(fit_slope(eps_values, errs));
    if (n == 1) rep.refined_slope = fit_slope(eps_values, refined);
  }
  return rep;
}

std::string AsymptoticsReport::to_csv() const {
  std::ostringstream os;
  os << "n,eps,kappa_re,kappa_im,err,refined_err\n";
  for (const auto& r : rows)
    os << r.n << ',' << fmt(r.eps) << ',' << fmt(r.kappa.real()) << ','
       << fmt(r.kappa.imag()) << ',' << fmt(r.err) << ',' << fmt(r.refined_err)
       << '\n';
  return os.str();
}

std::string AsymptoticsReport::to_json() const {
  nlohmann::json j;
  j["slopes"] = slopes;
  j["refined_slope"] = refined_slope;
  auto rows_j = nlohmann::json::array();
  for (const auto& r : rows)
    rows_j.push_back({{"n", r.n},
                      {"eps", r.eps},
                      {"kappa", {r.kappa.real(), r.kappa.imag()}},
                      {"err", r.err},
                      {"refined_err", r.refined_err}});
  j["rows"] = rows_j;
  return j.dump(2);
}

ResolventBoundReport verify_resolvent_bound(double eps, double rho, double rhat,
                                            int samples, uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("verify_resolvent_bound: samples >= 1");
  if (!(rhat > 1.0 && rhat < 1.0 / (std::sqrt(2.0) * eps)))
    throw std::invalid_argument("verify_resolvent_bound: need 1 < rhat < 1/(sqrt(2) eps)");
  ResolventBoundReport rep;
  rep.eps = eps;
  rep.rho = rho;
  rep.rhat = rhat;

  const int n_rho = static_cast<int>(std::floor((2.0 * rho + 1.0) / 2.0));
  const double ball = rhat * eps * eps;
  const double h = std::sqrt(eps) / 10.0;
  const ComplexBandedMatrix m = build_bloch_torrey(line_spec(eps, 8.0, h, 2));

  CounterRng rng(seed);
  const double penalty = 1.0 / (rhat * std::pow(eps, 5.0 / 3.0));
  const double e23 = std::pow(eps, 2.0 / 3.0);
  uint64_t counter = 0;
  int accepted = 0;
  int attempts = 0;
  const int attempt_cap = 100 * samples;
  while (accepted < samples) {
    if (++attempts > attempt_cap)
      throw std::runtime_error("verify_resolvent_bound: oversampling cap reached");
    const double re = rng.uniform(counter++, -0.75, rho * eps);
    const double im_mag = rng.uniform(counter++, 0.08, 1.6);
    const double sign = rng.u01(counter++) < 0.5 ? -1.0 : 1.0;
    const cdouble lam(re, sign * im_mag);
    bool excluded = false;
    for (int k = 1; k <= n_rho; ++k) {
      const cdouble c = kappa0(k, eps);
      if (std::abs(lam - c) < ball || std::abs(lam - std::conj(c)) < ball) {
        excluded = true;
        break;
      }
    }
    if (excluded) continue;
    BoundSample smp;
    smp.lambda = lam;
    smp.norm = resolvent_norm(m, lam, 1e-6);
    smp.bound = 1.0 + e23 / (lam.imag() * lam.imag()) + penalty;
    smp.ratio = smp.norm / smp.bound;
    if (lam.real() < 0.0 && smp.norm > 1.05 / std::abs(lam.real()))
      rep.accretive_ok = false;
    rep.max_ratio = std::max(rep.max_ratio, smp.ratio);
    rep.samples.push_back(smp);
    ++accepted;
  }
  return rep;
}

std::string ResolventBoundReport::to_csv() const {
  std::ostringstream os;
  os << "re,im,norm,bound,ratio\n";
  for (const auto& s : samples)
    os << fmt(s.lambda.real()) << ',' << fmt(s.lambda.imag()) << ',' << fmt(s.norm)
       << ',' << fmt(s.bound) << ',' << fmt(s.ratio) << '\n';
  return os.str();
}

std::string ResolventBoundReport::to_json() const {
  nlohmann::json j;
  j["eps"] = eps;
  j["rho"] = rho;
  j["rhat"] = rhat;
  j["max_ratio"] = max_ratio;
  j["accretive_ok"] = accretive_ok;
  auto rows = nlohmann::json::array();
  for (const auto& s : samples)
    rows.push_back({{"lambda", {s.lambda.real(), s.lambda.imag()}},
                    {"norm", s.norm},
                    {"bound", s.bound},
                    {"ratio", s.ratio}});
  j["samples"] = rows;
  return j.dump(2);
}

StripReport verify_strip_estimate(double eps, double delta, int samples,
                                  uint64_t seed) {
  if (!(delta > 0.0 && delta <= 0.5))
    throw std::invalid_argument("verify_strip_estimate: need 0 < delta <= 1/2");
  if (samples < 1) throw std::invalid_argument("verify_strip_estimate: samples >= 1");
  StripReport rep;
  rep.eps = eps;
  rep.delta = delta;
  const double ec = std::pow(eps, 4.0 / 3.0);
  rep.eps_check = ec;
  const double strip = std::sqrt(1.0 - 2.0 * std::pow(delta, 4.0)) / std::sqrt(ec);

  const double lr_max = 1.0 / std::sqrt(ec);
  const double L = 1.5 * std::max(strip, lr_max) + 6.0;
  const int n = static_cast<int>(std::lround(2.0 * L / 0.05)) - 1;
  const Grid1D grid = Grid1D::make(-L, L, n);
  const ComplexBandedMatrix m = build_scaled_rotated(ec, grid, 2);
  const int nn = m.n();

  CounterRng rng(seed);
  uint64_t counter = 0;
  int accepted = 0;
  int attempts = 0;
  while (accepted < samples) {
    if (++attempts > 100 * samples)
      throw std::runtime_error("verify_strip_estimate: oversampling cap reached");
    const double lr = rng.uniform(counter++, -2.0, lr_max);
    const double li_mag = rng.uniform(counter++, 0.1, strip);
    const double sign = rng.u01(counter++) < 0.5 ? -1.0 : 1.0;
    const cdouble lam(lr, sign * li_mag);

    std::unique_ptr<BandedLU> lu;
    try {
      lu = std::make_unique<BandedLU>(m.shifted(lam));
    } catch (const SingularMatrixError&) {
      continue; // lambda numerically in the discrete spectrum, resample
    }
    std::vector<cdouble> f(static_cast<size_t>(nn));
    double fn = 0.0;
    for (int i = 0; i < nn; ++i) {
      f[static_cast<size_t>(i)] =
          cdouble(rng.normal(counter), rng.normal(counter + 1));
      counter += 2;
      fn += std::norm(f[static_cast<size_t>(i)]);
    }
    for (auto& z : f) z /= std::sqrt(fn);
    const auto u = lu->solve(f);

    std::vector<cdouble> u12(static_cast<size_t>(grid.n));
    std::vector<cdouble> ufull = u;
    for (int i = 0; i < grid.n; ++i)
      u12[static_cast<size_t>(i)] = u[static_cast<size_t>(3 * i)] + u[static_cast<size_t>(3 * i + 1)];

    const double lrp = std::max(lr, 0.0);
    const double tail = (1.0 + std::sqrt(ec) * std::sqrt(lrp)) / std::abs(lam.imag());
    const double rhs9 = std::sqrt(ec) * (1.0 + tail);
    const double rhs21a = (1.0 + 1.0 / std::abs(lam.imag())) * (1.0 + tail);

    StripSample smp;
    smp.lambda = lam;
    smp.component_ratio = lnorm(u12, grid.h) / (rhs9 * lnorm(f, grid.h));
    smp.resolvent_ratio = resolvent_norm(m, lam, 1e-6) / rhs21a;
    if (lr < 0.0) {
      const double unorm = lnorm(ufull, grid.h);
      if (unorm > 1.05 * lnorm(f, grid.h) / std::abs(lr)) rep.left_accretive_ok = false;
    }
    rep.max_component_ratio = std::max(rep.max_component_ratio, smp.component_ratio);
    rep.max_resolvent_ratio = std::max(rep.max_resolvent_ratio, smp.resolvent_ratio);
    rep.samples.push_back(smp);
    ++accepted;
  }
  return rep;
}

std::string StripReport::to_csv() const {
  std::ostringstream os;
  os << "re,im,component_ratio,resolvent_ratio\n";
  for (const auto& s : samples)
    os << fmt(s.lambda.real()) << ',' << fmt(s.lambda.imag()) << ','
       << fmt(s.component_ratio) << ',' << fmt(s.resolvent_ratio) << '\n';
  return os.str();
}

std::string StripReport::to_json() const {
  nlohmann::json j;
  j["eps"] = eps;
  j["eps_check"] = eps_check;
  j["delta"] = delta;
  j["max_component_ratio"] = max_component_ratio;
  j["max_resolvent_ratio"] = max_resolvent_ratio;
  j["left_accretive_ok"] = left_accretive_ok;
  auto rows = nlohmann::json::array();
  for (const auto& s : samples)
    rows.push_back({{"lambda", {s.lambda.real(), s.lambda.imag()}},
                    {"component_ratio", s.component_ratio},
                    {"resolvent_ratio", s.resolvent_ratio}});
  j["samples"] = rows;
  return j.dump(2);
}

} // namespace btspec
