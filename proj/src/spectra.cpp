// SPDX-License-Identifier: Apache-2.0
#include "btspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace btspec {

namespace {

DenseComplexMatrix dense_of(const ComplexBandedMatrix& m) {
  DenseComplexMatrix d(m.n());
  const auto cols = m.to_dense();
  for (int j = 0; j < m.n(); ++j)
    for (int i = 0; i < m.n(); ++i) d.at(i, j) = cols[static_cast<size_t>(j) * m.n() + i];
  return d;
}

double vec_norm(const std::vector<cdouble>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

// One inverse-iteration step at the QR eigenvalue gives a cheap residual
// estimate without asking zgeev for eigenvectors.
double one_step_residual(const ComplexBandedMatrix& m, cdouble lambda) {
  const double anorm = std::max(1.0, m.norm_inf());
  std::unique_ptr<BandedLU> lu;
  try {
    lu = std::make_unique<BandedLU>(m.shifted(lambda));
  } catch (const SingularMatrixError&) {
    return 0.0;
  }
  std::vector<cdouble> v(static_cast<size_t>(m.n()));
  for (int i = 0; i < m.n(); ++i) v[static_cast<size_t>(i)] = cdouble(1.0, 0.3 + 1e-4 * i);
  for (int step = 0; step < 2; ++step) {
    auto w = lu->solve(v);
    const double wn = vec_norm(w);
    if (!(wn > 0.0) || !std::isfinite(wn)) return 0.0;
    for (auto& z : w) z /= wn;
    v = std::move(w);
  }
  auto av = m.matvec(v);
  for (size_t i = 0; i < av.size(); ++i) av[i] -= lambda * v[i];
  return vec_norm(av) / anorm;
}

std::string format17(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

} // namespace

EigenResult survey_spectrum(const OperatorSpec& spec, const Window& window, double tol) {
  const ComplexBandedMatrix m = build_matrix(spec);
  if (m.n() > kDenseCap)
    throw std::invalid_argument(
        "survey_spectrum: matrix exceeds the dense cap, use locate_eigenvalue");
  const EigenResult all = dense_eigenvalues(dense_of(m), tol);
  EigenResult out;
  out.method = "dense_qr";
  for (const auto& z : all.eigenvalues) {
    if (!window.contains(z)) continue;
    out.eigenvalues.push_back(z);
    out.residuals.push_back(one_step_residual(m, z));
  }
  return out;
}

ShiftInvertResult locate_eigenvalue(const OperatorSpec& spec, cdouble target,
                                    double tol, int max_iter) {
  return shift_invert_eigenvalue(build_matrix(spec), target, tol, max_iter);
}

TwoGridResult locate_eigenvalue_two_grid(const OperatorSpec& spec, cdouble target,
                                         double tol) {
  TwoGridResult r;
  r.coarse = locate_eigenvalue(spec, target, tol).eigenvalue;
  OperatorSpec fine = spec;
  fine.grid = spec.grid.refined();
  if (fine.bfield) {
    // resample a nodewise field onto the refined grid by linear interpolation
    std::vector<std::array<double, 3>> rf(static_cast<size_t>(fine.grid.n));
    for (int i = 0; i < fine.grid.n; ++i) {
      const double x = fine.grid.node(i);
      const double t = (x - spec.grid.a) / spec.grid.h - 1.0;
      const int j0 = std::clamp(static_cast<int>(std::floor(t)), 0, spec.grid.n - 1);
      const int j1 = std::min(j0 + 1, spec.grid.n - 1);
      const double w = std::clamp(t - j0, 0.0, 1.0);
      for (int c = 0; c < 3; ++c)
        rf[static_cast<size_t>(i)][static_cast<size_t>(c)] =
            (1.0 - w) * (*spec.bfield)[static_cast<size_t>(j0)][static_cast<size_t>(c)] +
            w * (*spec.bfield)[static_cast<size_t>(j1)][static_cast<size_t>(c)];
    }
    fine.bfield = std::move(rf);
  }
  r.fine = locate_eigenvalue(fine, r.coarse, tol).eigenvalue;
  r.extrapolated = richardson_extrapolate(
      {{spec.grid.h, r.coarse}, {fine.grid.h, r.fine}}, spec.order);
  r.difference = std::abs(r.fine - r.coarse);
  return r;
}

double resolvent_norm(const ComplexBandedMatrix& m, cdouble lambda, double tol) {
  const double sigma = smallest_singular_value(m.shifted(lambda), tol);
  if (sigma == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / sigma;
}

double resolvent_norm(const OperatorSpec& spec, cdouble lambda, double tol) {
  return resolvent_norm(build_matrix(spec), lambda, tol);
}

ResolventGrid pseudospectrum_grid(const OperatorSpec& spec,
                                  const std::vector<double>& re_axis,
                                  const std::vector<double>& im_axis, double tol,
                                  SweepPolicy policy) {
  if (!std::is_sorted(re_axis.begin(), re_axis.end()) ||
      !std::is_sorted(im_axis.begin(), im_axis.end()))
    throw std::invalid_argument("pseudospectrum_grid: axes must be ascending");
  ResolventGrid g;
  g.re_axis = re_axis;
  g.im_axis = im_axis;
  g.spec = spec;
  g.norms.assign(re_axis.size() * im_axis.size(), 0.0);
  const ComplexBandedMatrix m = build_matrix(spec);
  const int total = static_cast<int>(re_axis.size() * im_axis.size());
  if (policy == SweepPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < total; ++k) {
      const size_t i = static_cast<size_t>(k) % re_axis.size();
      const size_t j = static_cast<size_t>(k) / re_axis.size();
      g.norms[static_cast<size_t>(k)] =
          resolvent_norm(m, cdouble(re_axis[i], im_axis[j]), tol);
    }
  } else {
    for (int k = 0; k < total; ++k) {
      const size_t i = static_cast<size_t>(k) % re_axis.size();
      const size_t j = static_cast<size_t>(k) / re_axis.size();
      g.norms[static_cast<size_t>(k)] =
          resolvent_norm(m, cdouble(re_axis[i], im_axis[j]), tol);
    }
  }
  return g;
}

std::string ResolventGrid::to_csv() const {
  std::ostringstream os;
  os << "re,im,norm\n";
  for (size_t j = 0; j < im_axis.size(); ++j)
    for (size_t i = 0; i < re_axis.size(); ++i)
      os << format17(re_axis[i]) << ',' << format17(im_axis[j]) << ','
         << format17(at(i, j)) << '\n';
  return os.str();
}

std::string ResolventGrid::to_json() const {
  nlohmann::json j;
  j["spec"] = nlohmann::json::parse(spec.to_json());
  j["re_axis"] = re_axis;
  j["im_axis"] = im_axis;
  j["norms"] = norms;
  return j.dump(2);
}

TruncationReport validate_truncation(const OperatorSpec& spec, cdouble target,
                                     const std::vector<double>& l_values,
                                     double tol) {
  if (l_values.size() < 2)
    throw std::invalid_argument("validate_truncation: need at least two radii");
  std::vector<double> ls = l_values;
  std::sort(ls.begin(), ls.end());
  TruncationReport rep;
  rep.l_values = ls;
  const double h = spec.grid.h;
  for (const double L : ls) {
    OperatorSpec s = spec;
    // keep the spacing fixed so differences isolate the truncation error
    const int n = std::max(3, static_cast<int>(std::lround(2.0 * L / h)) - 1);
    s.grid = Grid1D::make(-L, L, n);
    rep.eigenvalues.push_back(locate_eigenvalue(s, target, tol * 1e-3).eigenvalue);
  }
  bool pass = true;
  rep.smallest_adequate_l = ls.back();
  for (size_t i = 1; i < rep.eigenvalues.size(); ++i) {
    const double d = std::abs(rep.eigenvalues[i] - rep.eigenvalues[i - 1]);
    rep.diffs.push_back(d);
    if (d >= tol) pass = false;
  }
  // smallest L whose value already agrees with the most-resolved one
  for (size_t i = 0; i < rep.eigenvalues.size(); ++i) {
    if (std::abs(rep.eigenvalues[i] - rep.eigenvalues.back()) < tol) {
      rep.smallest_adequate_l = ls[i];
      break;
    }
  }
  rep.converged = rep.eigenvalues.back();
  rep.pass = pass;
  return rep;
}

double default_truncation(double eps, cdouble lambda_target) {
  return std::max(8.0, 6.0 * std::pow(eps, 2.0 / 3.0) * std::sqrt(std::abs(lambda_target)) + 8.0);
}

} // namespace btspec
