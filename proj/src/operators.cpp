// SPDX-License-Identifier: Apache-2.0
#include "btspec/operators.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "btspec/airy.hpp"

namespace btspec {

using std::numbers::pi;
using json = nlohmann::json;

namespace {

const std::map<OperatorKind, std::string>& kind_table() {
  static const std::map<OperatorKind, std::string> t = {
      {OperatorKind::BlochTorreyLine, "bloch_torrey_line"},
      {OperatorKind::BlochTorreyInterval, "bloch_torrey_interval"},
      {OperatorKind::RotatedBlochTorrey, "rotated_bloch_torrey"},
      {OperatorKind::GeneralField, "general_field"},
      {OperatorKind::ComplexAiryPlus, "complex_airy_plus"},
      {OperatorKind::ComplexAiryMinus, "complex_airy_minus"},
      {OperatorKind::ComplexHarmonic, "complex_harmonic"},
      {OperatorKind::QuarticM0, "quartic_m0"},
      {OperatorKind::QuarticM, "quartic_m"},
      {OperatorKind::DilatedM, "dilated_m"},
      {OperatorKind::HatL, "hat_l"},
      {OperatorKind::IntervalPLambda, "interval_p_lambda"},
      {OperatorKind::LimitAtilde, "limit_atilde"},
  };
  return t;
}

// Parameters each kind accepts (grid and order are always allowed).
const std::set<std::string>& allowed_params(OperatorKind k) {
  static const std::map<OperatorKind, std::set<std::string>> t = {
      {OperatorKind::BlochTorreyLine, {"eps", "b0"}},
      {OperatorKind::BlochTorreyInterval, {"eps", "b0"}},
      {OperatorKind::RotatedBlochTorrey, {"eps"}},
      {OperatorKind::GeneralField, {"eps", "bfield", "xi2", "xi3"}},
      {OperatorKind::ComplexAiryPlus, {"eps"}},
      {OperatorKind::ComplexAiryMinus, {"eps"}},
      {OperatorKind::ComplexHarmonic, {}},
      {OperatorKind::QuarticM0, {"eps", "lambda"}},
      {OperatorKind::QuarticM, {"eps", "lambda"}},
      {OperatorKind::DilatedM, {"eps", "lambda", "theta"}},
      {OperatorKind::HatL, {"eps", "mu"}},
      {OperatorKind::IntervalPLambda, {"eps", "lambda"}},
      {OperatorKind::LimitAtilde, {}},
  };
  return t.at(k);
}

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument("operator spec: " + msg); }

void require(bool cond, const std::string& msg) {
  if (!cond) bad(msg);
}

using Block3 = std::array<std::array<cdouble, 3>, 3>;

// Assemble -kc * D2 (x) I3 + per-node 3x3 coupling blocks, interleaved
// component ordering so the system stays banded.
ComplexBandedMatrix assemble_system(const Grid1D& g, int order, cdouble kc,
                                    const std::function<Block3(int)>& block) {
  const ComplexBandedMatrix d2 = second_derivative_matrix(g, order);
  const int bw = 3 * d2.kl() + 2;
  ComplexBandedMatrix m(3 * g.n, bw, bw);
  for (int j = 0; j < g.n; ++j) {
    const int ilo = std::max(0, j - d2.ku());
    const int ihi = std::min(g.n - 1, j + d2.kl());
    for (int i = ilo; i <= ihi; ++i) {
      const cdouble v = kc * d2.at(i, j);
      if (v == cdouble{}) continue;
      for (int c = 0; c < 3; ++c) m.add(3 * i + c, 3 * j + c, v);
    }
  }
  for (int i = 0; i < g.n; ++i) {
    const Block3 b = block(i);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        if (b[r][c] != cdouble{}) m.add(3 * i + r, 3 * i + c, b[r][c]);
  }
  return m;
}

ComplexBandedMatrix assemble_scalar(const Grid1D& g, int order, cdouble kc,
                                    const std::function<cdouble(double)>& potential) {
  const ComplexBandedMatrix d2 = second_derivative_matrix(g, order);
  ComplexBandedMatrix m(g.n, d2.kl(), d2.ku());
  for (int j = 0; j < g.n; ++j) {
    const int ilo = std::max(0, j - d2.ku());
    const int ihi = std::min(g.n - 1, j + d2.kl());
    for (int i = ilo; i <= ihi; ++i) m.set(i, j, kc * d2.at(i, j));
  }
  for (int i = 0; i < g.n; ++i) m.add(i, i, potential(g.node(i)));
  return m;
}

cdouble phi_term(double eps, cdouble omega, cdouble mu) {
  const cdouble i1(0.0, 1.0);
  const cdouble den = -i1 + eps * omega * omega - eps * mu;
  return (i1 + 2.0 * eps * omega * omega + eps * mu) / (den * den);
}

json complex_to_json(cdouble z) { return json::array({z.real(), z.imag()}); }

cdouble complex_from_json(const json& j, const std::string& name) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    bad("field '" + name + "' must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

std::string kind_name(OperatorKind k) { return kind_table().at(k); }

OperatorKind kind_from_name(const std::string& name) {
  for (const auto& [k, v] : kind_table())
    if (v == name) return k;
  bad("unknown kind '" + name + "'");
}

double airy_threshold() { return airy_first_zero_abs() / 2.0; }

void OperatorSpec::validate() const {
  const auto& allowed = allowed_params(kind);
  const auto check = [&](const std::string& name, bool present) {
    if (allowed.count(name) && !present) bad("kind " + kind_name(kind) + " requires '" + name + "'");
    if (!allowed.count(name) && present)
      bad("kind " + kind_name(kind) + " does not accept '" + name + "'");
  };
  check("eps", eps.has_value());
  check("b0", b0.has_value());
  check("bfield", bfield.has_value());
  check("xi2", xi2.has_value());
  check("xi3", xi3.has_value());
  check("lambda", lambda.has_value());
  check("mu", mu.has_value());
  check("theta", theta.has_value());

  require(order == 2 || order == 4, "order must be 2 or 4");
  require(grid.n >= 3 && grid.a < grid.b, "grid not constructed");

  if (eps) {
    // HatL admits eps = 0 (the unperturbed oscillator); everything else
    // needs a positive semiclassical parameter.
    if (kind == OperatorKind::HatL)
      require(*eps >= 0.0, "eps must be nonnegative");
    else
      require(*eps > 0.0, "eps must be positive");
  }
  if (bfield) require(bfield->size() == static_cast<size_t>(grid.n),
                      "bfield must supply one 3-vector per grid node");
  if (kind == OperatorKind::QuarticM || kind == OperatorKind::DilatedM) {
    require(lambda->imag() != 0.0 || lambda->real() < 0.0,
            "lambda must avoid the nonnegative real axis");
  }
  if (kind == OperatorKind::DilatedM)
    require(std::abs(theta->imag()) < 3.0 * pi / 16.0,
            "Im(theta) must satisfy |Im theta| < 3pi/16");
  if (kind == OperatorKind::IntervalPLambda) {
    require(lambda->imag() == 0.0, "Lambda must be real");
    require(lambda->real() < std::pow(*eps, 2.0 / 3.0) * airy_threshold(),
            "Lambda must lie below the Airy threshold");
    require(order == 2, "interval_p_lambda supports order 2 only");
  }
  if (kind == OperatorKind::LimitAtilde)
    require(order == 2, "limit_atilde supports order 2 only");
}

std::string OperatorSpec::to_json() const {
  validate();
  json j;
  j["kind"] = kind_name(kind);
  j["grid"] = {{"a", grid.a}, {"b", grid.b}, {"n", grid.n}};
  j["order"] = order;
  if (eps) j["eps"] = *eps;
  if (b0) j["b0"] = *b0;
  if (bfield) {
    json rows = json::array();
    for (const auto& v : *bfield) rows.push_back({v[0], v[1], v[2]});
    j["bfield"] = rows;
  }
  if (xi2) j["xi2"] = *xi2;
  if (xi3) j["xi3"] = *xi3;
  if (lambda) j["lambda"] = complex_to_json(*lambda);
  if (mu) j["mu"] = complex_to_json(*mu);
  if (theta) j["theta"] = complex_to_json(*theta);
  return j.dump(2);
}

OperatorSpec OperatorSpec::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("top level must be an object");
  static const std::set<std::string> known = {"kind", "grid", "order", "eps",
                                              "b0",   "bfield", "xi2", "xi3",
                                              "lambda", "mu", "theta"};
  for (const auto& [key, val] : j.items()) {
    (void)val;
    if (!known.count(key)) bad("unknown field '" + key + "'");
  }
  if (!j.contains("kind") || !j["kind"].is_string()) bad("missing string field 'kind'");
  if (!j.contains("grid") || !j["grid"].is_object()) bad("missing object field 'grid'");
  for (const auto& [key, val] : j["grid"].items()) {
    (void)val;
    if (key != "a" && key != "b" && key != "n") bad("unknown grid field '" + key + "'");
  }
  OperatorSpec s;
  s.kind = kind_from_name(j["kind"].get<std::string>());
  s.grid = Grid1D::make(j["grid"].at("a").get<double>(), j["grid"].at("b").get<double>(),
                        j["grid"].at("n").get<int>());
  s.order = j.value("order", 2);
  if (j.contains("eps")) s.eps = j["eps"].get<double>();
  if (j.contains("b0")) s.b0 = j["b0"].get<double>();
  if (j.contains("bfield")) {
    std::vector<std::array<double, 3>> rows;
    for (const auto& r : j["bfield"]) {
      if (!r.is_array() || r.size() != 3) bad("bfield rows must be 3-vectors");
      rows.push_back({r[0].get<double>(), r[1].get<double>(), r[2].get<double>()});
    }
    s.bfield = std::move(rows);
  }
  if (j.contains("xi2")) s.xi2 = j["xi2"].get<double>();
  if (j.contains("xi3")) s.xi3 = j["xi3"].get<double>();
  if (j.contains("lambda")) s.lambda = complex_from_json(j["lambda"], "lambda");
  if (j.contains("mu")) s.mu = complex_from_json(j["mu"], "mu");
  if (j.contains("theta")) s.theta = complex_from_json(j["theta"], "theta");
  s.validate();
  return s;
}

ComplexBandedMatrix build_bloch_torrey(const OperatorSpec& spec) {
  spec.validate();
  const double e2 = spec.eps ? (*spec.eps) * (*spec.eps) : 0.0;
  if (spec.kind == OperatorKind::BlochTorreyLine ||
      spec.kind == OperatorKind::BlochTorreyInterval) {
    const double b0 = *spec.b0;
    return assemble_system(spec.grid, spec.order, e2, [&](int i) {
      const double x = spec.grid.node(i);
      // Matrix of u -> -b x u with b = (b0, 0, x).
      return Block3{{{cdouble{}, cdouble{x, 0}, cdouble{}},
                     {cdouble{-x, 0}, cdouble{}, cdouble{b0, 0}},
                     {cdouble{}, cdouble{-b0, 0}, cdouble{}}}};
    });
  }
  if (spec.kind == OperatorKind::GeneralField) {
    const auto& bf = *spec.bfield;
    const double shift = e2 * ((*spec.xi2) * (*spec.xi2) + (*spec.xi3) * (*spec.xi3));
    return assemble_system(spec.grid, spec.order, e2, [&](int i) {
      const auto& b = bf[static_cast<size_t>(i)];
      return Block3{{{cdouble{shift, 0}, cdouble{b[2], 0}, cdouble{-b[1], 0}},
                     {cdouble{-b[2], 0}, cdouble{shift, 0}, cdouble{b[0], 0}},
                     {cdouble{b[1], 0}, cdouble{-b[0], 0}, cdouble{shift, 0}}}};
    });
  }
  bad("build_bloch_torrey: wrong kind " + kind_name(spec.kind));
}

ComplexBandedMatrix build_rotated(const OperatorSpec& spec) {
  spec.validate();
  require(spec.kind == OperatorKind::RotatedBlochTorrey, "build_rotated: wrong kind");
  const double e2 = (*spec.eps) * (*spec.eps);
  const double s = 1.0 / std::sqrt(2.0);
  return assemble_system(spec.grid, spec.order, e2, [&](int i) {
    const double x = spec.grid.node(i);
    return Block3{{{cdouble{0, x}, cdouble{}, cdouble{s, 0}},
                   {cdouble{}, cdouble{0, -x}, cdouble{s, 0}},
                   {cdouble{-s, 0}, cdouble{-s, 0}, cdouble{}}}};
  });
}

ComplexBandedMatrix build_scaled_rotated(double eps_check, const Grid1D& grid,
                                         int order) {
  require(eps_check > 0.0, "eps_check must be positive");
  const double s = 1.0 / std::sqrt(2.0 * eps_check);
  return assemble_system(grid, order, 1.0, [&](int i) {
    const double x = grid.node(i);
    return Block3{{{cdouble{0, x}, cdouble{}, cdouble{s, 0}},
                   {cdouble{}, cdouble{0, -x}, cdouble{s, 0}},
                   {cdouble{-s, 0}, cdouble{-s, 0}, cdouble{}}}};
  });
}

ComplexBandedMatrix build_scalar(const OperatorSpec& spec) {
  spec.validate();
  const cdouble i1(0.0, 1.0);
  const Grid1D& g = spec.grid;
  switch (spec.kind) {
    case OperatorKind::ComplexAiryPlus:
    case OperatorKind::ComplexAiryMinus: {
      const double e2 = (*spec.eps) * (*spec.eps);
      const double sgn = spec.kind == OperatorKind::ComplexAiryPlus ? 1.0 : -1.0;
      return assemble_scalar(g, spec.order, e2, [&](double x) { return sgn * i1 * x; });
    }
    case OperatorKind::ComplexHarmonic:
      return assemble_scalar(g, spec.order, 1.0,
                             [&](double x) { return -2.0 * i1 * x * x; });
    case OperatorKind::QuarticM0: {
      const cdouble lam = *spec.lambda;
      const double inv_eps = 1.0 / *spec.eps;
      return assemble_scalar(g, spec.order, 1.0, [&](double w) {
        const cdouble d = w * w - lam;
        return d * d + inv_eps;
      });
    }
    case OperatorKind::QuarticM: {
      const cdouble lam = *spec.lambda;
      const double inv_eps = 1.0 / *spec.eps;
      for (int i = 0; i < g.n; ++i) {
        const double w = g.node(i);
        if (std::abs(w * w - lam) < 1e-12)
          bad("quartic potential singular at node " + std::to_string(i));
      }
      return assemble_scalar(g, spec.order, 1.0, [&](double w) {
        const cdouble d = w * w - lam;
        return d * d + inv_eps + (2.0 * w * w + lam) / (d * d);
      });
    }
    case OperatorKind::DilatedM: {
      const cdouble lam = *spec.lambda;
      const double inv_eps = 1.0 / *spec.eps;
      const cdouble e2t = std::exp(2.0 * (*spec.theta));
      for (int i = 0; i < g.n; ++i) {
        const double w = g.node(i);
        if (std::abs(e2t * w * w - lam) < 1e-12)
          bad("dilated potential singular at node " + std::to_string(i));
      }
      return assemble_scalar(g, spec.order, std::exp(-2.0 * (*spec.theta)), [&](double w) {
        const cdouble d = e2t * w * w - lam;
        return d * d + inv_eps + (2.0 * e2t * w * w + lam) / (d * d);
      });
    }
    case OperatorKind::HatL: {
      const cdouble muv = *spec.mu;
      const double eps = *spec.eps;
      const cdouble c34 = std::exp(cdouble(0.0, 3.0 * pi / 4.0));
      const cdouble c14 = std::exp(cdouble(0.0, pi / 4.0));
      const cdouble c18 = std::exp(cdouble(0.0, pi / 8.0));
      return assemble_scalar(g, spec.order, 1.0, [&](double sx) {
        const double s2 = sx * sx;
        return cdouble{2.0 * s2, 0.0} + 2.0 * c34 * muv + eps * c14 * muv * muv -
               2.0 * i1 * muv * eps * s2 + c34 * eps * s2 * s2 +
               eps * c14 * phi_term(eps, c18 * sx, muv);
      });
    }
    default:
      bad("build_scalar: wrong kind " + kind_name(spec.kind));
  }
}

DenseComplexMatrix build_interval_plambda(const OperatorSpec& spec, bool symmetrize) {
  spec.validate();
  require(spec.kind == OperatorKind::IntervalPLambda, "build_interval_plambda: wrong kind");
  const Grid1D& g = spec.grid;
  const double e2 = (*spec.eps) * (*spec.eps);
  const cdouble lam = *spec.lambda;
  const cdouble i1(0.0, 1.0);

  const ComplexBandedMatrix d2 = second_derivative_matrix(g, 2);
  ComplexBandedMatrix lminus(g.n, 1, 1), lplus(g.n, 1, 1);
  for (int j = 0; j < g.n; ++j) {
    const int ilo = std::max(0, j - 1);
    const int ihi = std::min(g.n - 1, j + 1);
    for (int i = ilo; i <= ihi; ++i) {
      lminus.set(i, j, e2 * d2.at(i, j));
      lplus.set(i, j, e2 * d2.at(i, j));
    }
  }
  for (int i = 0; i < g.n; ++i) {
    const double x = g.node(i);
    lminus.add(i, i, -i1 * x - lam);
    lplus.add(i, i, i1 * x - lam);
  }
  const BandedLU lum(lminus);
  const BandedLU lup(lplus);

  DenseComplexMatrix p(g.n);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < g.n; ++j) {
    std::vector<cdouble> e(static_cast<size_t>(g.n), cdouble{});
    e[static_cast<size_t>(j)] = 1.0;
    const auto wm = lum.solve(e);
    const auto wp = lup.solve(e);
    for (int i = 0; i < g.n; ++i)
      p.at(i, j) = 0.5 * (wm[static_cast<size_t>(i)] + wp[static_cast<size_t>(i)]);
  }
  for (int j = 0; j < g.n; ++j) {
    const int ilo = std::max(0, j - 1);
    const int ihi = std::min(g.n - 1, j + 1);
    for (int i = ilo; i <= ihi; ++i) p.at(i, j) += e2 * d2.at(i, j);
  }
  if (symmetrize) {
    for (int j = 0; j < g.n; ++j)
      for (int i = 0; i < j; ++i) {
        const cdouble avg = 0.5 * (p.at(i, j) + p.at(j, i));
        p.at(i, j) = avg;
        p.at(j, i) = avg;
      }
  }
  return p;
}

std::pair<ComplexBandedMatrix, ComplexBandedMatrix>
build_limit_atilde(const OperatorSpec& spec) {
  spec.validate();
  require(spec.kind == OperatorKind::LimitAtilde, "build_limit_atilde: wrong kind");
  const Grid1D& g = spec.grid;
  const double h = g.h;
  // Quadratic form h * sum over midpoints of |(w_{i+1}-w_i)/h|^2 for w'
  // plus the same with x-weighted samples for (xw)'. Boundary values are
  // zero, so both sums include the two half-open end cells.
  ComplexBandedMatrix a(g.n, 1, 1), bw(g.n, 0, 0);
  for (int i = 0; i < g.n; ++i) {
    const double xi = g.node(i);
    a.set(i, i, 2.0 * (1.0 + xi * xi) / h);
    if (i + 1 < g.n) {
      const double xj = g.node(i + 1);
      a.set(i, i + 1, -(1.0 + xi * xj) / h);
      a.set(i + 1, i, -(1.0 + xi * xj) / h);
    }
    bw.set(i, i, h * (1.0 + xi * xi));
  }
  return {a, bw};
}

ComplexBandedMatrix build_matrix(const OperatorSpec& spec) {
  switch (spec.kind) {
    case OperatorKind::BlochTorreyLine:
    case OperatorKind::BlochTorreyInterval:
    case OperatorKind::GeneralField:
      return build_bloch_torrey(spec);
    case OperatorKind::RotatedBlochTorrey:
      return build_rotated(spec);
    case OperatorKind::ComplexAiryPlus:
    case OperatorKind::ComplexAiryMinus:
    case OperatorKind::ComplexHarmonic:
    case OperatorKind::QuarticM0:
    case OperatorKind::QuarticM:
    case OperatorKind::DilatedM:
    case OperatorKind::HatL:
      return build_scalar(spec);
    default:
      bad("build_matrix: kind " + kind_name(spec.kind) + " is not a banded operator");
  }
}

} // namespace btspec
