// SPDX-License-Identifier: Apache-2.0
#include "btspec/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "btspec/asymptotics.hpp"
#include "btspec/operators.hpp"
#include "btspec/reduction.hpp"
#include "btspec/spectra.hpp"
#include "btspec/variational.hpp"

namespace btspec {

namespace fs = std::filesystem;
using nlohmann::json;
using std::numbers::pi;

namespace {

struct WriteFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  os.flush();
  if (!os.good())
    throw WriteFailure("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is.good())
    throw ConfigFailure("cannot read " + path.string());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

// Picks the effective value of a flag: an explicitly passed flag wins, an
// entry in the config file comes next, the built-in default last.
template <typename T>
T pick(const CLI::App* sub, const std::string& flag, const json& cfg,
       const std::string& key, const T& flag_value) {
  if (sub->count(flag) > 0) return flag_value;
  if (cfg.contains(key)) {
    try {
      return cfg.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigFailure("config key '" + key + "': " + e.what());
    }
  }
  return flag_value;
}

struct Context {
  std::string experiment;
  fs::path out;
  json resolved;
  std::vector<std::pair<std::string, std::string>> files; // name, content
  std::vector<std::string> notes;
  bool pass = true;
};

void emit(Context& ctx, double wall_s) {
  std::error_code ec;
  fs::create_directories(ctx.out, ec);
  if (ec) throw WriteFailure("cannot create " + ctx.out.string());
  for (const auto& [name, content] : ctx.files)
    write_file(ctx.out / name, content);
  json manifest;
  manifest["tool"] = "btspec";
  manifest["version"] = kToolVersion;
  manifest["experiment"] = ctx.experiment;
  manifest["config"] = ctx.resolved;
  manifest["wall_time_s"] = wall_s;
  write_file(ctx.out / "manifest.json", manifest.dump(2) + "\n");
  for (const auto& n : ctx.notes) std::printf("%s\n", n.c_str());
  std::printf("%s: %s (outputs in %s)\n", ctx.experiment.c_str(),
              ctx.pass ? "pass" : "FAIL", ctx.out.string().c_str());
}

OperatorSpec load_spec(const CLI::App* sub, const std::string& flag_path,
                       const json& cfg) {
  json spec_json;
  if (sub->count("--spec") > 0) {
    spec_json = json::parse(read_file(flag_path));
  } else if (cfg.contains("spec")) {
    spec_json = cfg.at("spec");
  } else {
    throw ConfigFailure("an operator spec is required (--spec or config)");
  }
  try {
    OperatorSpec spec = OperatorSpec::from_json(spec_json.dump());
    spec.validate();
    return spec;
  } catch (const std::exception& e) {
    throw ConfigFailure(std::string("operator spec: ") + e.what());
  }
}

json spec_to_json(const OperatorSpec& spec) {
  return json::parse(spec.to_json());
}

std::pair<double, double> parse_interval(const std::string& text) {
  const auto v = parse_double_list(text);
  if (v.size() != 2 || !(v[0] < v[1]))
    throw ConfigFailure("interval must be 'a,b' with a < b");
  return {v[0], v[1]};
}

} // namespace

Axis Axis::parse(const std::string& text) {
  Axis a;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &a.start, &a.stop, &a.count,
                  &extra) != 3 ||
      a.count < 1 || (a.count == 1 && a.start != a.stop))
    throw ConfigFailure("bad axis '" + text + "', expected start:stop:count");
  return a;
}

std::vector<double> Axis::values() const {
  std::vector<double> v(static_cast<size_t>(count));
  if (count == 1) {
    v[0] = start;
    return v;
  }
  for (int i = 0; i < count; ++i)
    v[static_cast<size_t>(i)] =
        start + (stop - start) * static_cast<double>(i) /
                    static_cast<double>(count - 1);
  return v;
}

std::string Axis::str() const {
  return fmt(start) + ":" + fmt(stop) + ":" + std::to_string(count);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigFailure("bad number '" + item + "' in list");
    }
    if (used != item.size())
      throw ConfigFailure("bad number '" + item + "' in list");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigFailure("empty numeric list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(text)) {
    if (v != std::floor(v))
      throw ConfigFailure("expected integers in list");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

namespace {

void run_spectrum(Context& ctx, const CLI::App* sub, const json& cfg,
                  const std::string& spec_path, const std::string& window_s,
                  double tol) {
  const OperatorSpec spec = load_spec(sub, spec_path, cfg);
  const std::string win = pick(sub, "--window", cfg, "window", window_s);
  const auto w = parse_double_list(win);
  if (w.size() != 4) throw ConfigFailure("window must be re0,re1,im0,im1");
  const double t = pick(sub, "--tol", cfg, "tol", tol);
  const auto result =
      survey_spectrum(spec, Window{w[0], w[1], w[2], w[3]}, t);
  std::ostringstream os;
  os << "re,im,residual\n";
  for (size_t i = 0; i < result.eigenvalues.size(); ++i)
    os << fmt(result.eigenvalues[i].real()) << ','
       << fmt(result.eigenvalues[i].imag()) << ','
       << fmt(i < result.residuals.size() ? result.residuals[i] : 0.0) << '\n';
  ctx.resolved = {{"spec", spec_to_json(spec)}, {"window", win}, {"tol", t}};
  ctx.files.emplace_back("spectrum.csv", os.str());
  ctx.notes.push_back(std::to_string(result.eigenvalues.size()) +
                      " eigenvalues in the window");
}

void run_pseudospectrum(Context& ctx, const CLI::App* sub, const json& cfg,
                        const std::string& spec_path, const std::string& re_s,
                        const std::string& im_s, double tol, bool serial) {
  const OperatorSpec spec = load_spec(sub, spec_path, cfg);
  const Axis re = Axis::parse(pick(sub, "--re", cfg, "re", re_s));
  const Axis im = Axis::parse(pick(sub, "--im", cfg, "im", im_s));
  const double t = pick(sub, "--tol", cfg, "tol", tol);
  const bool ser = pick(sub, "--serial", cfg, "serial", serial);
  const auto grid = pseudospectrum_grid(
      spec, re.values(), im.values(), t,
      ser ? SweepPolicy::Serial : SweepPolicy::Parallel);
  ctx.resolved = {{"spec", spec_to_json(spec)},
                  {"re", re.str()},
                  {"im", im.str()},
                  {"tol", t},
                  {"serial", ser}};
  ctx.files.emplace_back("pseudospectrum.csv", grid.to_csv());
  ctx.files.emplace_back("pseudospectrum.json", grid.to_json());
}

void run_asymptotics(Context& ctx, const CLI::App* sub, const json& cfg,
                     const std::string& eps_s, int modes) {
  const std::string eps_list = pick(sub, "--eps", cfg, "eps", eps_s);
  const int n = pick(sub, "--modes", cfg, "modes", modes);
  const auto rep = verify_eigenvalue_asymptotics(parse_double_list(eps_list), n);
  ctx.resolved = {{"eps", eps_list}, {"modes", n}};
  ctx.files.emplace_back("asymptotics.csv", rep.to_csv());
  ctx.files.emplace_back("asymptotics.json", rep.to_json());
  for (size_t i = 0; i < rep.slopes.size(); ++i) {
    ctx.notes.push_back("mode " + std::to_string(i + 1) + " slope " +
                        std::to_string(rep.slopes[i]));
    if (!(rep.slopes[i] > 1.7 && rep.slopes[i] < 2.3)) ctx.pass = false;
  }
  if (n >= 1) {
    ctx.notes.push_back("refined slope " + std::to_string(rep.refined_slope));
    if (!(rep.refined_slope > 2.6 && rep.refined_slope < 3.4))
      ctx.pass = false;
  }
}

void run_resolvent_bound(Context& ctx, const CLI::App* sub, const json& cfg,
                         const std::string& eps_s, double rho, double rhat,
                         int samples, uint64_t seed) {
  const std::string eps_list = pick(sub, "--eps", cfg, "eps", eps_s);
  const double rho_v = pick(sub, "--rho", cfg, "rho", rho);
  const double rhat_v = pick(sub, "--rhat", cfg, "rhat", rhat);
  const int samples_v = pick(sub, "--samples", cfg, "samples", samples);
  const uint64_t seed_v = pick(sub, "--seed", cfg, "seed", seed);
  const auto eps_values = parse_double_list(eps_list);
  ctx.resolved = {{"eps", eps_list},
                  {"rho", rho_v},
                  {"rhat", rhat_v},
                  {"samples", samples_v},
                  {"seed", seed_v}};
  double frozen = 0.0;
  json summary = json::array();
  for (size_t i = 0; i < eps_values.size(); ++i) {
    const auto rep =
        verify_resolvent_bound(eps_values[i], rho_v, rhat_v, samples_v, seed_v);
    ctx.files.emplace_back("resolvent_bound_" + std::to_string(i + 1) + ".csv",
                           rep.to_csv());
    if (i == 0) frozen = rep.max_ratio;
    const bool ok = rep.accretive_ok && rep.max_ratio <= 2.0 * frozen;
    if (!ok) ctx.pass = false;
    summary.push_back({{"eps", eps_values[i]},
                       {"max_ratio", rep.max_ratio},
                       {"accretive_ok", rep.accretive_ok},
                       {"ok", ok}});
    ctx.notes.push_back("eps " + fmt(eps_values[i]) + " max ratio " +
                        std::to_string(rep.max_ratio));
  }
  json top = {{"frozen_ratio", frozen}, {"runs", summary}};
  ctx.files.emplace_back("resolvent_bound.json", top.dump(2) + "\n");
}

void run_strip_estimate(Context& ctx, const CLI::App* sub, const json& cfg,
                        const std::string& eps_s, double delta, int samples,
                        uint64_t seed) {
  const std::string eps_list = pick(sub, "--eps", cfg, "eps", eps_s);
  const double delta_v = pick(sub, "--delta", cfg, "delta", delta);
  const int samples_v = pick(sub, "--samples", cfg, "samples", samples);
  const uint64_t seed_v = pick(sub, "--seed", cfg, "seed", seed);
  const auto eps_values = parse_double_list(eps_list);
  ctx.resolved = {{"eps", eps_list},
                  {"delta", delta_v},
                  {"samples", samples_v},
                  {"seed", seed_v}};
  double frozen_c = 0.0, frozen_r = 0.0;
  json summary = json::array();
  for (size_t i = 0; i < eps_values.size(); ++i) {
    const auto rep = verify_strip_estimate(eps_values[i], delta_v, samples_v,
                                           seed_v);
    ctx.files.emplace_back("strip_estimate_" + std::to_string(i + 1) + ".csv",
                           rep.to_csv());
    if (i == 0) {
      frozen_c = rep.max_component_ratio;
      frozen_r = rep.max_resolvent_ratio;
    }
    const bool ok = rep.left_accretive_ok &&
                    rep.max_component_ratio <= 2.0 * frozen_c &&
                    rep.max_resolvent_ratio <= 2.0 * frozen_r;
    if (!ok) ctx.pass = false;
    summary.push_back({{"eps", eps_values[i]},
                       {"max_component_ratio", rep.max_component_ratio},
                       {"max_resolvent_ratio", rep.max_resolvent_ratio},
                       {"ok", ok}});
    ctx.notes.push_back("eps " + fmt(eps_values[i]) + " component ratio " +
                        std::to_string(rep.max_component_ratio));
  }
  json top = {{"frozen_component_ratio", frozen_c},
              {"frozen_resolvent_ratio", frozen_r},
              {"runs", summary}};
  ctx.files.emplace_back("strip_estimate.json", top.dump(2) + "\n");
}

void run_reduction_check(Context& ctx, const CLI::App* sub, const json& cfg,
                         const std::string& eps_s, int mode, double tol,
                         const std::string& omega_s) {
  const std::string eps_list = pick(sub, "--eps", cfg, "eps", eps_s);
  const int mode_v = pick(sub, "--mode", cfg, "mode", mode);
  const double tol_v = pick(sub, "--tol", cfg, "tol", tol);
  const Axis omega = Axis::parse(pick(sub, "--omega", cfg, "omega", omega_s));
  const auto grid = Grid1D::make(omega.start, omega.stop, omega.count);
  ctx.resolved = {{"eps", eps_list},
                  {"mode", mode_v},
                  {"tol", tol_v},
                  {"omega", omega.str()}};
  std::ostringstream os;
  os << "eps,mode,mapped_re,mapped_im,direct_re,direct_im,diff\n";
  for (double eps : parse_double_list(eps_list)) {
    const double ec = std::pow(eps, 4.0 / 3.0);
    const cdouble start =
        (cdouble(0.0, 1.0) + std::pow(ec, 0.75) * mu_k0(mode_v)) /
        std::sqrt(ec);
    const cdouble mapped =
        std::sqrt(ec) * find_lambda_root(start, ec, grid, 1e-9);

    const double h = std::sqrt(eps) / 14.0;
    OperatorSpec sp;
    sp.kind = OperatorKind::BlochTorreyLine;
    sp.grid = Grid1D::make(-8.0, 8.0,
                           static_cast<int>(std::llround(16.0 / h)) - 1);
    sp.order = 4;
    sp.eps = eps;
    sp.b0 = 1.0;
    const cdouble direct =
        locate_eigenvalue_two_grid(sp, kappa0(mode_v, eps), 1e-12).extrapolated;
    const double diff = std::abs(mapped - direct);
    if (!(diff < tol_v)) ctx.pass = false;
    os << fmt(eps) << ',' << mode_v << ',' << fmt(mapped.real()) << ','
       << fmt(mapped.imag()) << ',' << fmt(direct.real()) << ','
       << fmt(direct.imag()) << ',' << fmt(diff) << '\n';
    ctx.notes.push_back("eps " + fmt(eps) + " pipeline difference " +
                        fmt(diff));
  }
  ctx.files.emplace_back("reduction_check.csv", os.str());
}

void run_rho0(Context& ctx, const CLI::App* sub, const json& cfg,
              const std::string& interval_s, const std::string& n_s) {
  const std::string interval = pick(sub, "--interval", cfg, "interval",
                                    interval_s);
  const std::string n_list = pick(sub, "--n", cfg, "n", n_s);
  const auto [a, b] = parse_interval(interval);
  const auto res = compute_rho0(a, b, parse_int_list(n_list));
  ctx.resolved = {{"interval", interval}, {"n", n_list}};
  ctx.files.emplace_back("rho0.csv", res.to_csv());
  ctx.files.emplace_back("rho0.json", res.to_json());
  ctx.notes.push_back("rho0 = " + fmt(res.rho0));
  if (!(res.rho0 > pi * pi / ((b - a) * (b - a)))) ctx.pass = false;
}

void run_scaling_law(Context& ctx, const CLI::App* sub, const json& cfg,
                     const std::string& interval_s, const std::string& eps_s,
                     int grid_n) {
  const std::string interval =
      pick(sub, "--interval", cfg, "interval", interval_s);
  const std::string eps_list = pick(sub, "--eps", cfg, "eps", eps_s);
  const int n = pick(sub, "--grid-n", cfg, "grid_n", grid_n);
  const auto [a, b] = parse_interval(interval);
  const auto rep = verify_scaling_law(parse_double_list(eps_list), a, b, n);
  ctx.resolved = {{"interval", interval}, {"eps", eps_list}, {"grid_n", n}};
  ctx.files.emplace_back("scaling_law.csv", rep.to_csv());
  ctx.files.emplace_back("scaling_law.json", rep.to_json());
  ctx.notes.push_back("rho0 = " + fmt(rep.rho0) + ", last ratio = " +
                      fmt(rep.ratios.back()));
  if (!rep.within_bounds || !rep.error_decreasing) ctx.pass = false;
}

void run_nu_curve(Context& ctx, const CLI::App* sub, const json& cfg,
                  const std::string& interval_s, double eps,
                  const std::string& lambda_s, int grid_n) {
  const std::string interval =
      pick(sub, "--interval", cfg, "interval", interval_s);
  const double eps_v = pick(sub, "--eps", cfg, "eps", eps);
  const int n = pick(sub, "--grid-n", cfg, "grid_n", grid_n);
  std::string lambda_axis = pick(sub, "--lambda", cfg, "lambda", lambda_s);
  const auto [a, b] = parse_interval(interval);
  if (lambda_axis.empty()) {
    // Default bracket: from the Dirichlet floor up to twice the variational
    // ceiling, clipped to the resolvent-average window.
    const double rho0 = compute_rho0(a, b, {255, 511}).rho0;
    const double floor = pi * pi * eps_v * eps_v / ((b - a) * (b - a));
    const double ceiling =
        std::min(2.0 * rho0 * eps_v * eps_v,
                 0.95 * std::pow(eps_v, 2.0 / 3.0) * airy_threshold());
    lambda_axis = Axis{floor, ceiling, 32}.str();
  }
  const Axis lam = Axis::parse(lambda_axis);
  const auto curve = nu_curve(eps_v, a, b, lam.values(), n);
  ctx.resolved = {{"interval", interval},
                  {"eps", eps_v},
                  {"lambda", lambda_axis},
                  {"grid_n", n}};
  ctx.files.emplace_back("nu_curve.csv", curve.to_csv());
  ctx.files.emplace_back("nu_curve.json", curve.to_json());
  ctx.notes.push_back(curve.crossing
                          ? "crossing at " + fmt(*curve.crossing)
                          : std::string("no crossing in the sampled range"));
}

void run_airy_estimate(Context& ctx, const CLI::App* sub, const json& cfg,
                       const std::string& interval_s, const std::string& eps_s,
                       double K, int minimizer_n) {
  const std::string interval =
      pick(sub, "--interval", cfg, "interval", interval_s);
  const std::string eps_list = pick(sub, "--eps", cfg, "eps", eps_s);
  const double k_flag = pick(sub, "--K", cfg, "K", K);
  const int n = pick(sub, "--minimizer-n", cfg, "minimizer_n", minimizer_n);
  const auto [a, b] = parse_interval(interval);
  const auto base = compute_rho0(a, b, {(n + 1) / 2, n});
  const double k_v = k_flag > 0.0 ? k_flag : 2.0 * base.rho0;
  ctx.resolved = {{"interval", interval},
                  {"eps", eps_list},
                  {"K", k_v},
                  {"minimizer_n", n}};
  json runs = json::array();
  double frozen = 0.0;
  const auto eps_values = parse_double_list(eps_list);
  for (size_t i = 0; i < eps_values.size(); ++i) {
    const auto rep = auxiliary_airy_estimate(eps_values[i], k_v, base.grid,
                                             base.minimizer);
    const double worst = std::max(rep.ratio_plus, rep.ratio_minus);
    if (i == 0) frozen = worst;
    const bool ok = worst <= 2.0 * frozen;
    if (!ok) ctx.pass = false;
    runs.push_back(json::parse(rep.to_json()));
    runs.back()["ok"] = ok;
    ctx.notes.push_back("eps " + fmt(eps_values[i]) + " ratio " +
                        std::to_string(worst));
  }
  json top = {{"frozen_ratio", frozen}, {"runs", runs}};
  ctx.files.emplace_back("airy_estimate.json", top.dump(2) + "\n");
}

void apply_threads(const CLI::App* sub, int threads) {
  int n = threads;
  if (sub->count("--threads") == 0) {
    if (const char* env = std::getenv("BTSPEC_THREADS")) {
      try {
        n = std::stoi(env);
      } catch (const std::exception&) {
        throw ConfigFailure("BTSPEC_THREADS is not an integer");
      }
    }
  }
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"spectral laboratory for a family of coupled advection"
               " diffusion operators"};
  app.set_version_flag("--version", std::string("btspec ") + kToolVersion);
  app.require_subcommand(1);

  // Flags shared by every experiment.
  struct Common {
    std::string out = ".";
    std::string config;
    int threads = 0;
  };
  std::map<std::string, Common> common;
  auto add_common = [&](CLI::App* sub) {
    Common& c = common[sub->get_name()];
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--config", c.config,
                    "JSON config or a previously emitted manifest");
    sub->add_option("--threads", c.threads,
                    "worker threads (BTSPEC_THREADS as fallback)");
  };

  std::string spec_path, window_s = "-2,2,-2,2";
  double sp_tol = 1e-10;
  auto* sc_spectrum = app.add_subcommand("spectrum", "eigenvalues in a window");
  sc_spectrum->add_option("--spec", spec_path, "operator spec JSON file");
  sc_spectrum->add_option("--window", window_s, "re0,re1,im0,im1");
  sc_spectrum->add_option("--tol", sp_tol, "solver tolerance");
  add_common(sc_spectrum);

  std::string ps_spec, ps_re = "-1:1:41", ps_im = "-1:1:41";
  double ps_tol = 1e-6;
  bool ps_serial = false;
  auto* sc_pseudo =
      app.add_subcommand("pseudospectrum", "resolvent norm grid");
  sc_pseudo->add_option("--spec", ps_spec, "operator spec JSON file");
  sc_pseudo->add_option("--re", ps_re, "real axis start:stop:count");
  sc_pseudo->add_option("--im", ps_im, "imaginary axis start:stop:count");
  sc_pseudo->add_option("--tol", ps_tol, "singular value tolerance");
  sc_pseudo->add_flag("--serial", ps_serial, "disable the parallel sweep");
  add_common(sc_pseudo);

  std::string as_eps = "0.08,0.04,0.02";
  int as_modes = 2;
  auto* sc_asym =
      app.add_subcommand("asymptotics", "small-eps eigenvalue slopes");
  sc_asym->add_option("--eps", as_eps, "comma list of eps");
  sc_asym->add_option("--modes", as_modes, "number of modes");
  add_common(sc_asym);

  std::string rb_eps = "0.05,0.025";
  double rb_rho = 1.0, rb_rhat = 10.0;
  int rb_samples = 41;
  uint64_t rb_seed = 1;
  auto* sc_rb = app.add_subcommand("resolvent-bound",
                                   "sampled off-spectrum resolvent bound");
  sc_rb->add_option("--eps", rb_eps, "comma list of eps, largest first");
  sc_rb->add_option("--rho", rb_rho, "real part ceiling factor");
  sc_rb->add_option("--rhat", rb_rhat, "excluded ball radius factor");
  sc_rb->add_option("--samples", rb_samples, "samples per eps");
  sc_rb->add_option("--seed", rb_seed, "sampler seed");
  add_common(sc_rb);

  std::string st_eps = "0.1,0.05";
  double st_delta = 0.25;
  int st_samples = 100;
  uint64_t st_seed = 1;
  auto* sc_strip =
      app.add_subcommand("strip-estimate", "sampled strip estimates");
  sc_strip->add_option("--eps", st_eps, "comma list of eps, largest first");
  sc_strip->add_option("--delta", st_delta, "strip shrink parameter");
  sc_strip->add_option("--samples", st_samples, "samples per eps");
  sc_strip->add_option("--seed", st_seed, "sampler seed");
  add_common(sc_strip);

  std::string rc_eps = "0.08,0.05", rc_omega = "-8:8:799";
  int rc_mode = 1;
  double rc_tol = 1e-5;
  auto* sc_red = app.add_subcommand(
      "reduction-check", "Fourier-side root against the direct eigenvalue");
  sc_red->add_option("--eps", rc_eps, "comma list of eps");
  sc_red->add_option("--mode", rc_mode, "mode index");
  sc_red->add_option("--tol", rc_tol, "agreement tolerance");
  sc_red->add_option("--omega", rc_omega, "Fourier grid start:stop:count");
  add_common(sc_red);

  std::string r0_interval = "0,1", r0_n = "511,1023,2047";
  auto* sc_rho0 = app.add_subcommand("rho0", "variational constant");
  sc_rho0->add_option("--interval", r0_interval, "a,b");
  sc_rho0->add_option("--n", r0_n, "comma list of grid sizes");
  add_common(sc_rho0);

  std::string sl_interval = "0,1", sl_eps = "0.1,0.05,0.025";
  int sl_grid_n = 311;
  auto* sc_scal =
      app.add_subcommand("scaling-law", "eps^2 law for the interval spectrum");
  sc_scal->add_option("--interval", sl_interval, "a,b");
  sc_scal->add_option("--eps", sl_eps, "comma list of eps, decreasing");
  sc_scal->add_option("--grid-n", sl_grid_n, "interval grid size");
  add_common(sc_scal);

  std::string nc_interval = "0,1", nc_lambda;
  double nc_eps = 0.1;
  int nc_grid_n = 311;
  auto* sc_nu = app.add_subcommand("nu-curve", "nu(Lambda) sweep and crossing");
  sc_nu->add_option("--interval", nc_interval, "a,b");
  sc_nu->add_option("--eps", nc_eps, "eps");
  sc_nu->add_option("--lambda", nc_lambda,
                    "Lambda axis start:stop:count (default: auto bracket)");
  sc_nu->add_option("--grid-n", nc_grid_n, "interval grid size");
  add_common(sc_nu);

  std::string ae_interval = "0,1", ae_eps = "0.1,0.05";
  double ae_k = 0.0;
  int ae_n = 1023;
  auto* sc_airy =
      app.add_subcommand("airy-estimate", "auxiliary resolvent estimate");
  sc_airy->add_option("--interval", ae_interval, "a,b");
  sc_airy->add_option("--eps", ae_eps, "comma list of eps, largest first");
  sc_airy->add_option("--K", ae_k, "Lambda = K eps^2 (0: twice rho0)");
  sc_airy->add_option("--minimizer-n", ae_n, "minimizer grid size");
  add_common(sc_airy);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("btspec");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const Common& com = common[sub->get_name()];

  const auto t0 = std::chrono::steady_clock::now();
  Context ctx;
  ctx.experiment = sub->get_name();
  try {
    apply_threads(sub, com.threads);
    json cfg = json::object();
    if (!com.config.empty()) {
      try {
        cfg = json::parse(read_file(com.config));
      } catch (const json::exception& e) {
        throw ConfigFailure(std::string("config: ") + e.what());
      }
      // Accept a whole manifest as well as a bare config object.
      if (cfg.contains("config")) cfg = cfg.at("config");
    }
    ctx.out = pick(sub, "--out", cfg, "out", com.out);

    const std::string& name = ctx.experiment;
    if (name == "spectrum")
      run_spectrum(ctx, sub, cfg, spec_path, window_s, sp_tol);
    else if (name == "pseudospectrum")
      run_pseudospectrum(ctx, sub, cfg, ps_spec, ps_re, ps_im, ps_tol,
                         ps_serial);
    else if (name == "asymptotics")
      run_asymptotics(ctx, sub, cfg, as_eps, as_modes);
    else if (name == "resolvent-bound")
      run_resolvent_bound(ctx, sub, cfg, rb_eps, rb_rho, rb_rhat, rb_samples,
                          rb_seed);
    else if (name == "strip-estimate")
      run_strip_estimate(ctx, sub, cfg, st_eps, st_delta, st_samples, st_seed);
    else if (name == "reduction-check")
      run_reduction_check(ctx, sub, cfg, rc_eps, rc_mode, rc_tol, rc_omega);
    else if (name == "rho0")
      run_rho0(ctx, sub, cfg, r0_interval, r0_n);
    else if (name == "scaling-law")
      run_scaling_law(ctx, sub, cfg, sl_interval, sl_eps, sl_grid_n);
    else if (name == "nu-curve")
      run_nu_curve(ctx, sub, cfg, nc_interval, nc_eps, nc_lambda, nc_grid_n);
    else if (name == "airy-estimate")
      run_airy_estimate(ctx, sub, cfg, ae_interval, ae_eps, ae_k, ae_n);

    ctx.resolved["out"] = ctx.out.string();
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    emit(ctx, wall);
  } catch (const ConfigFailure& e) {
    std::fprintf(stderr, "btspec: %s\n", e.what());
    return kExitUsage;
  } catch (const WriteFailure& e) {
    std::fprintf(stderr, "btspec: %s\n", e.what());
    return kExitCantWrite;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "btspec: %s\n", e.what());
    return kExitCantWrite;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "btspec: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "btspec: %s\n", e.what());
    return kExitError;
  }
  return ctx.pass ? kExitOk : kExitFail;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

} // namespace btspec
