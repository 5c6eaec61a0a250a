// frengate: command-line driver turning structured configs into deterministic
// CSV/JSON data files for the frequency-entangling-gate analyses.
#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "frengate/dynamics.hpp"
#include "frengate/errors.hpp"
#include "frengate/io.hpp"
#include "frengate/modeopt.hpp"
#include "frengate/scattering.hpp"
#include "frengate/schmidt.hpp"

namespace {

using namespace frengate;
using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

struct CliOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::string format = "csv";
  double omega2x_hz = 0.0;  // 0 = keep dimensionless units
};

double frequency_scale(const CliOptions& opt) {
  return opt.omega2x_hz > 0.0 ? 2.0 * std::numbers::pi * opt.omega2x_hz : 1.0;
}

double get_num(const json& node, const std::string& key, double fallback) {
  if (!node.contains(key)) return fallback;
  if (!node[key].is_number()) throw config_error("config: '" + key + "' must be a number");
  return node[key].get<double>();
}

double require_num(const json& node, const std::string& key, const std::string& where) {
  if (!node.contains(key) || !node[key].is_number())
    throw config_error("config: missing numeric key '" + where + "." + key + "'");
  return node[key].get<double>();
}

int get_int(const json& node, const std::string& key, int fallback) {
  if (!node.contains(key)) return fallback;
  if (!node[key].is_number_integer())
    throw config_error("config: '" + key + "' must be an integer");
  return node[key].get<int>();
}

std::string get_str(const json& node, const std::string& key, const std::string& fallback) {
  if (!node.contains(key)) return fallback;
  if (!node[key].is_string()) throw config_error("config: '" + key + "' must be a string");
  return node[key].get<std::string>();
}

PhysicalParams params_from(const json& cfg) {
  const json node = cfg.contains("params") ? cfg["params"] : json::object();
  PhysicalParams p = PhysicalParams::make(get_num(node, "omega_X", 0.5025),
                                          get_num(node, "delta_X", 0.005));
  p.S = get_num(node, "S", 0.0);
  p.Gamma = get_num(node, "Gamma", 1e-5);
  p.D = get_num(node, "D", 1.0);
  p.omega_e = get_num(node, "omega_e", 0.5026);
  p.omega_b = get_num(node, "omega_b", 0.4974);
  p.tau = get_num(node, "tau", 0.0);
  p.validate();
  return p;
}

json params_json(const PhysicalParams& p) {
  return {{"omega_2X", p.omega_2X}, {"omega_X", p.omega_X}, {"delta_X", p.delta_X},
          {"S", p.S},               {"Gamma", p.Gamma},     {"D", p.D},
          {"omega_e", p.omega_e},   {"omega_b", p.omega_b}, {"tau", p.tau}};
}

std::vector<std::string> with_param_keys(std::vector<std::string> keys) {
  for (const char* k : {"params.omega_X", "params.delta_X", "params.S", "params.Gamma",
                        "params.D", "params.omega_e", "params.omega_b", "params.tau"})
    keys.emplace_back(k);
  return keys;
}

// Manifest writer: resolved parameters, tool version, per-file checksums.
struct Manifest {
  json doc;
  fs::path dir;

  Manifest(const std::string& command, const CliOptions& opt, const PhysicalParams& params)
      : dir(opt.out_dir) {
    fs::create_directories(dir);
    doc["command"] = command;
    doc["version"] = kVersion;
    doc["format"] = opt.format;
    doc["threads"] = thread_cap();
    doc["frequency_unit"] =
        opt.omega2x_hz > 0.0
            ? json{{"kind", "rad_per_s"}, {"omega_2X_hz", opt.omega2x_hz}}
            : json{{"kind", "omega_2X"}};
    doc["params"] = params_json(params);
    doc["files"] = json::object();
  }

  void add_file(const fs::path& path) {
    doc["files"][path.filename().string()] = file_checksum(path);
  }

  void write() {
    const fs::path path = dir / "manifest.json";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << doc.dump(2) << '\n';
  }
};

BiphotonField scaled_for_output(const BiphotonField& field, double scale) {
  if (scale == 1.0) return field;
  BiphotonField out = field;
  out.grid.omega_min *= scale;
  out.grid.omega_max *= scale;
  out.grid.omega_prime_min *= scale;
  out.grid.omega_prime_max *= scale;
  return out;
}

void write_channel(Manifest& manifest, const BiphotonField& field,
                   const PhysicalParams& params, const CliOptions& opt,
                   const std::string& stem) {
  const fs::path csv = manifest.dir / (stem + ".csv");
  const fs::path sidecar = manifest.dir / (stem + ".json");
  const BiphotonField out = scaled_for_output(field, frequency_scale(opt));
  save_field_csv(out, csv);
  save_field_sidecar(out, params, sidecar);
  manifest.add_file(csv);
  manifest.add_file(sidecar);
}

// ------------------------------------------------------------------ coupling
CouplingSpec coupling_from(const json& cfg, const PhysicalParams& params) {
  const json node = cfg.contains("coupling") ? cfg["coupling"] : json::object();
  const std::string type = get_str(node, "type", "gaussian");
  if (type == "gaussian") {
    GaussianCoupling g;
    g.beta = require_num(node, "beta", "coupling");
    g.gamma = get_num(node, "gamma", params.Gamma / 4.0);
    g.center = get_num(node, "center", params.omega_e - params.omega_b);
    g.validate();
    return CouplingSpec{g};
  }
  if (type == "physical") {
    const std::string profile = get_str(node, "profile", "");
    if (profile.empty())
      throw config_error("config: coupling.profile (CSV path) required for type=physical");
    const std::string kind = get_str(node, "kind", "linear");
    if (kind != "linear" && kind != "cubic")
      throw config_error("config: coupling.kind must be 'linear' or 'cubic'");
    PhysicalCoupling pc;
    pc.params = params;
    pc.mode = load_mode_profile_csv(profile, kind == "linear" ? ModeProfile::Kind::linear
                                                              : ModeProfile::Kind::cubic);
    pc.pole_floor = get_num(node, "pole_floor", 0.0);
    return CouplingSpec{pc};
  }
  if (type == "none") {
    PhysicalCoupling pc;
    pc.params = params;
    pc.mode = ModeProfile::constant(0.0, 2.0, 0.0);
    return CouplingSpec{pc};
  }
  throw config_error("config: unknown coupling.type '" + type + "'");
}

FrequencyGrid grid_from(const json& cfg, const PhysicalParams& params, double alpha,
                        double beta, int default_n) {
  const json node = cfg.contains("grid") ? cfg["grid"] : json::object();
  const int n = get_int(node, "n", default_n);
  if (node.contains("half_width")) {
    const double hw = require_num(node, "half_width", "grid");
    return FrequencyGrid::centered(params.omega_e, params.omega_b, hw, n);
  }
  return default_grid(params, alpha, beta, n);
}

CombFilter comb_from(const json& cfg, const PhysicalParams& params) {
  const json node = cfg["comb"];
  CombFilter comb;
  comb.fsr = require_num(node, "fsr", "comb");
  comb.peak_width = require_num(node, "peak_width", "comb");
  comb.n_range = get_int(node, "n_range", 0);
  comb.shift_to_centers = node.value("shifted", true);
  comb.center_omega = get_num(node, "center_omega", params.omega_e);
  comb.center_omega_prime = get_num(node, "center_omega_prime", params.omega_b);
  comb.validate();
  return comb;
}

// ------------------------------------------------------------------- scatter
int cmd_scatter(const CliOptions& opt) {
  const json cfg = load_config(opt.config_path);
  reject_unknown_keys(
      cfg,
      with_param_keys({"method", "input.alpha", "grid.n", "grid.half_width",
                       "coupling.type", "coupling.beta", "coupling.gamma",
                       "coupling.center", "coupling.profile", "coupling.kind",
                       "coupling.pole_floor", "comb.fsr", "comb.peak_width",
                       "comb.n_range", "comb.shifted", "comb.center_omega",
                       "comb.center_omega_prime"}),
      "scatter");
  const PhysicalParams params = params_from(cfg);
  if (!cfg.contains("input"))
    throw config_error("config: scatter needs an [input] table with alpha");
  GaussianInput input_spec;
  input_spec.alpha = require_num(cfg["input"], "alpha", "input");
  input_spec.omega_e = params.omega_e;
  input_spec.omega_b = params.omega_b;
  const std::string method = get_str(cfg, "method", "numeric");
  const bool has_comb = cfg.contains("comb");

  const CouplingSpec coupling = coupling_from(cfg, params);
  const double beta_hint =
      coupling.is_gaussian() ? coupling.gaussian().beta : input_spec.alpha;
  const FrequencyGrid grid =
      grid_from(cfg, params, input_spec.alpha, beta_hint, has_comb ? 1024 : 512);

  BiphotonField input = gaussian_input(input_spec, grid);
  if (has_comb) input = apply_comb_filter(input, comb_from(cfg, params));

  Manifest manifest("scatter", opt, params);
  manifest.doc["input"] = {{"alpha", input_spec.alpha}};
  manifest.doc["method"] = method;

  if (method == "numeric") {
    const ScatterResult result = scatter(input, coupling, params);
    const ChannelProbabilities probs = success_probability_numeric(result, input);
    json pj;
    for (int c = 0; c < 4; ++c) pj[result.channels[c].channel.name()] = probs.p[c];
    pj["p_success"] = probs.p_success;
    manifest.doc["probabilities"] = pj;
    for (const auto& ch : result.channels)
      write_channel(manifest, ch, params, opt, "channel_" + ch.channel.name());
  } else if (method == "analytic") {
    if (!coupling.is_gaussian())
      throw config_error("config: method=analytic requires the gaussian coupling");
    const double beta = coupling.gaussian().beta;
    if (has_comb) {
      const BiphotonField out =
          analytic_qudit_output(input_spec, comb_from(cfg, params), beta, params, grid);
      write_channel(manifest, out, params, opt, "channel_" + out.channel.name());
    } else {
      const ScatterResult result = analytic_gaussian_outputs(input_spec, beta, params, grid);
      const ChannelProbabilities probs = success_probability_numeric(result, input);
      json pj;
      for (int c = 0; c < 4; ++c) pj[result.channels[c].channel.name()] = probs.p[c];
      pj["p_success"] = probs.p_success;
      manifest.doc["probabilities"] = pj;
      for (const auto& ch : result.channels)
        write_channel(manifest, ch, params, opt, "channel_" + ch.channel.name());
    }
  } else {
    throw config_error("config: method must be 'numeric' or 'analytic'");
  }
  manifest.write();
  return 0;
}

// ------------------------------------------------------------------- schmidt
int cmd_schmidt(const CliOptions& opt) {
  const json cfg = load_config(opt.config_path);
  reject_unknown_keys(
      cfg,
      with_param_keys({"input.alpha", "grid.n", "grid.half_width", "coupling.type",
                       "coupling.beta", "coupling.gamma", "coupling.center",
                       "schmidt.basis_count", "schmidt.source", "schmidt.channel",
                       "schmidt.modes"}),
      "schmidt");
  const PhysicalParams params = params_from(cfg);
  if (!cfg.contains("input"))
    throw config_error("config: schmidt needs an [input] table with alpha");
  GaussianInput input_spec;
  input_spec.alpha = require_num(cfg["input"], "alpha", "input");
  input_spec.omega_e = params.omega_e;
  input_spec.omega_b = params.omega_b;

  const json snode = cfg.contains("schmidt") ? cfg["schmidt"] : json::object();
  const int basis_count = get_int(snode, "basis_count", 60);
  const std::string source = get_str(snode, "source", "output");

  BiphotonField field;
  if (source == "input") {
    const FrequencyGrid grid =
        grid_from(cfg, params, input_spec.alpha, input_spec.alpha, 512);
    field = gaussian_input(input_spec, grid);
  } else if (source == "output") {
    const CouplingSpec coupling = coupling_from(cfg, params);
    if (!coupling.is_gaussian())
      throw config_error("config: schmidt source=output requires the gaussian coupling");
    const double beta = coupling.gaussian().beta;
    const FrequencyGrid grid = grid_from(cfg, params, input_spec.alpha, beta, 1024);
    const ScatterResult result = analytic_gaussian_outputs(input_spec, beta, params, grid);
    field = result.channel(ChannelLabel{Direction::minus, Direction::plus});
    normalize(field);
  } else {
    throw config_error("config: schmidt.source must be 'input' or 'output'");
  }

  const SchmidtSpectrum spectrum = schmidt_of_field(field, basis_count);

  Manifest manifest("schmidt", opt, params);
  json sj;
  sj["K"] = spectrum.K;
  sj["entropy_nats"] = spectrum.entropy_nats;
  sj["entropy_bits"] = spectrum.entropy_bits;
  sj["normalized_entropy"] = spectrum.normalized_entropy;
  sj["reconstruction_error"] = spectrum.reconstruction_error;
  sj["lambdas"] = std::vector<double>(
      spectrum.lambdas.data(),
      spectrum.lambdas.data() + std::min<Eigen::Index>(spectrum.lambdas.size(), 32));
  const fs::path spath = manifest.dir / "schmidt.json";
  {
    std::ofstream out(spath);
    out << sj.dump(2) << '\n';
  }
  manifest.add_file(spath);
  manifest.doc["metrics"] = {{"K", spectrum.K},
                             {"entropy_nats", spectrum.entropy_nats},
                             {"normalized_entropy", spectrum.normalized_entropy}};

  // Sampled Schmidt modes (1-based indices in the config).
  std::vector<int> modes{1, 3, 5};
  if (snode.contains("modes")) {
    modes.clear();
    for (const auto& m : snode["modes"]) modes.push_back(m.get<int>());
  }
  const double scale = frequency_scale(opt);
  const Eigen::ArrayXd axis = field.grid.omega_axis();
  BasisSpec basis;  // reconstruct the omega-side moment-matched basis
  {
    const Eigen::ArrayXd wo =
        trapezoid_weights(field.grid.n_omega, field.grid.domega());
    const Eigen::ArrayXd wp =
        trapezoid_weights(field.grid.n_omega_prime, field.grid.domega_prime());
    const Eigen::ArrayXd marg =
        (field.values.abs2().matrix().transpose() * wp.matrix()).array() * wo;
    const double total = marg.sum();
    basis.center = (axis * marg).sum() / total;
    basis.scale =
        std::sqrt(((axis - basis.center).square() * marg).sum() / total);
    basis.count = basis_count;
  }
  for (int k : modes) {
    if (k < 1 || k > static_cast<int>(spectrum.lambdas.size())) continue;
    const Eigen::VectorXcd samples =
        sample_schmidt_mode(spectrum, basis, k - 1, axis, true);
    const fs::path mpath = manifest.dir / ("mode_" + std::to_string(k) + ".csv");
    std::ofstream out(mpath);
    out << "omega,re,im\n";
    for (Eigen::Index i = 0; i < samples.size(); ++i)
      out << format_double(axis(i) * scale) << ',' << format_double(samples(i).real())
          << ',' << format_double(samples(i).imag()) << '\n';
    out.close();
    manifest.add_file(mpath);
  }
  manifest.write();
  return 0;
}

// -------------------------------------------------------------------- sweeps
std::vector<double> ratios_from(const json& cfg) {
  const json node = cfg.contains("sweep") ? cfg["sweep"] : json::object();
  std::vector<double> ratios;
  if (node.contains("ratios")) {
    for (const auto& r : node["ratios"]) ratios.push_back(r.get<double>());
  } else {
    const double lo = require_num(node, "ratio_min", "sweep");
    const double hi = require_num(node, "ratio_max", "sweep");
    const int n = get_int(node, "n_points", 25);
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
      throw config_error("config: sweep needs 0 < ratio_min < ratio_max and n_points >= 2");
    for (int k = 0; k < n; ++k)
      ratios.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1)));
  }
  if (ratios.empty()) throw config_error("config: empty sweep.ratios");
  return ratios;
}

void write_sweep(Manifest& manifest, const CliOptions& opt, const std::string& stem,
                 const std::vector<SweepRow>& rows) {
  if (opt.format == "json") {
    json arr = json::array();
    for (const SweepRow& row : rows) {
      json r = {{"ratio", row.ratio},
                {"p_success", row.p_success},
                {"schmidt_number", row.schmidt_number},
                {"entropy_nats", row.entropy_nats},
                {"entropy_normalized", row.entropy_normalized},
                {"reconstruction_error", row.reconstruction_error},
                {"ok", row.ok}};
      if (!row.note.empty()) r["note"] = row.note;
      arr.push_back(std::move(r));
    }
    const fs::path path = manifest.dir / (stem + ".json");
    std::ofstream out(path);
    out << arr.dump(2) << '\n';
    out.close();
    manifest.add_file(path);
    return;
  }
  const fs::path path = manifest.dir / (stem + ".csv");
  std::ofstream out(path);
  out << "ratio,p_success,schmidt_number,entropy_nats,entropy_normalized,"
         "reconstruction_error\n";
  for (const SweepRow& row : rows)
    out << format_double(row.ratio) << ',' << format_double(row.p_success) << ','
        << format_double(row.schmidt_number) << ',' << format_double(row.entropy_nats)
        << ',' << format_double(row.entropy_normalized) << ','
        << format_double(row.reconstruction_error) << '\n';
  out.close();
  manifest.add_file(path);
}

int cmd_tradeoff(const CliOptions& opt) {
  const json cfg = load_config(opt.config_path);
  reject_unknown_keys(cfg,
                      with_param_keys({"input.alpha", "grid.n", "schmidt.basis_count",
                                       "sweep.ratios", "sweep.ratio_min",
                                       "sweep.ratio_max", "sweep.n_points"}),
                      "tradeoff");
  const PhysicalParams params = params_from(cfg);
  const double alpha =
      cfg.contains("input") ? require_num(cfg["input"], "alpha", "input") : 1e-6;
  const int grid_n = cfg.contains("grid") ? get_int(cfg["grid"], "n", 1024) : 1024;
  const int basis_count =
      cfg.contains("schmidt") ? get_int(cfg["schmidt"], "basis_count", 60) : 60;
  const std::vector<double> ratios = ratios_from(cfg);

  const std::vector<SweepRow> rows =
      tradeoff_sweep(ratios, alpha, params, basis_count, grid_n);
  Manifest manifest("tradeoff", opt, params);
  manifest.doc["sweep"] = {{"alpha", alpha}, {"n_points", ratios.size()}};
  write_sweep(manifest, opt, "tradeoff", rows);
  manifest.write();
  return 0;
}

int cmd_qudit(const CliOptions& opt) {
  const json cfg = load_config(opt.config_path);
  reject_unknown_keys(
      cfg,
      with_param_keys({"input.alpha", "grid.n", "schmidt.basis_count", "sweep.ratios",
                       "sweep.ratio_min", "sweep.ratio_max", "sweep.n_points",
                       "comb.fsr", "comb.peak_width", "comb.n_range"}),
      "qudit");
  const PhysicalParams params = params_from(cfg);
  const double alpha =
      cfg.contains("input") ? require_num(cfg["input"], "alpha", "input") : 2e-5;
  const int grid_n = cfg.contains("grid") ? get_int(cfg["grid"], "n", 1024) : 1024;
  const int basis_count =
      cfg.contains("schmidt") ? get_int(cfg["schmidt"], "basis_count", 400) : 400;
  CombFilter comb;
  if (cfg.contains("comb")) {
    comb.fsr = require_num(cfg["comb"], "fsr", "comb");
    comb.peak_width = require_num(cfg["comb"], "peak_width", "comb");
    comb.n_range = get_int(cfg["comb"], "n_range", 0);
  } else {
    comb.fsr = 1e-5;
    comb.peak_width = 1e-6;
  }
  comb.validate();
  const std::vector<double> ratios = ratios_from(cfg);

  const std::vector<SweepRow> rows =
      qudit_sweep(ratios, alpha, comb, params, basis_count, grid_n);
  Manifest manifest("qudit", opt, params);
  manifest.doc["sweep"] = {{"alpha", alpha},
                           {"fsr", comb.fsr},
                           {"peak_width", comb.peak_width},
                           {"n_points", ratios.size()}};
  write_sweep(manifest, opt, "qudit", rows);
  manifest.write();
  return 0;
}

// --------------------------------------------------------------------- decay
int cmd_decay(const CliOptions& opt) {
  const json cfg = load_config(opt.config_path);
  reject_unknown_keys(cfg,
                      {"preset", "overrides.n_freq", "overrides.t_max", "overrides.dt",
                       "overrides.g0", "overrides.sample_stride",
                       "overrides.norm_tolerance"},
                      "decay");
  const std::string preset = get_str(cfg, "preset", "");
  if (preset.empty()) throw config_error("config: decay needs preset = \"adiabatic\" or "
                                         "\"resonant\"");
  DecayConfig dcfg = decay_preset(preset);
  if (cfg.contains("overrides")) {
    const json& o = cfg["overrides"];
    dcfg.n_freq = get_int(o, "n_freq", dcfg.n_freq);
    dcfg.t_max = get_num(o, "t_max", dcfg.t_max);
    dcfg.dt = get_num(o, "dt", dcfg.dt);
    dcfg.coupling.g0 = get_num(o, "g0", dcfg.coupling.g0);
    dcfg.sample_stride = get_int(o, "sample_stride", dcfg.sample_stride);
    dcfg.norm_tolerance = get_num(o, "norm_tolerance", dcfg.norm_tolerance);
  }
  dcfg.validate();

  const DecayTrajectory traj = evolve(dcfg);
  Manifest manifest("decay", opt, dcfg.params);
  const double tscale = 1.0 / frequency_scale(opt);  // time in 1/omega units
  if (opt.format == "json") {
    json arr = json::array();
    for (std::size_t k = 0; k < traj.times.size(); ++k)
      arr.push_back({{"t", traj.times[k] * tscale},
                     {"p0", traj.p0[k]},
                     {"px", traj.px[k]},
                     {"p2x", traj.p2x[k]},
                     {"norm", traj.norm[k]}});
    const fs::path path = manifest.dir / "trajectory.json";
    std::ofstream out(path);
    out << arr.dump(2) << '\n';
    out.close();
    manifest.add_file(path);
  } else {
    const fs::path path = manifest.dir / "trajectory.csv";
    std::ofstream out(path);
    out << "t,p0,px,p2x,norm\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k)
      out << format_double(traj.times[k] * tscale) << ',' << format_double(traj.p0[k])
          << ',' << format_double(traj.px[k]) << ',' << format_double(traj.p2x[k]) << ','
          << format_double(traj.norm[k]) << '\n';
    out.close();
    manifest.add_file(path);
  }

  double max_px = 0.0, max_drift = 0.0;
  for (double p : traj.px) max_px = std::max(max_px, p);
  for (double n : traj.norm) max_drift = std::max(max_drift, std::abs(n - 1.0));
  manifest.doc["metrics"] = {{"preset", preset},
                             {"n_freq", dcfg.n_freq},
                             {"g0", dcfg.coupling.g0},
                             {"gamma_fit", traj.gamma_fit},
                             {"fit_residual", traj.fit_residual},
                             {"fit_ok", traj.fit_ok},
                             {"max_px", max_px},
                             {"final_px", traj.px.back()},
                             {"final_p2x", traj.p2x.back()},
                             {"max_norm_drift", max_drift}};
  manifest.write();
  return 0;
}

// ------------------------------------------------------------- optimize-mode
int cmd_optimize_mode(const CliOptions& opt) {
  const json cfg = load_config(opt.config_path);
  reject_unknown_keys(
      cfg,
      with_param_keys({"target.beta", "target.gamma", "target.center",
                       "windows.omega_center", "windows.omega_half_width",
                       "windows.omega_prime_center", "windows.omega_prime_half_width",
                       "windows.n", "kind", "pole_floor"}),
      "optimize-mode");
  const PhysicalParams params = params_from(cfg);
  GaussianCoupling target;
  const json tnode = cfg.contains("target") ? cfg["target"] : json::object();
  target.beta = get_num(tnode, "beta", 1e-4);
  target.gamma = get_num(tnode, "gamma", params.Gamma / 4.0);
  target.center = get_num(tnode, "center", params.omega_e - params.omega_b);
  target.validate();

  const json wnode = cfg.contains("windows") ? cfg["windows"] : json::object();
  const double oc = get_num(wnode, "omega_center", params.omega_e);
  const double ohw = get_num(wnode, "omega_half_width", 6e-6);
  const double pc = get_num(wnode, "omega_prime_center", params.omega_b);
  const double phw = get_num(wnode, "omega_prime_half_width", 6e-6);
  const int n = get_int(wnode, "n", 200);
  const double pole_floor = get_num(cfg, "pole_floor", 0.0);
  const std::string kind = get_str(cfg, "kind", "cubic");
  if (kind != "linear" && kind != "cubic")
    throw config_error("config: kind must be 'linear' or 'cubic'");

  const TargetMatrix tm = build_target(params, target, oc, ohw, pc, phw, n, pole_floor);
  const ModeSolution sol = refine(tm, rank1_init(tm.T));
  const ModeProfile profile = interpolate_profile(
      tm, sol, kind == "linear" ? ModeProfile::Kind::linear : ModeProfile::Kind::cubic);

  Manifest manifest("optimize-mode", opt, params);
  const double scale = frequency_scale(opt);
  auto write_vector = [&](const std::string& stem, const Eigen::ArrayXd& axis,
                          const Eigen::VectorXd& u) {
    const fs::path path = manifest.dir / (stem + ".csv");
    std::ofstream out(path);
    out << "omega,u\n";
    for (Eigen::Index k = 0; k < axis.size(); ++k)
      out << format_double(axis(k) * scale) << ',' << format_double(u(k)) << '\n';
    out.close();
    manifest.add_file(path);
  };
  write_vector("u_omega", tm.omega_axis, sol.u);
  write_vector("u_omega_prime", tm.omega_prime_axis, sol.u_prime);
  {
    ModeProfile scaled = profile;
    if (scale != 1.0) {
      std::vector<double> omegas = profile.omegas();
      for (double& w : omegas) w *= scale;
      scaled = ModeProfile(std::move(omegas), profile.values(), profile.kind());
    }
    const fs::path path = manifest.dir / "profile.csv";
    save_mode_profile_csv(scaled, path);
    manifest.add_file(path);
  }
  manifest.doc["metrics"] = {{"residual", sol.residual},
                             {"iterations", sol.iterations},
                             {"anticorrelated", sol.anticorrelated},
                             {"sigma_ratio", tm.sigma_ratio}};
  manifest.write();
  return 0;
}

// -------------------------------------------------------------------- regime
int cmd_regime(const CliOptions& opt) {
  const json cfg = load_config(opt.config_path);
  reject_unknown_keys(cfg,
                      with_param_keys({"regime.T", "regime.coupling_exc",
                                       "regime.coupling_biexc", "regime.bandwidth_e",
                                       "regime.bandwidth_b", "regime.detuning_e",
                                       "regime.margin"}),
                      "regime");
  const PhysicalParams params = params_from(cfg);
  if (!cfg.contains("regime"))
    throw config_error("config: regime needs a [regime] table");
  const json& node = cfg["regime"];
  const RegimeReport report = regime_check(
      params, require_num(node, "T", "regime"),
      require_num(node, "coupling_exc", "regime"),
      require_num(node, "coupling_biexc", "regime"),
      require_num(node, "bandwidth_e", "regime"),
      require_num(node, "bandwidth_b", "regime"),
      require_num(node, "detuning_e", "regime"), get_num(node, "margin", 10.0));

  Manifest manifest("regime", opt, params);
  const json rj = {{"B1", report.B1},
                   {"B2", report.B2},
                   {"B3", report.B3},
                   {"cond_time", report.cond_time},
                   {"cond_bandwidth", report.cond_bandwidth},
                   {"cond_coupling", report.cond_coupling},
                   {"margin_time", report.margin_time},
                   {"margin_bandwidth", report.margin_bandwidth},
                   {"margin_coupling", report.margin_coupling},
                   {"all_pass", report.all_pass()}};
  const fs::path path = manifest.dir / "regime.json";
  {
    std::ofstream out(path);
    out << rj.dump(2) << '\n';
  }
  manifest.add_file(path);
  manifest.doc["metrics"] = rj;
  manifest.write();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frequency-entangling-gate analysis toolkit"};
  app.require_subcommand(1);

  CliOptions opt;
  std::map<std::string, int (*)(const CliOptions&)> handlers{
      {"scatter", cmd_scatter},       {"schmidt", cmd_schmidt},
      {"tradeoff", cmd_tradeoff},     {"qudit", cmd_qudit},
      {"decay", cmd_decay},           {"optimize-mode", cmd_optimize_mode},
      {"regime", cmd_regime}};
  const std::map<std::string, std::string> descriptions{
      {"scatter", "scatter a two-photon input and write the channel amplitudes"},
      {"schmidt", "Schmidt decomposition and entanglement metrics"},
      {"tradeoff", "success probability vs entanglement over the width ratio"},
      {"qudit", "comb-filtered trade-off over the ratio beta/peak_width"},
      {"decay", "Wigner-Weisskopf biexciton decay simulation"},
      {"optimize-mode", "design the propagation-mode magnitude for a target coupling"},
      {"regime", "adiabatic-regime time-scale diagnostics"}};

  for (const auto& [name, fn] : handlers) {
    CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("--config", opt.config_path, "TOML or JSON run configuration")
        ->required();
    sub->add_option("--out", opt.out_dir, "output directory (default: out)");
    sub->add_option("--format", opt.format, "tabular output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--omega2x-hz", opt.omega2x_hz,
                    "emit frequencies in rad/s for this biexciton frequency in Hz");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // malformed invocation is a configuration error
  }

  try {
    for (const auto& [name, fn] : handlers)
      if (app.get_subcommand(name)->parsed()) return fn(opt);
    throw config_error("no command selected");
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const convergence_error& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return 4;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical domain error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
