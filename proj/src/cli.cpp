#include "hdqkd/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>

#include "hdqkd/config_io.hpp"
#include "hdqkd/csv.hpp"
#include "hdqkd/simulator.hpp"
#include "hdqkd/units.hpp"

namespace hdqkd::cli {

namespace {

struct CommonOpts {
  std::string config_path;
  std::optional<int> dimension;
  std::optional<double> block_size;
  std::optional<double> l0_km;
  std::optional<double> psd;
  std::optional<double> eta_i;
  std::optional<std::uint64_t> sample_seed;
  std::string ambient_table;
  std::string gamma_table;
  std::string frame_policy;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "configuration file (key = value)");
  cmd->add_option("--d", o.dimension, "encoding dimension (power of 2)");
  cmd->add_option("--N", o.block_size, "block size in pulses");
  cmd->add_option("--l0-km", o.l0_km, "feeder fiber length, km");
  cmd->add_option("--psd", o.psd, "bulb power spectral density, W/nm");
  cmd->add_option("--eta-i", o.eta_i, "interferometer transmittance");
  cmd->add_option("--ambient-table", o.ambient_table,
                  "CSV mapping PSD to total background noise (overrides the geometric model)");
  cmd->add_option("--gamma-table", o.gamma_table, "Raman cross-section CSV");
  cmd->add_option("--frame-policy", o.frame_policy, "bps frame policy: bin or state")
      ->check(CLI::IsMember({"bin", "state"}));
  cmd->add_option("--sample-seed", o.sample_seed,
                  "Poisson-sample the counts with this seed instead of using expectations");
  cmd->add_option("--out", o.out_path, "write CSV here instead of stdout");
}

SystemConfig resolve_config(const CommonOpts& o) {
  SystemConfig cfg = o.config_path.empty() ? SystemConfig{} : load_config_file(o.config_path);
  if (o.dimension) cfg.dimension = *o.dimension;
  if (o.block_size) cfg.block_size = *o.block_size;
  if (o.l0_km) cfg.l0_km = *o.l0_km;
  if (o.psd) cfg.psd_w_per_nm = *o.psd;
  if (o.eta_i) cfg.interferometer_transmittance = *o.eta_i;
  if (!o.ambient_table.empty()) cfg.ambient_model = AmbientModelKind::kTable;
  if (!o.frame_policy.empty()) {
    cfg.frame_rate_policy =
        o.frame_policy == "bin" ? FrameRatePolicy::kClockPerBin : FrameRatePolicy::kPerStateClock;
  }
  return cfg;
}

ValidatedConfig validate_or_throw(const SystemConfig& cfg) {
  ValidationResult vr = validate(cfg);
  if (!vr.ok()) {
    std::string msg = "invalid configuration:";
    for (const auto& v : vr.violations) msg += "\n  " + v.field + ": " + v.message;
    throw std::runtime_error(msg);
  }
  return *vr.config;
}

Simulator make_simulator(const CommonOpts& o, const SystemConfig& cfg) {
  std::shared_ptr<const AmbientModel> ambient;
  if (!o.ambient_table.empty()) {
    ambient = std::make_shared<AmbientNoiseTable>(AmbientNoiseTable::load_csv(o.ambient_table));
  } else if (cfg.ambient_model == AmbientModelKind::kTable) {
    throw std::runtime_error("ambient_model = table requires --ambient-table PATH");
  } else {
    ambient = make_default_ambient_model();
  }
  RamanCrossSectionTable gamma = o.gamma_table.empty()
                                     ? RamanCrossSectionTable::flat_placeholder(cfg.raman_gamma_per_km_nm)
                                     : RamanCrossSectionTable::load_csv(o.gamma_table);
  return Simulator(std::move(ambient), std::move(gamma));
}

void log_resolved_config(const SystemConfig& cfg, std::ostream& err) {
  err << "# resolved configuration\n" << config_to_text(cfg) << "\n";
}

const char* reason_name(ZeroKeyReason r) {
  switch (r) {
    case ZeroKeyReason::kInsufficientStatistics: return "insufficient_statistics";
    case ZeroKeyReason::kNonpositiveObjective: return "nonpositive_objective";
    default: return "none";
  }
}

void print_report(const EvalOutcome& r, const SystemConfig& cfg, std::ostream& out) {
  auto db_or_inf = [](double lin) {
    return lin > 0.0 ? linear_to_db(lin) : std::numeric_limits<double>::infinity();
  };
  out << "# channel budget (loss per stage)\n";
  out << "h_dc = " << format_sig9(r.channel.h_dc) << "\n";
  out << "h_dc_db = " << format_sig9(db_or_inf(r.channel.h_dc)) << "\n";
  out << "eta_coup = " << format_sig9(r.channel.eta_coup) << "\n";
  out << "eta_coup_db = " << format_sig9(db_or_inf(r.channel.eta_coup)) << "\n";
  out << "eta_fib = " << format_sig9(r.channel.eta_fib) << "\n";
  out << "eta_fib_db = " << format_sig9(db_or_inf(r.channel.eta_fib)) << "\n";
  out << "fiber_attenuation_db = " << format_sig9(cfg.alpha_db_per_km * (cfg.l0_km + cfg.l1_km))
      << "\n";
  out << "awg_db = " << format_sig9(2.0 * cfg.awg_loss_db) << "\n";
  out << "eta_det = " << format_sig9(r.channel.eta_det) << "\n";
  out << "eta_det_db = " << format_sig9(db_or_inf(r.channel.eta_det)) << "\n";
  out << "eta_total = " << format_sig9(r.channel.eta_total) << "\n";
  out << "total_loss_db = " << format_sig9(db_or_inf(r.channel.eta_total)) << "\n";
  out << "# noise budget (photons per gate)\n";
  out << "ambient_model_output = " << format_sig9(r.ambient_raw) << "\n";
  out << "raman_forward = " << format_sig9(r.noise.raman_forward) << "\n";
  out << "raman_backward = " << format_sig9(r.noise.raman_backward) << "\n";
  out << "ambient = " << format_sig9(r.noise.ambient) << "\n";
  out << "dark = " << format_sig9(r.noise.dark) << "\n";
  out << "n_total = " << format_sig9(r.noise.n_total) << "\n";
  out << "# expected counts per intensity (time basis n/m, phase basis n/m)\n";
  for (size_t k = 0; k < 3; ++k) {
    out << "counts_mu" << (k + 1) << " = " << format_sig9(r.stats.n_time[k]) << ' '
        << format_sig9(r.stats.m_time[k]) << ' ' << format_sig9(r.stats.n_phase[k]) << ' '
        << format_sig9(r.stats.m_phase[k]) << "\n";
  }
  out << "# key result\n";
  out << "l_bits = " << format_sig9(r.key.key_length_bits) << "\n";
  out << "beta_opt = " << format_sig9(r.key.beta_opt) << "\n";
  out << "s_t0 = " << format_sig9(r.key.s_t0) << "\n";
  out << "s_t1 = " << format_sig9(r.key.s_t1) << "\n";
  out << "s_f1 = " << format_sig9(r.key.s_f1) << "\n";
  out << "nu_f1 = " << format_sig9(r.key.nu_f1) << "\n";
  out << "lambda_u = " << format_sig9(r.key.lambda_u) << "\n";
  out << "e_t = " << format_sig9(r.key.e_t) << "\n";
  out << "leak_ec_bits = " << format_sig9(r.key.leak_ec_bits) << "\n";
  out << "rate_bps = " << format_sig9(r.key.rate_bps) << "\n";
  out << "reason = " << reason_name(r.key.reason) << "\n";
}

int run_sweep(SweepAxis axis, const CommonOpts& o, double from, double to, int points,
              std::ostream& out, std::ostream& err) {
  const SystemConfig cfg = resolve_config(o);
  const ValidatedConfig vc = validate_or_throw(cfg);
  log_resolved_config(cfg, err);
  const Simulator sim = make_simulator(o, cfg);
  const std::vector<double> grid =
      axis == SweepAxis::kPsd ? log_grid(from, to, points) : linear_grid(from, to, points);
  ScenarioPoint base = ScenarioPoint::from(vc);
  base.sample_seed = o.sample_seed;
  const SweepTable table = sim.sweep(axis, grid, base);
  if (o.out_path.empty()) {
    out << sweep_to_csv(table);
  } else {
    emit_csv(table, o.out_path);
    err << "# wrote " << o.out_path << "\n";
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-key rate simulator for d-dimensional time-phase QKD over a shared "
               "access network"};
  app.name("hdqkd");
  app.require_subcommand(1);

  CommonOpts eval_opts;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate one scenario and print the budgets");
  add_common(eval_cmd, eval_opts);

  CommonOpts psd_opts;
  double psd_from = 1e-7, psd_to = 1e-4;
  int psd_points = 40;
  CLI::App* psd_cmd = app.add_subcommand("sweep-psd", "key rate vs bulb PSD (log grid)");
  add_common(psd_cmd, psd_opts);
  psd_cmd->add_option("--from", psd_from, "first PSD, W/nm");
  psd_cmd->add_option("--to", psd_to, "last PSD, W/nm");
  psd_cmd->add_option("--points", psd_points, "grid size")->check(CLI::PositiveNumber);

  CommonOpts len_opts;
  double len_from = 0.5, len_to = 60.0;
  int len_points = 120;
  CLI::App* len_cmd =
      app.add_subcommand("sweep-length", "key rate vs total fiber length L0+L1 (linear grid)");
  add_common(len_cmd, len_opts);
  len_cmd->add_option("--from", len_from, "first total length, km");
  len_cmd->add_option("--to", len_to, "last total length, km");
  len_cmd->add_option("--points", len_points, "grid size")->check(CLI::PositiveNumber);

  CLI::App* defaults_cmd =
      app.add_subcommand("print-defaults", "emit the nominal configuration file");

  CommonOpts validate_opts;
  CLI::App* validate_cmd = app.add_subcommand("validate", "check a configuration file");
  add_common(validate_cmd, validate_opts);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("hdqkd");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (defaults_cmd->parsed()) {
      out << config_to_text(SystemConfig{});
      return 0;
    }
    if (validate_cmd->parsed()) {
      const SystemConfig cfg = resolve_config(validate_opts);
      ValidationResult vr = validate(cfg);
      if (vr.ok()) {
        out << "ok\n";
        return 0;
      }
      for (const auto& v : vr.violations) err << v.field << ": " << v.message << "\n";
      return 1;
    }
    if (eval_cmd->parsed()) {
      const SystemConfig cfg = resolve_config(eval_opts);
      const ValidatedConfig vc = validate_or_throw(cfg);
      log_resolved_config(cfg, err);
      const Simulator sim = make_simulator(eval_opts, cfg);
      ScenarioPoint point = ScenarioPoint::from(vc);
      point.sample_seed = eval_opts.sample_seed;
      const EvalOutcome r = sim.evaluate(point);
      if (!r.ok) {
        err << "evaluation failed: " << r.message << "\n";
        return 1;
      }
      if (r.h_dc_clamped) err << "# warning: wireless gain clamped to 1\n";
      print_report(r, cfg, out);
      return 0;
    }
    if (psd_cmd->parsed()) {
      return run_sweep(SweepAxis::kPsd, psd_opts, psd_from, psd_to, psd_points, out, err);
    }
    if (len_cmd->parsed()) {
      return run_sweep(SweepAxis::kFiberLength, len_opts, len_from, len_to, len_points, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no subcommand\n";
  return 1;
}

}  // namespace hdqkd::cli
