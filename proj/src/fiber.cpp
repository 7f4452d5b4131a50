#include "hdqkd/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hdqkd/constants.hpp"
#include "hdqkd/units.hpp"

namespace hdqkd {

RamanCrossSectionTable::RamanCrossSectionTable(std::vector<Row> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw std::invalid_argument("gamma table: no rows");
  for (size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].gamma_per_km_nm < 0.0) throw std::invalid_argument("gamma table: gamma must be >= 0");
    if (i > 0 && rows_[i].delta_lambda_nm <= rows_[i - 1].delta_lambda_nm) {
      throw std::invalid_argument("gamma table: shifts must be strictly increasing");
    }
  }
}

RamanCrossSectionTable RamanCrossSectionTable::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("gamma table: cannot open " + path);
  std::vector<Row> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string a, b;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b)) {
      throw std::runtime_error("gamma table: malformed line: " + line);
    }
    if (a.find_first_not_of(" \t") == std::string::npos) continue;
    if (a.find("delta") != std::string::npos) continue;  // header row
    rows.push_back({std::stod(a), std::stod(b)});
  }
  return RamanCrossSectionTable(std::move(rows));
}

RamanCrossSectionTable RamanCrossSectionTable::flat_placeholder(double gamma_per_km_nm) {
  return RamanCrossSectionTable({{-40.0, gamma_per_km_nm}, {40.0, gamma_per_km_nm}});
}

double RamanCrossSectionTable::gamma(double lambda_d_nm, double lambda_q_nm) const {
  const double shift = lambda_q_nm - lambda_d_nm;
  if (shift < rows_.front().delta_lambda_nm || shift > rows_.back().delta_lambda_nm) return 0.0;
  auto hi = std::lower_bound(rows_.begin(), rows_.end(), shift,
                             [](const Row& r, double x) { return r.delta_lambda_nm < x; });
  if (hi == rows_.begin()) return hi->gamma_per_km_nm;
  auto lo = hi - 1;
  if (hi == rows_.end()) return lo->gamma_per_km_nm;
  const double t = (shift - lo->delta_lambda_nm) / (hi->delta_lambda_nm - lo->delta_lambda_nm);
  return lo->gamma_per_km_nm + t * (hi->gamma_per_km_nm - lo->gamma_per_km_nm);
}

double fiber_transmittance(double l0_km, double l1_km, const SystemConfig& cfg) {
  if (l0_km < 0.0 || l1_km < 0.0) throw std::invalid_argument("fiber_transmittance: negative span");
  return db_to_linear(cfg.alpha_db_per_km * (l1_km + l0_km) + 2.0 * cfg.awg_loss_db);
}

double launch_power(const LaunchPolicy& policy, double path_loss_db) {
  if (path_loss_db < 0.0) throw std::invalid_argument("launch_power: negative path loss");
  if (policy.mode == LaunchMode::kFixed) return dbm_to_watts(policy.fixed_dbm);
  return dbm_to_watts(policy.sensitivity_dbm + path_loss_db);
}

double classical_path_loss_db(double lu_km, double l0_km, const SystemConfig& cfg) {
  return cfg.alpha_db_per_km * (lu_km + l0_km) + 2.0 * cfg.awg_loss_db;
}

double raman_forward(double intensity_w, double length_km, double lambda_d_nm, double lambda_q_nm,
                     const RamanCrossSectionTable& table, const SystemConfig& cfg) {
  if (intensity_w < 0.0 || length_km < 0.0) throw std::invalid_argument("raman_forward: negative input");
  return intensity_w * std::exp(-cfg.alpha_raman_per_km * length_km) * length_km *
         table.gamma(lambda_d_nm, lambda_q_nm) * cfg.receiver_bandwidth_nm;
}

double raman_backward(double intensity_w, double length_km, double lambda_d_nm, double lambda_q_nm,
                      const RamanCrossSectionTable& table, const SystemConfig& cfg) {
  if (intensity_w < 0.0 || length_km < 0.0) throw std::invalid_argument("raman_backward: negative input");
  return intensity_w * (1.0 - std::exp(-2.0 * cfg.alpha_raman_per_km * length_km)) /
         (2.0 * cfg.alpha_raman_per_km) * table.gamma(lambda_d_nm, lambda_q_nm) *
         cfg.receiver_bandwidth_nm;
}

double raman_photons(double scattered_w, double lambda_q_nm, const SystemConfig& cfg) {
  if (scattered_w < 0.0) throw std::invalid_argument("raman_photons: negative power");
  return cfg.detector_efficiency * scattered_w * nm_to_m(lambda_q_nm) * cfg.gate_duration_s /
         kPlanckTimesC;
}

RamanTotals total_raman(const SystemConfig& cfg, const WavelengthPlan& plan,
                        const LaunchPolicy& policy, const RamanCrossSectionTable& table) {
  const double lambda_q1 = plan.quantum_nm.at(0);
  const double awg_pair = db_to_linear(2.0 * cfg.awg_loss_db);

  const double own_loss = classical_path_loss_db(cfg.l1_km, cfg.l0_km, cfg);
  const double own_power = launch_power(policy, own_loss);
  double fwd = raman_forward(own_power, cfg.l0_km + cfg.l1_km, plan.classical_nm.at(0), lambda_q1,
                             table, cfg);
  double bwd = raman_backward(own_power, cfg.l0_km + cfg.l1_km, plan.classical_nm.at(0), lambda_q1,
                              table, cfg);

  for (int u = 1; u < cfg.num_users; ++u) {
    const double lu = cfg.l1_km;  // every user shares the same drop span
    const double lambda_du = plan.classical_nm.at(static_cast<size_t>(u));
    const double pu = launch_power(policy, classical_path_loss_db(lu, cfg.l0_km, cfg));
    // Forward sum pre-attenuates the interferer over its drop span; the
    // backward sum does not.
    fwd += raman_forward(pu * std::exp(-cfg.alpha_raman_per_km * lu), cfg.l0_km, lambda_du,
                         lambda_q1, table, cfg);
    bwd += raman_backward(pu, cfg.l0_km, lambda_du, lambda_q1, table, cfg);
  }

  return {fwd * awg_pair, bwd * awg_pair};
}

NoiseBudget total_noise(const SystemConfig& cfg, double ambient_photons_per_gate,
                        const ChannelBudget& budget, const RamanTotals& raman) {
  if (ambient_photons_per_gate < 0.0) throw std::invalid_argument("total_noise: negative ambient");
  const double lambda_q1 = cfg.wavelength_plan.quantum_nm.at(0);
  const double fwd = raman_photons(raman.forward_w, lambda_q1, cfg);
  const double bwd = raman_photons(raman.backward_w, lambda_q1, cfg);
  const double ambient =
      cfg.detector_efficiency * ambient_photons_per_gate * budget.eta_fib * budget.eta_coup;
  return NoiseBudget::make(fwd, bwd, ambient, cfg.dark_counts_per_gate());
}

}  // namespace hdqkd
