#pragma once

#include <string>
#include <vector>

#include "hdqkd/budget.hpp"
#include "hdqkd/config.hpp"

namespace hdqkd {

// Raman cross section Gamma(lambda_d, lambda_q) per km per nm, tabulated
// against the signed shift lambda_q - lambda_d. Linear interpolation between
// rows, zero outside the tabulated range.
class RamanCrossSectionTable {
 public:
  struct Row {
    double delta_lambda_nm;
    double gamma_per_km_nm;
  };

  explicit RamanCrossSectionTable(std::vector<Row> rows);
  static RamanCrossSectionTable load_csv(const std::string& path);
  // Flat placeholder profile: gamma constant within +-40 nm of the pump.
  // Not a measured cross section; calibrated runs should load a table.
  static RamanCrossSectionTable flat_placeholder(double gamma_per_km_nm);

  double gamma(double lambda_d_nm, double lambda_q_nm) const;

  const std::vector<Row>& rows() const { return rows_; }

 private:
  std::vector<Row> rows_;
};

// How classical launch powers are chosen per channel.
struct LaunchPolicy {
  LaunchMode mode = LaunchMode::kBerDriven;
  double sensitivity_dbm = -38.5;  // target receive power in ber-driven mode
  double fixed_dbm = 0.0;

  static LaunchPolicy from_config(const SystemConfig& cfg) {
    return {cfg.launch_mode, cfg.receiver_sensitivity_dbm, cfg.launch_fixed_dbm};
  }
};

// eta_fib = 10^-[alpha (L1 + L0) + 2 Lambda] / 10.
double fiber_transmittance(double l0_km, double l1_km, const SystemConfig& cfg);

// Launch power in watts for a channel seeing `path_loss_db` of loss.
double launch_power(const LaunchPolicy& policy, double path_loss_db);

// Classical path loss seen by user u's data channel: alpha (L_u + L_0) plus
// both AWG traversals.
double classical_path_loss_db(double lu_km, double l0_km, const SystemConfig& cfg);

// Scattered power (W) observed at the fiber output for a classical channel
// of intensity `intensity_w` over `length_km` of fiber.
double raman_forward(double intensity_w, double length_km, double lambda_d_nm, double lambda_q_nm,
                     const RamanCrossSectionTable& table, const SystemConfig& cfg);
double raman_backward(double intensity_w, double length_km, double lambda_d_nm, double lambda_q_nm,
                      const RamanCrossSectionTable& table, const SystemConfig& cfg);

// Photons per detection gate for scattered power I_R at the quantum
// wavelength: eta_d * I_R * lambda_q * T_d / (h c).
double raman_photons(double scattered_w, double lambda_q_nm, const SystemConfig& cfg);

struct RamanTotals {
  double forward_w = 0.0;
  double backward_w = 0.0;
};

// Multi-user aggregation onto user 1's quantum channel. User 1's classical
// signal scatters over the full L0 + L1 path; every other user's signal is
// forward-pre-attenuated by exp(-alpha_r L_u) and scatters over L0 only.
// Both sums pick up the 10^(-2 Lambda / 10) AWG factor.
RamanTotals total_raman(const SystemConfig& cfg, const WavelengthPlan& plan,
                        const LaunchPolicy& policy, const RamanCrossSectionTable& table);

// n_N = eta_d lambda_q1 T_d / (hc) (I_T^f + I_T^b) + eta_d n_B eta_fib
// eta_coup + n_dc, decomposed per source.
NoiseBudget total_noise(const SystemConfig& cfg, double ambient_photons_per_gate,
                        const ChannelBudget& budget, const RamanTotals& raman);

}  // namespace hdqkd
