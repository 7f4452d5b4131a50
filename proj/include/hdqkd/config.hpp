#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hdqkd {

// Per-user DWDM channel assignment. Index 0 is user 1, whose quantum channel
// is the one under study; only the classical wavelengths of the other users
// enter the Raman sums.
struct WavelengthPlan {
  std::vector<double> quantum_nm;
  std::vector<double> classical_nm;
  double spacing_nm = 0.8;

  static WavelengthPlan make_grid(double lambda_q1_nm, double lambda_d1_nm, double spacing_nm,
                                  int num_users);
};

enum class LaunchMode { kBerDriven, kFixed };
enum class FrameRatePolicy { kClockPerBin, kPerStateClock };
enum class AmbientModelKind { kGeometric, kTable };
enum class DeviationLogBase { kNatural, kBase2 };

// Full parameter set. Fields keep the units their names state; photon-energy
// conversions switch to SI internally.
struct SystemConfig {
  // Room geometry (meters). Transmitter sits at a floor corner, the telescope
  // at the ceiling center, fully aligned.
  double room_x = 4.0;
  double room_y = 4.0;
  double room_z = 3.0;

  // Wireless optics.
  double theta_half_bulb_deg = 70.0;    // bulb semi-angle at half power
  double phi_half_source_deg = 1.0;     // source semi-angle at half power
  double fov_deg = 6.0;                 // telescope field of view
  double concentrator_index = 1.5;      // n_i
  double telescope_area_m2 = 1e-4;      // effective area A (1 cm^2)
  double filter_transmission = 1.0;     // T_s
  double wall_reflectivity = 0.8;       // rho, used by the geometric ambient model

  // Source and protocol.
  std::array<double, 3> intensities{0.54, 0.1, 0.0002};       // mu1 > mu2 > mu3
  std::array<double, 3> intensity_probs{0.5, 0.06, 0.44};     // p_mu, sum to 1
  double p_time_basis = 0.9;                                  // p_T; p_F = 1 - p_T
  int dimension = 4;                                          // d, power of 2
  double block_size = 1e10;                                   // N pulses
  double clock_rate_hz = 2.5e9;
  double interferometer_transmittance = 1.0;                  // eta_i
  FrameRatePolicy frame_rate_policy = FrameRatePolicy::kPerStateClock;

  // Detection.
  double gate_duration_s = 100e-12;          // T_d
  double dark_count_rate_per_ns = 1e-7;      // n_dc rate
  double detector_efficiency = 0.3;          // eta_d
  double misalignment = 0.033;               // e_d

  // Fiber plant.
  double coupling_loss_db = 10.0;        // eta_coup as dB
  double alpha_db_per_km = 0.2;          // alpha
  double alpha_raman_per_km = 0.046;     // alpha_r (linear, 1/km)
  double awg_loss_db = 2.0;              // Lambda per AWG
  double l0_km = 5.0;                    // feeder span
  double l1_km = 0.5;                    // drop span, same for all users
  int num_users = 32;                    // N_s
  double receiver_bandwidth_nm = 0.1;    // delta lambda of the QKD receiver

  // Raman cross section placeholder magnitude for the built-in flat profile.
  // Deliberately small so the synthetic default stays below calibrated noise
  // tables; measured C-band values are orders of magnitude larger, so load a
  // real table for quantitative Raman studies.
  double raman_gamma_per_km_nm = 5e-12;

  // Classical launch policy.
  LaunchMode launch_mode = LaunchMode::kBerDriven;
  double receiver_sensitivity_dbm = -38.5;
  double launch_fixed_dbm = 0.0;

  // Ambient light.
  AmbientModelKind ambient_model = AmbientModelKind::kGeometric;
  double psd_w_per_nm = 1e-5;

  // Error correction and security.
  double f_ec = 1.16;
  double eps_sec = 1e-10;
  double eps_cor = 1e-10;
  DeviationLogBase deviation_log_base = DeviationLogBase::kNatural;

  WavelengthPlan wavelength_plan = WavelengthPlan::make_grid(1555.62, 1585.2, 0.8, 32);

  double p_phase_basis() const { return 1.0 - p_time_basis; }
  double dark_counts_per_gate() const { return dark_count_rate_per_ns * gate_duration_s * 1e9; }
};

struct Violation {
  std::string field;
  std::string message;
};

// All config invariants; empty result means valid.
std::vector<Violation> check_invariants(const SystemConfig& cfg);

// Immutable, checked view of a SystemConfig. Copies share the underlying
// config, so they are cheap to hand to sweep workers.
class ValidatedConfig {
 public:
  const SystemConfig& get() const { return *cfg_; }
  const SystemConfig* operator->() const { return cfg_.get(); }

 private:
  friend struct ValidationResult;
  explicit ValidatedConfig(SystemConfig cfg)
      : cfg_(std::make_shared<const SystemConfig>(std::move(cfg))) {}
  std::shared_ptr<const SystemConfig> cfg_;
};

struct ValidationResult {
  std::optional<ValidatedConfig> config;
  std::vector<Violation> violations;

  bool ok() const { return config.has_value(); }
  static ValidationResult of(const SystemConfig& cfg);
};

inline ValidationResult validate(const SystemConfig& cfg) { return ValidationResult::of(cfg); }

}  // namespace hdqkd
