#include "hdqkd/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace hdqkd {

WavelengthPlan WavelengthPlan::make_grid(double lambda_q1_nm, double lambda_d1_nm,
                                         double spacing_nm, int num_users) {
  WavelengthPlan plan;
  plan.spacing_nm = spacing_nm;
  plan.quantum_nm.reserve(static_cast<size_t>(std::max(num_users, 0)));
  plan.classical_nm.reserve(static_cast<size_t>(std::max(num_users, 0)));
  for (int u = 0; u < num_users; ++u) {
    plan.quantum_nm.push_back(lambda_q1_nm + spacing_nm * u);
    plan.classical_nm.push_back(lambda_d1_nm + spacing_nm * u);
  }
  return plan;
}

namespace {

void require(std::vector<Violation>& out, bool ok, const char* field, const std::string& msg) {
  if (!ok) out.push_back({field, msg});
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::vector<Violation> check_invariants(const SystemConfig& c) {
  std::vector<Violation> v;

  require(v, c.room_x > 0 && c.room_y > 0 && c.room_z > 0, "room", "room dimensions must be positive");
  require(v, c.theta_half_bulb_deg > 0 && c.theta_half_bulb_deg < 90, "theta_half_bulb_deg",
          "bulb semi-angle must be in (0, 90) degrees");
  require(v, c.phi_half_source_deg > 0 && c.phi_half_source_deg < 90, "phi_half_source_deg",
          "source semi-angle must be in (0, 90) degrees");
  require(v, c.fov_deg > 0 && c.fov_deg < 90, "fov_deg", "field of view must be in (0, 90) degrees");
  require(v, c.concentrator_index >= 1.0, "concentrator_index", "refractive index must be >= 1");
  require(v, c.telescope_area_m2 > 0, "telescope_area_m2", "telescope area must be positive");
  require(v, c.filter_transmission >= 0 && c.filter_transmission <= 1, "filter_transmission",
          "filter transmission must be in [0, 1]");
  require(v, c.wall_reflectivity >= 0 && c.wall_reflectivity <= 1, "wall_reflectivity",
          "wall reflectivity must be in [0, 1]");

  const auto& m = c.intensities;
  require(v, m[2] >= 0, "intensities", "mu3 must be >= 0");
  require(v, m[1] > m[2], "intensities",
          "decoy ordering violated: mu2 (" + fmt(m[1]) + ") must exceed mu3 (" + fmt(m[2]) + ")");
  require(v, m[0] > m[1] + m[2], "intensities",
          "decoy ordering violated: mu1 (" + fmt(m[0]) + ") must exceed mu2 + mu3 (" +
              fmt(m[1] + m[2]) + ")");
  const double psum = c.intensity_probs[0] + c.intensity_probs[1] + c.intensity_probs[2];
  require(v, std::abs(psum - 1.0) <= 1e-12, "intensity_probs",
          "probabilities sum != 1 (got " + fmt(psum) + ")");
  for (double p : c.intensity_probs) {
    require(v, p > 0 && p < 1, "intensity_probs", "each intensity probability must be in (0, 1)");
  }
  require(v, c.p_time_basis > 0 && c.p_time_basis < 1, "p_time_basis", "p_T must be in (0, 1)");

  require(v, c.dimension >= 2 && (c.dimension & (c.dimension - 1)) == 0, "dimension",
          "dimension must be a power of 2 and >= 2");
  require(v, c.block_size >= 1, "block_size", "block size must be >= 1 pulse");
  require(v, c.clock_rate_hz > 0, "clock_rate_hz", "clock rate must be positive");
  require(v, c.interferometer_transmittance > 0 && c.interferometer_transmittance <= 1,
          "interferometer_transmittance", "eta_i must be in (0, 1]");

  require(v, c.gate_duration_s > 0, "gate_duration_s", "gate duration must be positive");
  require(v, c.dark_count_rate_per_ns >= 0, "dark_count_rate_per_ns", "dark count rate must be >= 0");
  require(v, c.detector_efficiency > 0 && c.detector_efficiency <= 1, "detector_efficiency",
          "eta_d must be in (0, 1]");
  require(v, c.misalignment >= 0 && c.misalignment <= 1, "misalignment", "e_d must be in [0, 1]");

  require(v, c.coupling_loss_db >= 0, "coupling_loss_db", "coupling loss must be >= 0 dB");
  require(v, c.alpha_db_per_km >= 0, "alpha_db_per_km", "fiber attenuation must be >= 0");
  require(v, c.alpha_raman_per_km > 0, "alpha_raman_per_km", "Raman attenuation must be > 0");
  require(v, c.awg_loss_db >= 0, "awg_loss_db", "AWG loss must be >= 0 dB");
  require(v, c.l0_km >= 0, "l0_km", "feeder length must be >= 0");
  require(v, c.l1_km >= 0, "l1_km", "drop length must be >= 0");
  require(v, c.num_users >= 1, "num_users", "at least one user required");
  require(v, c.receiver_bandwidth_nm > 0, "receiver_bandwidth_nm", "receiver bandwidth must be > 0");
  require(v, c.raman_gamma_per_km_nm >= 0, "raman_gamma_per_km_nm", "gamma must be >= 0");
  require(v, c.psd_w_per_nm >= 0, "psd_w_per_nm", "PSD must be >= 0");

  require(v, c.f_ec >= 1.0, "f_ec", "error-correction inefficiency must be >= 1");
  require(v, c.eps_sec > 0 && c.eps_sec < 1, "eps_sec", "eps_sec must be in (0, 1)");
  require(v, c.eps_cor > 0 && c.eps_cor < 1, "eps_cor", "eps_cor must be in (0, 1)");

  const auto& plan = c.wavelength_plan;
  require(v, plan.quantum_nm.size() >= static_cast<size_t>(c.num_users) &&
                 plan.classical_nm.size() >= static_cast<size_t>(c.num_users),
          "wavelength_plan", "plan must cover all " + std::to_string(c.num_users) + " users");
  bool positive = true;
  for (double w : plan.quantum_nm) positive = positive && w > 0;
  for (double w : plan.classical_nm) positive = positive && w > 0;
  require(v, positive, "wavelength_plan", "all wavelengths must be positive");
  if (plan.quantum_nm.size() >= static_cast<size_t>(c.num_users) &&
      plan.classical_nm.size() >= static_cast<size_t>(c.num_users)) {
    std::set<double> q(plan.quantum_nm.begin(), plan.quantum_nm.begin() + c.num_users);
    std::set<double> d(plan.classical_nm.begin(), plan.classical_nm.begin() + c.num_users);
    require(v, q.size() == static_cast<size_t>(c.num_users), "wavelength_plan",
            "quantum wavelengths must be unique per user");
    require(v, d.size() == static_cast<size_t>(c.num_users), "wavelength_plan",
            "classical wavelengths must be unique per user");
    std::vector<double> both;
    std::set_intersection(q.begin(), q.end(), d.begin(), d.end(), std::back_inserter(both));
    require(v, both.empty(), "wavelength_plan", "quantum and classical sets must be disjoint");
  }

  return v;
}

ValidationResult ValidationResult::of(const SystemConfig& cfg) {
  ValidationResult r;
  r.violations = check_invariants(cfg);
  if (r.violations.empty()) r.config = ValidatedConfig(cfg);
  return r;
}

}  // namespace hdqkd
