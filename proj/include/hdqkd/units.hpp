#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hdqkd {

// Loss convention: x dB of loss maps to a transmittance 10^(-x/10).
inline double db_to_linear(double loss_db) { return std::pow(10.0, -loss_db / 10.0); }

inline double linear_to_db(double transmittance) {
  if (!(transmittance > 0.0)) {
    throw std::invalid_argument("linear_to_db: transmittance must be > 0");
  }
  return -10.0 * std::log10(transmittance);
}

inline double dbm_to_watts(double power_dbm) { return 1e-3 * std::pow(10.0, power_dbm / 10.0); }

inline double watts_to_dbm(double power_w) {
  if (!(power_w > 0.0)) {
    throw std::invalid_argument("watts_to_dbm: power must be > 0");
  }
  return 10.0 * std::log10(power_w / 1e-3);
}

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

inline double nm_to_m(double nm) { return nm * 1e-9; }

}  // namespace hdqkd
