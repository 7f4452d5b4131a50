#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "hdqkd/config.hpp"

namespace hdqkd {

// Relative placement of the QKD source and the collecting telescope.
struct Geometry {
  double distance_m = 0.0;  // d_i
  double phi_rad = 0.0;     // irradiance angle at the source
  double psi_rad = 0.0;     // incidence angle at the telescope
};

// Lambert mode number m = -ln2 / ln(cos(theta_half)).
double lambert_mode(double theta_half_deg);

// Concentrator gain n_i^2 / sin^2(fov) inside the field of view, 0 outside.
double concentrator_gain(double psi_rad, double fov_rad, double n_index);

// Line-of-sight channel DC gain; 0 outside the field of view, clamped to 1
// at degenerate short range (`clamped` reports when that happened).
double dc_gain(const Geometry& geom, const SystemConfig& cfg, bool* clamped = nullptr);

// Transmitter at a floor corner, telescope at the ceiling center, fully
// aligned (phi = psi = 0).
Geometry full_alignment_geometry(const SystemConfig& cfg);

// Escape hatch for arbitrary placements: each end aims along `aim` and the
// angles are measured against it.
Geometry geometry_between(const std::array<double, 3>& tx_pos, const std::array<double, 3>& tx_aim,
                          const std::array<double, 3>& rx_pos, const std::array<double, 3>& rx_aim);

// Produces n_B: bulb-induced photons per gate collected by the telescope,
// before the coupling, fiber, and detector factors of the noise equation.
class AmbientModel {
 public:
  virtual ~AmbientModel() = default;
  virtual double photons_per_gate(double psd_w_per_nm, const SystemConfig& cfg) const = 0;
  // True when photons_per_gate already is the total background noise at the
  // receiver (nothing further applied downstream).
  virtual bool pins_total_noise() const { return false; }
};

// First-principles single-bounce model: the bulb (ceiling center, facing
// down) illuminates the telescope's field-of-view footprint on the floor,
// which re-emits Lambertian with the configured wall reflectivity. The
// absolute scale is uncalibrated; use AmbientNoiseTable to reproduce
// measured noise axes.
class GeometricAmbientModel : public AmbientModel {
 public:
  double photons_per_gate(double psd_w_per_nm, const SystemConfig& cfg) const override;
};

// Calibration override: piecewise-linear PSD -> total background noise
// (photons/gate at the receiver). Constant extrapolation beyond the table
// range keeps the mapping monotone.
class AmbientNoiseTable : public AmbientModel {
 public:
  struct Row {
    double psd_w_per_nm;
    double n_total_per_gate;
  };

  // Rows must have strictly increasing PSD and non-decreasing noise.
  explicit AmbientNoiseTable(std::vector<Row> rows);
  static AmbientNoiseTable load_csv(const std::string& path);

  double photons_per_gate(double psd_w_per_nm, const SystemConfig& cfg) const override;
  bool pins_total_noise() const override { return true; }

 private:
  std::vector<Row> rows_;
};

std::shared_ptr<const AmbientModel> make_default_ambient_model();

}  // namespace hdqkd
