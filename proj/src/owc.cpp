#include "hdqkd/owc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hdqkd/constants.hpp"
#include "hdqkd/units.hpp"

namespace hdqkd {

double lambert_mode(double theta_half_deg) {
  if (!(theta_half_deg > 0.0 && theta_half_deg < 90.0)) {
    throw std::invalid_argument("lambert_mode: semi-angle must be in (0, 90) degrees");
  }
  return -std::numbers::ln2 / std::log(std::cos(deg_to_rad(theta_half_deg)));
}

double concentrator_gain(double psi_rad, double fov_rad, double n_index) {
  if (!(fov_rad > 0.0 && fov_rad < std::numbers::pi / 2)) {
    throw std::invalid_argument("concentrator_gain: fov must be in (0, pi/2)");
  }
  if (psi_rad > fov_rad) return 0.0;
  const double s = std::sin(fov_rad);
  return n_index * n_index / (s * s);
}

double dc_gain(const Geometry& geom, const SystemConfig& cfg, bool* clamped) {
  if (clamped != nullptr) *clamped = false;
  const double fov = deg_to_rad(cfg.fov_deg);
  if (geom.psi_rad > fov) return 0.0;
  const double m = lambert_mode(cfg.phi_half_source_deg);
  const double g = concentrator_gain(geom.psi_rad, fov, cfg.concentrator_index);
  const double d2 = geom.distance_m * geom.distance_m;
  const double h = cfg.telescope_area_m2 * (m + 1.0) / (2.0 * std::numbers::pi * d2) *
                   std::pow(std::cos(geom.phi_rad), m) * cfg.filter_transmission * g *
                   std::cos(geom.psi_rad);
  // The Lambertian point-source formula can exceed unity at degenerate short
  // range; a gain is still a power fraction.
  if (h > 1.0 && clamped != nullptr) *clamped = true;
  return std::clamp(h, 0.0, 1.0);
}

Geometry full_alignment_geometry(const SystemConfig& cfg) {
  const double dx = cfg.room_x / 2.0;
  const double dy = cfg.room_y / 2.0;
  const double dz = cfg.room_z;
  return {std::sqrt(dx * dx + dy * dy + dz * dz), 0.0, 0.0};
}

namespace {

using Vec3 = std::array<double, 3>;

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double norm(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

double angle_between(const Vec3& a, const Vec3& b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("geometry_between: zero-length vector");
  double c = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) / (na * nb);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace

Geometry geometry_between(const Vec3& tx_pos, const Vec3& tx_aim, const Vec3& rx_pos,
                          const Vec3& rx_aim) {
  const Vec3 tx_to_rx = sub(rx_pos, tx_pos);
  const Vec3 rx_to_tx = sub(tx_pos, rx_pos);
  Geometry g;
  g.distance_m = norm(tx_to_rx);
  if (g.distance_m <= 0.0) throw std::invalid_argument("geometry_between: coincident endpoints");
  g.phi_rad = angle_between(tx_to_rx, tx_aim);
  g.psi_rad = angle_between(rx_to_tx, rx_aim);
  return g;
}

double GeometricAmbientModel::photons_per_gate(double psd_w_per_nm,
                                               const SystemConfig& cfg) const {
  if (psd_w_per_nm < 0.0) throw std::invalid_argument("ambient: PSD must be >= 0");
  if (psd_w_per_nm == 0.0) return 0.0;

  // Bulb power inside the receiver band.
  const double p_band = psd_w_per_nm * cfg.receiver_bandwidth_nm;

  // Bulb at the ceiling center facing down; the illuminated patch is the
  // telescope's field-of-view footprint on the floor around the transmitter
  // corner. With both at the ceiling center, bulb->patch distance equals the
  // link distance.
  const Geometry geom = full_alignment_geometry(cfg);
  const double r = geom.distance_m;
  const double cos_down = cfg.room_z / r;  // emission and incidence angle cosines coincide
  const double m_bulb = lambert_mode(cfg.theta_half_bulb_deg);
  const double irradiance =
      p_band * (m_bulb + 1.0) / (2.0 * std::numbers::pi * r * r) *
      std::pow(cos_down, m_bulb) * cos_down;

  // Lambertian bounce: radiance rho*E/pi fills the field of view, collected
  // over the same effective aperture the signal sees.
  const double radiance = cfg.wall_reflectivity * irradiance / std::numbers::pi;
  const double fov = deg_to_rad(cfg.fov_deg);
  const double solid_angle = 2.0 * std::numbers::pi * (1.0 - std::cos(fov));
  const double aperture = cfg.telescope_area_m2 *
                          concentrator_gain(0.0, fov, cfg.concentrator_index) *
                          cfg.filter_transmission;
  const double power = radiance * aperture * solid_angle;

  const double lambda_q1_m = nm_to_m(cfg.wavelength_plan.quantum_nm.at(0));
  return power * lambda_q1_m * cfg.gate_duration_s / kPlanckTimesC;
}

AmbientNoiseTable::AmbientNoiseTable(std::vector<Row> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw std::invalid_argument("ambient table: no rows");
  for (size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].n_total_per_gate < 0.0) {
      throw std::invalid_argument("ambient table: noise must be >= 0");
    }
    if (i > 0) {
      if (rows_[i].psd_w_per_nm <= rows_[i - 1].psd_w_per_nm) {
        throw std::invalid_argument("ambient table: PSD column must be strictly increasing");
      }
      if (rows_[i].n_total_per_gate < rows_[i - 1].n_total_per_gate) {
        throw std::invalid_argument("ambient table: noise column must be non-decreasing");
      }
    }
  }
}

AmbientNoiseTable AmbientNoiseTable::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ambient table: cannot open " + path);
  std::vector<Row> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string a, b;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b)) {
      throw std::runtime_error("ambient table: malformed line: " + line);
    }
    if (a.find_first_not_of(" \t") == std::string::npos) continue;
    if (a.find("psd") != std::string::npos) continue;  // header row
    rows.push_back({std::stod(a), std::stod(b)});
  }
  return AmbientNoiseTable(std::move(rows));
}

double AmbientNoiseTable::photons_per_gate(double psd_w_per_nm, const SystemConfig&) const {
  if (psd_w_per_nm <= rows_.front().psd_w_per_nm) return rows_.front().n_total_per_gate;
  if (psd_w_per_nm >= rows_.back().psd_w_per_nm) return rows_.back().n_total_per_gate;
  auto hi = std::lower_bound(rows_.begin(), rows_.end(), psd_w_per_nm,
                             [](const Row& r, double x) { return r.psd_w_per_nm < x; });
  auto lo = hi - 1;
  const double t = (psd_w_per_nm - lo->psd_w_per_nm) / (hi->psd_w_per_nm - lo->psd_w_per_nm);
  return lo->n_total_per_gate + t * (hi->n_total_per_gate - lo->n_total_per_gate);
}

std::shared_ptr<const AmbientModel> make_default_ambient_model() {
  return std::make_shared<GeometricAmbientModel>();
}

}  // namespace hdqkd
