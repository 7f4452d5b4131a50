#include "hdqkd/config_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace hdqkd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string shortest(double v) {
  char buf[64];
  // Fixed notation in the human range so nominal values read as written
  // (0.0002, not 2e-04); shortest round-trip form otherwise.
  const double mag = std::abs(v);
  const bool fixed = v == 0.0 || (mag >= 1e-4 && mag < 1e6);
  auto [ptr, ec] = fixed ? std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed)
                         : std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("config_to_text: value not representable");
  return std::string(buf, ptr);
}

double to_double(const std::string& key, const std::string& value) {
  size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("config: key '" + key + "' has non-numeric value '" + value + "'");
  }
  if (pos != value.size()) {
    throw std::runtime_error("config: key '" + key + "' has trailing junk in '" + value + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw std::runtime_error("config: key '" + key + "' must be an integer, got '" + value + "'");
  }
  return i;
}

struct FieldMap {
  // key -> (apply-from-string, serialize)
  std::map<std::string, std::function<void(SystemConfig&, const std::string&)>> apply;
  std::vector<std::pair<std::string, std::vector<std::string>>> layout;  // section -> keys
  std::map<std::string, std::function<std::string(const SystemConfig&)>> print;

  void num(const std::string& section, const std::string& key, double SystemConfig::* field) {
    apply[key] = [key, field](SystemConfig& c, const std::string& v) { c.*field = to_double(key, v); };
    print[key] = [field](const SystemConfig& c) { return shortest(c.*field); };
    add(section, key);
  }
  void integer(const std::string& section, const std::string& key, int SystemConfig::* field) {
    apply[key] = [key, field](SystemConfig& c, const std::string& v) { c.*field = to_int(key, v); };
    print[key] = [field](const SystemConfig& c) { return std::to_string(c.*field); };
    add(section, key);
  }
  void add(const std::string& section, const std::string& key) {
    for (auto& [name, keys] : layout) {
      if (name == section) {
        keys.push_back(key);
        return;
      }
    }
    layout.push_back({section, {key}});
  }
};

const FieldMap& fields() {
  static const FieldMap map = [] {
    FieldMap f;
    f.num("room", "room_x_m", &SystemConfig::room_x);
    f.num("room", "room_y_m", &SystemConfig::room_y);
    f.num("room", "room_z_m", &SystemConfig::room_z);

    f.num("wireless", "theta_half_bulb_deg", &SystemConfig::theta_half_bulb_deg);
    f.num("wireless", "phi_half_source_deg", &SystemConfig::phi_half_source_deg);
    f.num("wireless", "fov_deg", &SystemConfig::fov_deg);
    f.num("wireless", "concentrator_index", &SystemConfig::concentrator_index);
    f.num("wireless", "telescope_area_m2", &SystemConfig::telescope_area_m2);
    f.num("wireless", "filter_transmission", &SystemConfig::filter_transmission);
    f.num("wireless", "wall_reflectivity", &SystemConfig::wall_reflectivity);

    auto intensity = [](size_t i) {
      return [i](SystemConfig& c, const std::string& v) {
        c.intensities[i] = to_double("mu", v);
      };
    };
    auto prob = [](size_t i) {
      return [i](SystemConfig& c, const std::string& v) {
        c.intensity_probs[i] = to_double("p_mu", v);
      };
    };
    for (size_t i = 0; i < 3; ++i) {
      const std::string mu_key = "mu" + std::to_string(i + 1);
      const std::string p_key = "p_mu" + std::to_string(i + 1);
      f.apply[mu_key] = intensity(i);
      f.print[mu_key] = [i](const SystemConfig& c) { return shortest(c.intensities[i]); };
      f.add("source", mu_key);
      f.apply[p_key] = prob(i);
      f.print[p_key] = [i](const SystemConfig& c) { return shortest(c.intensity_probs[i]); };
      f.add("source", p_key);
    }
    f.num("source", "p_time_basis", &SystemConfig::p_time_basis);
    f.integer("source", "dimension", &SystemConfig::dimension);
    f.num("source", "block_size", &SystemConfig::block_size);
    f.num("source", "clock_rate_hz", &SystemConfig::clock_rate_hz);
    f.num("source", "interferometer_transmittance", &SystemConfig::interferometer_transmittance);
    f.apply["frame_rate_policy"] = [](SystemConfig& c, const std::string& v) {
      if (v == "bin") {
        c.frame_rate_policy = FrameRatePolicy::kClockPerBin;
      } else if (v == "state") {
        c.frame_rate_policy = FrameRatePolicy::kPerStateClock;
      } else {
        throw std::runtime_error("config: frame_rate_policy must be 'bin' or 'state'");
      }
    };
    f.print["frame_rate_policy"] = [](const SystemConfig& c) {
      return std::string(c.frame_rate_policy == FrameRatePolicy::kClockPerBin ? "bin" : "state");
    };
    f.add("source", "frame_rate_policy");

    f.num("detector", "gate_duration_s", &SystemConfig::gate_duration_s);
    f.num("detector", "dark_count_rate_per_ns", &SystemConfig::dark_count_rate_per_ns);
    f.num("detector", "detector_efficiency", &SystemConfig::detector_efficiency);
    f.num("detector", "misalignment", &SystemConfig::misalignment);

    f.num("fiber", "coupling_loss_db", &SystemConfig::coupling_loss_db);
    f.num("fiber", "alpha_db_per_km", &SystemConfig::alpha_db_per_km);
    f.num("fiber", "alpha_raman_per_km", &SystemConfig::alpha_raman_per_km);
    f.num("fiber", "awg_loss_db", &SystemConfig::awg_loss_db);
    f.num("fiber", "l0_km", &SystemConfig::l0_km);
    f.num("fiber", "l1_km", &SystemConfig::l1_km);
    f.integer("fiber", "num_users", &SystemConfig::num_users);
    f.num("fiber", "receiver_bandwidth_nm", &SystemConfig::receiver_bandwidth_nm);
    f.num("fiber", "raman_gamma_per_km_nm", &SystemConfig::raman_gamma_per_km_nm);

    f.apply["launch_mode"] = [](SystemConfig& c, const std::string& v) {
      if (v == "ber") {
        c.launch_mode = LaunchMode::kBerDriven;
      } else if (v == "fixed") {
        c.launch_mode = LaunchMode::kFixed;
      } else {
        throw std::runtime_error("config: launch_mode must be 'ber' or 'fixed'");
      }
    };
    f.print["launch_mode"] = [](const SystemConfig& c) {
      return std::string(c.launch_mode == LaunchMode::kBerDriven ? "ber" : "fixed");
    };
    f.add("classical", "launch_mode");
    f.num("classical", "receiver_sensitivity_dbm", &SystemConfig::receiver_sensitivity_dbm);
    f.num("classical", "launch_fixed_dbm", &SystemConfig::launch_fixed_dbm);

    // Wavelength plan is stored as its grid parameters and rebuilt after
    // parsing (num_users may change in the same file).
    auto plan_field = [](size_t which) {
      return [which](const SystemConfig& c) {
        switch (which) {
          case 0: return shortest(c.wavelength_plan.quantum_nm.at(0));
          case 1: return shortest(c.wavelength_plan.classical_nm.at(0));
          default: return shortest(c.wavelength_plan.spacing_nm);
        }
      };
    };
    f.apply["lambda_q1_nm"] = [](SystemConfig&, const std::string&) {};
    f.print["lambda_q1_nm"] = plan_field(0);
    f.add("wavelengths", "lambda_q1_nm");
    f.apply["lambda_d1_nm"] = [](SystemConfig&, const std::string&) {};
    f.print["lambda_d1_nm"] = plan_field(1);
    f.add("wavelengths", "lambda_d1_nm");
    f.apply["channel_spacing_nm"] = [](SystemConfig&, const std::string&) {};
    f.print["channel_spacing_nm"] = plan_field(2);
    f.add("wavelengths", "channel_spacing_nm");

    f.apply["ambient_model"] = [](SystemConfig& c, const std::string& v) {
      if (v == "geometric") {
        c.ambient_model = AmbientModelKind::kGeometric;
      } else if (v == "table") {
        c.ambient_model = AmbientModelKind::kTable;
      } else {
        throw std::runtime_error("config: ambient_model must be 'geometric' or 'table'");
      }
    };
    f.print["ambient_model"] = [](const SystemConfig& c) {
      return std::string(c.ambient_model == AmbientModelKind::kGeometric ? "geometric" : "table");
    };
    f.add("ambient", "ambient_model");
    f.num("ambient", "psd_w_per_nm", &SystemConfig::psd_w_per_nm);

    f.num("security", "f_ec", &SystemConfig::f_ec);
    f.num("security", "eps_sec", &SystemConfig::eps_sec);
    f.num("security", "eps_cor", &SystemConfig::eps_cor);
    f.apply["deviation_log_base"] = [](SystemConfig& c, const std::string& v) {
      if (v == "e") {
        c.deviation_log_base = DeviationLogBase::kNatural;
      } else if (v == "2") {
        c.deviation_log_base = DeviationLogBase::kBase2;
      } else {
        throw std::runtime_error("config: deviation_log_base must be 'e' or '2'");
      }
    };
    f.print["deviation_log_base"] = [](const SystemConfig& c) {
      return std::string(c.deviation_log_base == DeviationLogBase::kNatural ? "e" : "2");
    };
    f.add("security", "deviation_log_base");
    return f;
  }();
  return map;
}

}  // namespace

SystemConfig parse_config_text(const std::string& text) {
  SystemConfig cfg;
  const FieldMap& f = fields();

  // Plan parameters are applied last so num_users can precede or follow them.
  double q1 = cfg.wavelength_plan.quantum_nm.at(0);
  double d1 = cfg.wavelength_plan.classical_nm.at(0);
  double spacing = cfg.wavelength_plan.spacing_nm;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        throw std::runtime_error("config: malformed section header at line " +
                                 std::to_string(line_no));
      }
      continue;  // sections are decorative
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config: expected 'key = value' at line " + std::to_string(line_no) +
                               ": " + s);
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key == "lambda_q1_nm") {
      q1 = to_double(key, value);
      continue;
    }
    if (key == "lambda_d1_nm") {
      d1 = to_double(key, value);
      continue;
    }
    if (key == "channel_spacing_nm") {
      spacing = to_double(key, value);
      continue;
    }
    const auto it = f.apply.find(key);
    if (it == f.apply.end()) {
      throw std::runtime_error("config: unknown key '" + key + "' at line " +
                               std::to_string(line_no));
    }
    it->second(cfg, value);
  }

  cfg.wavelength_plan = WavelengthPlan::make_grid(q1, d1, spacing, cfg.num_users);
  return cfg;
}

SystemConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_to_text(const SystemConfig& cfg) {
  const FieldMap& f = fields();
  std::ostringstream out;
  out << "# hdqkd configuration (key = value; units as named)\n";
  for (const auto& [section, keys] : f.layout) {
    out << "\n[" << section << "]\n";
    for (const auto& key : keys) {
      out << key << " = " << f.print.at(key)(cfg) << "\n";
    }
  }
  return out.str();
}

}  // namespace hdqkd
