#include "hdqkd/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hdqkd {

std::string format_sig9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string sweep_to_csv(const SweepTable& table) {
  if (table.rows.empty()) throw std::runtime_error("emit_csv: nothing to emit");

  const bool psd = table.axis == SweepAxis::kPsd;
  std::ostringstream out;
  out << "# hdqkd-sweep-csv v1 axis=" << (psd ? "psd_w_per_nm" : "length_km") << "\n";
  if (psd) {
    out << "psd_w_per_nm,n_n_per_gate,rate_bps,l_bits,beta_opt,eta_db\n";
  } else {
    out << "length_km,eta_db,rate_bps,l_bits,beta_opt,n_n_per_gate\n";
  }
  for (const SweepRow& r : table.rows) {
    if (!r.ok) {
      out << "# skipped " << format_sig9(r.axis_value) << ": " << r.message << "\n";
      continue;
    }
    if (psd) {
      out << format_sig9(r.axis_value) << ',' << format_sig9(r.n_total) << ','
          << format_sig9(r.rate_bps) << ',' << format_sig9(r.l_bits) << ','
          << format_sig9(r.beta_opt) << ',' << format_sig9(r.eta_db) << "\n";
    } else {
      out << format_sig9(r.axis_value) << ',' << format_sig9(r.eta_db) << ','
          << format_sig9(r.rate_bps) << ',' << format_sig9(r.l_bits) << ','
          << format_sig9(r.beta_opt) << ',' << format_sig9(r.n_total) << "\n";
    }
  }
  return out.str();
}

void emit_csv(const SweepTable& table, const std::string& path) {
  const std::string body = sweep_to_csv(table);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
  out << body;
  if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

}  // namespace hdqkd
