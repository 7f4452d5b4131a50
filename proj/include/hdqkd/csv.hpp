#pragma once

#include <string>

#include "hdqkd/simulator.hpp"

namespace hdqkd {

// Renders a sweep table: versioned schema comment, header row, one data row
// per grid point. Numbers carry 9 significant digits and the bytes are
// deterministic across reruns.
std::string sweep_to_csv(const SweepTable& table);

// Writes the rendered table to `path`; throws on I/O failure or empty table.
void emit_csv(const SweepTable& table, const std::string& path);

// 9-significant-digit formatting used for all CSV numbers.
std::string format_sig9(double v);

}  // namespace hdqkd
