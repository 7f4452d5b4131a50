#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hdqkd/budget.hpp"
#include "hdqkd/config.hpp"
#include "hdqkd/fiber.hpp"
#include "hdqkd/finite_key.hpp"
#include "hdqkd/owc.hpp"

namespace hdqkd {

// One evaluation scenario: a validated config snapshot. The sweep axes
// (l0_km, psd_w_per_nm, dimension, block_size) live inside the snapshot.
// With a sample seed set, detections are Poisson-sampled instead of taken
// as expectations.
struct ScenarioPoint {
  ValidatedConfig config;
  std::optional<std::uint64_t> sample_seed;

  static ScenarioPoint from(const ValidatedConfig& cfg) { return {cfg, std::nullopt}; }
};

// No-eavesdropper expected detections and errors per basis and intensity.
DecoyStatistics expected_counts(double eta, double n_noise, const SystemConfig& cfg);

// Statistical-experiment variant: detections drawn Poisson around their
// expectations, errors binomial within the detections (so m <= n holds).
// Excluded from acceptance runs, which use the deterministic expectations.
DecoyStatistics sampled_counts(double eta, double n_noise, const SystemConfig& cfg,
                               std::uint64_t seed);

struct EvalOutcome {
  bool ok = false;
  std::string message;
  ChannelBudget channel;
  NoiseBudget noise;
  double ambient_raw = 0.0;  // n_B at the telescope (or pinned total for table models)
  DecoyStatistics stats;
  KeyRateResult key;
  bool h_dc_clamped = false;  // wireless gain hit the unity clamp
};

enum class SweepAxis { kPsd, kFiberLength };

struct SweepRow {
  double axis_value = 0.0;
  double eta_db = 0.0;
  double rate_bps = 0.0;
  double l_bits = 0.0;
  double beta_opt = 0.0;
  double n_total = 0.0;
  bool ok = false;
  std::string message;
};

struct SweepTable {
  SweepAxis axis = SweepAxis::kFiberLength;
  std::vector<SweepRow> rows;
};

// Composes the wireless, fiber, and noise models into an end-to-end key
// rate. Holds only immutable state, so one instance serves concurrent
// sweep workers.
class Simulator {
 public:
  Simulator(std::shared_ptr<const AmbientModel> ambient, RamanCrossSectionTable gamma_table);
  explicit Simulator(const SystemConfig& cfg);

  EvalOutcome evaluate(const ScenarioPoint& point) const;

  // One evaluate() per grid value, merged in grid order. For the length axis
  // the grid value is the total span L0 + L1 (L1 fixed by the config).
  SweepTable sweep(SweepAxis axis, const std::vector<double>& grid,
                   const ScenarioPoint& base) const;

  const RamanCrossSectionTable& gamma_table() const { return gamma_table_; }
  const AmbientModel& ambient() const { return *ambient_; }

 private:
  std::shared_ptr<const AmbientModel> ambient_;
  RamanCrossSectionTable gamma_table_;
};

// Log-spaced grid (PSD axis) and linear grid (length axis) helpers.
std::vector<double> log_grid(double from, double to, int points);
std::vector<double> linear_grid(double from, double to, int points);

}  // namespace hdqkd
