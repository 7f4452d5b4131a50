#pragma once

#include <array>
#include <cstdint>

#include "hdqkd/config.hpp"

namespace hdqkd {

enum class Basis { kTime, kPhase };

// Observed (or simulated expected) detections n and errors m per basis and
// intensity. Values are real-valued expectations, not sampled integers.
struct DecoyStatistics {
  std::array<double, 3> n_time{};   // n_{T,k}
  std::array<double, 3> n_phase{};  // n_{F,k}
  std::array<double, 3> m_time{};   // m_{T,k}
  std::array<double, 3> m_phase{};  // m_{F,k}

  double total_n(Basis b) const;
  double total_m(Basis b) const;
  bool well_formed() const;  // 0 <= m <= n per cell
};

enum class ZeroKeyReason : std::uint8_t {
  kNone = 0,
  kInsufficientStatistics,  // single-photon bounds collapsed to zero
  kNonpositiveObjective,    // formula never exceeded zero over the beta range
};

struct KeyRateResult {
  double key_length_bits = 0.0;  // l, clamped at 0
  double beta_opt = 0.0;
  double s_t0 = 0.0;      // vacuum events, time basis
  double s_t1 = 0.0;      // single-photon events, time basis
  double s_f1 = 0.0;      // single-photon events, phase basis
  double nu_f1 = 0.0;     // single-photon errors, phase basis
  double lambda_u = 0.0;  // phase error upper bound
  double leak_ec_bits = 0.0;
  double e_t = 0.0;       // average time-basis error rate
  double rate_bps = 0.0;
  ZeroKeyReason reason = ZeroKeyReason::kNone;
  bool clamped_negative_bound = false;  // some intermediate count hit its max(.,0)
};

// Probability that a pulse carries n photons under the three-intensity
// mixture: tau_n = sum_k e^(-mu_k) mu_k^n p_k / n!.
double tau(int n, const SystemConfig& cfg);

// Gaussian-approximation deviation delta(n, beta) = sqrt(n/2 * log(1/beta)).
double deviation(double n, double beta, const SystemConfig& cfg);

// d-dimensional Shannon entropy h_d(x) = -x log2(x/(d-1)) - (1-x) log2(1-x),
// extended by continuity at both endpoints.
double entropy_d(double x, int dimension);

// Decoy-state bound on vacuum detection events in the given basis.
double vacuum_events(const DecoyStatistics& stats, Basis basis, double beta,
                     const SystemConfig& cfg);

// Decoy-state bound on single-photon detection events; `s0` is the vacuum
// bound of the same basis.
double single_events(const DecoyStatistics& stats, Basis basis, double s0, double beta,
                     const SystemConfig& cfg);

// Single-photon errors in the phase basis, clamped at zero (`clamped` set
// when the raw value was negative).
double phase_error_events(const DecoyStatistics& stats, double beta, const SystemConfig& cfg,
                          bool* clamped = nullptr);

// lambda^U = nu_F1/s_F1 + xi, capped at 1. Requires positive s_t1 and s_f1.
double phase_error_bound(double s_t1, double s_f1, double nu_f1, double beta,
                         const SystemConfig& cfg);

// Average time-basis error rate e_T = sum_k p_k m_{T,k}/n_{T,k} (0/0 -> 0).
double average_time_error(const DecoyStatistics& stats, const SystemConfig& cfg);

// Error-correction leakage f * h_d(e_T) * n_T.
double leak_ec_bits(const DecoyStatistics& stats, const SystemConfig& cfg);

// Key-length formula evaluated at a fixed beta; key_length() maximizes this
// over beta in (0, eps_sec/22). The returned result has rate_bps unset.
KeyRateResult key_length_at(const DecoyStatistics& stats, const SystemConfig& cfg, double beta);
KeyRateResult key_length(const DecoyStatistics& stats, const SystemConfig& cfg);

// Search domain for the beta optimizer (also used by the grid oracles).
double beta_upper_bound(const SystemConfig& cfg);
inline constexpr double kBetaLowerBound = 1e-30;

// Secret bits per second: (l / N) * R_state, with R_state set by the frame
// rate policy (clock/d when each state spans d bins, or the raw clock).
double rate_bps(const KeyRateResult& result, const SystemConfig& cfg);

}  // namespace hdqkd
