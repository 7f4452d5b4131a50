#include "hdqkd/finite_key.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hdqkd {

double DecoyStatistics::total_n(Basis b) const {
  const auto& a = (b == Basis::kTime) ? n_time : n_phase;
  return a[0] + a[1] + a[2];
}

double DecoyStatistics::total_m(Basis b) const {
  const auto& a = (b == Basis::kTime) ? m_time : m_phase;
  return a[0] + a[1] + a[2];
}

bool DecoyStatistics::well_formed() const {
  for (int k = 0; k < 3; ++k) {
    if (n_time[k] < 0 || n_phase[k] < 0) return false;
    if (m_time[k] < 0 || m_time[k] > n_time[k]) return false;
    if (m_phase[k] < 0 || m_phase[k] > n_phase[k]) return false;
  }
  return true;
}

double tau(int n, const SystemConfig& cfg) {
  if (n < 0) throw std::invalid_argument("tau: photon number must be >= 0");
  double sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double mu = cfg.intensities[static_cast<size_t>(k)];
    // mu^n / n! built iteratively to stay finite for large n.
    double term = std::exp(-mu);
    for (int i = 1; i <= n; ++i) term *= mu / i;
    sum += term * cfg.intensity_probs[static_cast<size_t>(k)];
  }
  return sum;
}

namespace {

double log_inverse(double beta, const SystemConfig& cfg) {
  const double ln = -std::log(beta);
  return cfg.deviation_log_base == DeviationLogBase::kBase2 ? ln / std::numbers::ln2 : ln;
}

double log_two_over(double beta, const SystemConfig& cfg) {
  const double ln = std::log(2.0 / beta);
  return cfg.deviation_log_base == DeviationLogBase::kBase2 ? ln / std::numbers::ln2 : ln;
}

}  // namespace

double deviation(double n, double beta, const SystemConfig& cfg) {
  if (n < 0.0) throw std::invalid_argument("deviation: n must be >= 0");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("deviation: beta must be in (0, 1)");
  return std::sqrt(n / 2.0 * log_inverse(beta, cfg));
}

double entropy_d(double x, int dimension) {
  if (dimension < 2) throw std::invalid_argument("entropy_d: dimension must be >= 2");
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("entropy_d: x must be in [0, 1]");
  const double d1 = static_cast<double>(dimension - 1);
  const double lo = (x > 0.0) ? -x * std::log2(x / d1) : 0.0;
  const double hi = (x < 1.0) ? -(1.0 - x) * std::log2(1.0 - x) : 0.0;
  return lo + hi;
}

namespace {

struct BasisView {
  const std::array<double, 3>& n;
  double n_total;
};

BasisView view(const DecoyStatistics& s, Basis b) {
  return b == Basis::kTime ? BasisView{s.n_time, s.total_n(Basis::kTime)}
                           : BasisView{s.n_phase, s.total_n(Basis::kPhase)};
}

}  // namespace

double vacuum_events(const DecoyStatistics& stats, Basis basis, double beta,
                     const SystemConfig& cfg) {
  const auto [n, n_total] = view(stats, basis);
  const double mu2 = cfg.intensities[1];
  const double mu3 = cfg.intensities[2];
  const double p2 = cfg.intensity_probs[1];
  const double p3 = cfg.intensity_probs[2];
  const double d = deviation(n_total, beta, cfg);
  const double raw = tau(0, cfg) / (mu2 - mu3) *
                     (mu2 * std::exp(mu3) * (n[2] - d) / p3 - mu3 * std::exp(mu2) * (n[1] + d) / p2);
  return std::max(raw, 0.0);
}

double single_events(const DecoyStatistics& stats, Basis basis, double s0, double beta,
                     const SystemConfig& cfg) {
  const auto [n, n_total] = view(stats, basis);
  const double mu1 = cfg.intensities[0];
  const double mu2 = cfg.intensities[1];
  const double mu3 = cfg.intensities[2];
  const double p1 = cfg.intensity_probs[0];
  const double p2 = cfg.intensity_probs[1];
  const double p3 = cfg.intensity_probs[2];
  const double d = deviation(n_total, beta, cfg);
  const double mu_sq_diff = mu2 * mu2 - mu3 * mu3;
  const double denom = mu1 * (mu2 - mu3) - mu_sq_diff;  // positive by mu1 > mu2 + mu3
  // Every intensity enters as e^{mu_k} n^+- / p_k; the mu1 correction term is
  // deliberately read with that same shape.
  const double bracket = std::exp(mu2) * (n[1] - d) / p2 - std::exp(mu3) * (n[2] + d) / p3 +
                         mu_sq_diff / (mu1 * mu1) *
                             (s0 / tau(0, cfg) - std::exp(mu1) * (n[0] + d) / p1);
  return std::max(mu1 * tau(1, cfg) / denom * bracket, 0.0);
}

double phase_error_events(const DecoyStatistics& stats, double beta, const SystemConfig& cfg,
                          bool* clamped) {
  const double mu2 = cfg.intensities[1];
  const double mu3 = cfg.intensities[2];
  const double p2 = cfg.intensity_probs[1];
  const double p3 = cfg.intensity_probs[2];
  const double d = deviation(stats.total_m(Basis::kPhase), beta, cfg);
  const double raw = tau(1, cfg) / (mu2 - mu3) *
                     (std::exp(mu2) * (stats.m_phase[1] + d) / p2 -
                      std::exp(mu3) * (stats.m_phase[2] - d) / p3);
  if (clamped != nullptr) *clamped = raw < 0.0;
  return std::max(raw, 0.0);
}

double phase_error_bound(double s_t1, double s_f1, double nu_f1, double beta,
                         const SystemConfig& cfg) {
  if (!(s_t1 > 0.0) || !(s_f1 > 0.0)) {
    throw std::invalid_argument("phase_error_bound: insufficient statistics");
  }
  const double xi = std::sqrt((s_t1 + s_f1) * (s_f1 + 1.0) / (s_t1 * s_f1 * s_f1) *
                              log_two_over(beta, cfg));
  return std::min(nu_f1 / s_f1 + xi, 1.0);
}

double average_time_error(const DecoyStatistics& stats, const SystemConfig& cfg) {
  double e = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double n = stats.n_time[static_cast<size_t>(k)];
    if (n > 0.0) {
      e += cfg.intensity_probs[static_cast<size_t>(k)] * stats.m_time[static_cast<size_t>(k)] / n;
    }
  }
  return e;
}

double leak_ec_bits(const DecoyStatistics& stats, const SystemConfig& cfg) {
  return cfg.f_ec * entropy_d(average_time_error(stats, cfg), cfg.dimension) *
         stats.total_n(Basis::kTime);
}

KeyRateResult key_length_at(const DecoyStatistics& stats, const SystemConfig& cfg, double beta) {
  KeyRateResult r;
  r.beta_opt = beta;
  r.e_t = average_time_error(stats, cfg);
  r.leak_ec_bits = leak_ec_bits(stats, cfg);

  r.s_t0 = vacuum_events(stats, Basis::kTime, beta, cfg);
  r.s_t1 = single_events(stats, Basis::kTime, r.s_t0, beta, cfg);
  const double s_f0 = vacuum_events(stats, Basis::kPhase, beta, cfg);
  r.s_f1 = single_events(stats, Basis::kPhase, s_f0, beta, cfg);
  bool nu_clamped = false;
  r.nu_f1 = phase_error_events(stats, beta, cfg, &nu_clamped);
  r.clamped_negative_bound = nu_clamped || r.s_t0 == 0.0 || r.s_t1 == 0.0 || r.s_f1 == 0.0;

  if (!(r.s_t1 > 0.0) || !(r.s_f1 > 0.0)) {
    r.key_length_bits = 0.0;
    r.lambda_u = 1.0;
    r.reason = ZeroKeyReason::kInsufficientStatistics;
    return r;
  }

  r.lambda_u = phase_error_bound(r.s_t1, r.s_f1, r.nu_f1, beta, cfg);
  const double log2_d = std::log2(static_cast<double>(cfg.dimension));
  const double c_i = log2_d;  // overlap parameter for mutually unbiased time/phase bases
  // The entropy penalty saturates at its maximum log2(d): a phase error
  // bound beyond (d-1)/d must not win back key, so the credit stays
  // monotone non-increasing in lambda_u.
  const double peak = (cfg.dimension - 1.0) / cfg.dimension;
  const double penalty = entropy_d(std::min(r.lambda_u, peak), cfg.dimension);
  const double security_bits = 5.0 - 8.0 * std::log2(beta) - std::log2(cfg.eps_cor);
  const double objective =
      log2_d * r.s_t0 + r.s_t1 * (c_i - penalty) - r.leak_ec_bits - security_bits;
  if (objective > 0.0) {
    r.key_length_bits = objective;
  } else {
    r.key_length_bits = 0.0;
    r.reason = ZeroKeyReason::kNonpositiveObjective;
  }
  return r;
}

double beta_upper_bound(const SystemConfig& cfg) {
  // Stay strictly inside the open interval (0, eps_sec / 22).
  return cfg.eps_sec / 22.0 * (1.0 - 1e-9);
}

KeyRateResult key_length(const DecoyStatistics& stats, const SystemConfig& cfg) {
  const double lo = std::log(kBetaLowerBound);
  const double hi = std::log(beta_upper_bound(cfg));

  // Coarse log grid guards against plateaus; golden-section refinement on the
  // winning bracket then polishes the optimum.
  constexpr int kGridPoints = 200;
  KeyRateResult best = key_length_at(stats, cfg, std::exp(lo));
  int best_idx = 0;
  for (int i = 1; i < kGridPoints; ++i) {
    const double u = lo + (hi - lo) * i / (kGridPoints - 1);
    KeyRateResult r = key_length_at(stats, cfg, std::exp(u));
    if (r.key_length_bits > best.key_length_bits) {
      best = r;
      best_idx = i;
    }
  }

  const double step = (hi - lo) / (kGridPoints - 1);
  double a = lo + step * std::max(best_idx - 1, 0);
  double b = lo + step * std::min(best_idx + 1, kGridPoints - 1);
  const double inv_gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - (b - a) * inv_gr;
  double d = a + (b - a) * inv_gr;
  KeyRateResult rc = key_length_at(stats, cfg, std::exp(c));
  KeyRateResult rd = key_length_at(stats, cfg, std::exp(d));
  for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
    if (rc.key_length_bits > rd.key_length_bits) {
      b = d;
      d = c;
      rd = rc;
      c = b - (b - a) * inv_gr;
      rc = key_length_at(stats, cfg, std::exp(c));
    } else {
      a = c;
      c = d;
      rc = rd;
      d = a + (b - a) * inv_gr;
      rd = key_length_at(stats, cfg, std::exp(d));
    }
    const KeyRateResult& better = rc.key_length_bits > rd.key_length_bits ? rc : rd;
    if (better.key_length_bits > best.key_length_bits) best = better;
  }

  if (best.key_length_bits <= 0.0) {
    best.key_length_bits = 0.0;
    if (best.reason == ZeroKeyReason::kNone) best.reason = ZeroKeyReason::kNonpositiveObjective;
  }
  return best;
}

double rate_bps(const KeyRateResult& result, const SystemConfig& cfg) {
  const double r_state = cfg.frame_rate_policy == FrameRatePolicy::kClockPerBin
                             ? cfg.clock_rate_hz / cfg.dimension
                             : cfg.clock_rate_hz;
  return result.key_length_bits / cfg.block_size * r_state;
}

}  // namespace hdqkd
