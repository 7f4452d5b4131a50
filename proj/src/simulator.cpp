#include "hdqkd/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <utility>

#include "hdqkd/units.hpp"

namespace hdqkd {

DecoyStatistics expected_counts(double eta, double n_noise, const SystemConfig& cfg) {
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("expected_counts: eta must be in [0, 1]");
  if (n_noise < 0.0) throw std::invalid_argument("expected_counts: noise must be >= 0");

  const double p_t2 = cfg.p_time_basis * cfg.p_time_basis;
  const double p_f2 = cfg.p_phase_basis() * cfg.p_phase_basis();
  const double n_pulses = cfg.block_size;
  const double noise_share = (cfg.dimension - 1.0) / cfg.dimension * n_noise;
  const double eta_i = cfg.interferometer_transmittance;

  DecoyStatistics s;
  for (size_t k = 0; k < 3; ++k) {
    const double mu = cfg.intensities[k];
    const double p_mu = cfg.intensity_probs[k];
    const double det_t = 1.0 - std::exp(-eta * mu);
    const double det_f = 1.0 - std::exp(-eta * eta_i * mu);
    s.n_time[k] = p_mu * p_t2 * n_pulses * (det_t + n_noise);
    s.n_phase[k] = p_mu * p_f2 * n_pulses * (det_f + noise_share);
    s.m_time[k] = p_mu * p_t2 * n_pulses * (cfg.misalignment * det_t + noise_share);
    s.m_phase[k] = p_mu * p_f2 * n_pulses * (cfg.misalignment * det_f + noise_share);
  }
  return s;
}

DecoyStatistics sampled_counts(double eta, double n_noise, const SystemConfig& cfg,
                               std::uint64_t seed) {
  const DecoyStatistics mean = expected_counts(eta, n_noise, cfg);
  std::mt19937_64 rng(seed);
  auto draw = [&rng](double n_mean, double m_mean) {
    double n = 0.0;
    if (n_mean > 0.0) n = static_cast<double>(std::poisson_distribution<long long>(n_mean)(rng));
    double m = 0.0;
    if (n > 0.0 && m_mean > 0.0) {
      const double p = std::min(m_mean / n_mean, 1.0);
      m = static_cast<double>(
          std::binomial_distribution<long long>(static_cast<long long>(n), p)(rng));
    }
    return std::pair<double, double>{n, m};
  };
  DecoyStatistics s;
  for (size_t k = 0; k < 3; ++k) {
    std::tie(s.n_time[k], s.m_time[k]) = draw(mean.n_time[k], mean.m_time[k]);
    std::tie(s.n_phase[k], s.m_phase[k]) = draw(mean.n_phase[k], mean.m_phase[k]);
  }
  return s;
}

Simulator::Simulator(std::shared_ptr<const AmbientModel> ambient,
                     RamanCrossSectionTable gamma_table)
    : ambient_(std::move(ambient)), gamma_table_(std::move(gamma_table)) {
  if (!ambient_) throw std::invalid_argument("Simulator: null ambient model");
}

Simulator::Simulator(const SystemConfig& cfg)
    : ambient_(make_default_ambient_model()),
      gamma_table_(RamanCrossSectionTable::flat_placeholder(cfg.raman_gamma_per_km_nm)) {}

EvalOutcome Simulator::evaluate(const ScenarioPoint& point) const {
  EvalOutcome out;
  const SystemConfig& cfg = point.config.get();

  try {
    const Geometry geom = full_alignment_geometry(cfg);
    const double h_dc = dc_gain(geom, cfg, &out.h_dc_clamped);
    const double eta_coup = db_to_linear(cfg.coupling_loss_db);
    const double eta_fib = fiber_transmittance(cfg.l0_km, cfg.l1_km, cfg);
    out.channel = ChannelBudget::make(h_dc, eta_coup, eta_fib, cfg.detector_efficiency);

    const LaunchPolicy policy = LaunchPolicy::from_config(cfg);
    const RamanTotals raman = total_raman(cfg, cfg.wavelength_plan, policy, gamma_table_);

    out.ambient_raw = ambient_->photons_per_gate(cfg.psd_w_per_nm, cfg);
    if (ambient_->pins_total_noise()) {
      // The table gives the total background noise directly; keep the Raman
      // and dark decomposition and let the ambient share absorb the rest.
      // The physical floor wins if the table value sits below it.
      NoiseBudget floor = total_noise(cfg, 0.0, out.channel, raman);
      const double ambient_share = std::max(out.ambient_raw - floor.n_total, 0.0);
      out.noise = NoiseBudget::make(floor.raman_forward, floor.raman_backward, ambient_share,
                                    floor.dark);
    } else {
      out.noise = total_noise(cfg, out.ambient_raw, out.channel, raman);
    }

    out.stats = point.sample_seed
                    ? sampled_counts(out.channel.eta_total, out.noise.n_total, cfg,
                                     *point.sample_seed)
                    : expected_counts(out.channel.eta_total, out.noise.n_total, cfg);
    out.key = key_length(out.stats, cfg);
    out.key.rate_bps = rate_bps(out.key, cfg);
    out.ok = true;
  } catch (const std::exception& e) {
    out.ok = false;
    out.message = e.what();
    out.key = KeyRateResult{};
    out.key.reason = ZeroKeyReason::kInsufficientStatistics;
  }
  return out;
}

SweepTable Simulator::sweep(SweepAxis axis, const std::vector<double>& grid,
                            const ScenarioPoint& base) const {
  if (grid.empty()) throw std::invalid_argument("sweep: empty grid");

  SweepTable table;
  table.axis = axis;
  table.rows.resize(grid.size());

  auto eval_one = [&](size_t i) {
    SweepRow& row = table.rows[i];
    row.axis_value = grid[i];

    SystemConfig cfg = base.config.get();
    if (axis == SweepAxis::kPsd) {
      cfg.psd_w_per_nm = grid[i];
    } else {
      // Grid value is the total fiber length; the drop span stays fixed.
      cfg.l0_km = grid[i] - cfg.l1_km;
    }
    ValidationResult vr = validate(cfg);
    if (!vr.ok()) {
      row.ok = false;
      row.message = vr.violations.front().field + ": " + vr.violations.front().message;
      return;
    }
    ScenarioPoint point = ScenarioPoint::from(*vr.config);
    if (base.sample_seed) point.sample_seed = *base.sample_seed + i;  // decorrelate rows
    EvalOutcome out = evaluate(point);
    row.ok = out.ok;
    row.message = out.message;
    if (out.ok) {
      row.eta_db = out.channel.eta_total > 0.0
                       ? linear_to_db(out.channel.eta_total)
                       : std::numeric_limits<double>::infinity();
      row.rate_bps = out.key.rate_bps;
      row.l_bits = out.key.key_length_bits;
      row.beta_opt = out.key.beta_opt;
      row.n_total = out.noise.n_total;
    }
  };

  // Rows are independent; workers pull indices and write disjoint slots, so
  // the merged table is identical to a serial run.
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const size_t n_workers = std::min<size_t>({hw, grid.size(), 8});
  if (n_workers <= 1) {
    for (size_t i = 0; i < grid.size(); ++i) eval_one(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (size_t w = 0; w < n_workers; ++w) {
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1)) eval_one(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  return table;
}

std::vector<double> log_grid(double from, double to, int points) {
  if (!(from > 0.0) || !(to > 0.0)) throw std::invalid_argument("log_grid: bounds must be > 0");
  if (points < 1) throw std::invalid_argument("log_grid: need at least one point");
  std::vector<double> g(static_cast<size_t>(points));
  if (points == 1) {
    g[0] = from;
    return g;
  }
  const double lo = std::log(from);
  const double hi = std::log(to);
  for (int i = 0; i < points; ++i) {
    g[static_cast<size_t>(i)] = std::exp(lo + (hi - lo) * i / (points - 1));
  }
  return g;
}

std::vector<double> linear_grid(double from, double to, int points) {
  if (points < 1) throw std::invalid_argument("linear_grid: need at least one point");
  std::vector<double> g(static_cast<size_t>(points));
  if (points == 1) {
    g[0] = from;
    return g;
  }
  for (int i = 0; i < points; ++i) {
    g[static_cast<size_t>(i)] = from + (to - from) * i / (points - 1);
  }
  return g;
}

}  // namespace hdqkd
