#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "hdqkd/fiber.hpp"
#include "hdqkd/units.hpp"

using namespace hdqkd;

namespace {

SystemConfig synthetic_cfg() {
  SystemConfig cfg;
  cfg.alpha_raman_per_km = 0.046;
  cfg.receiver_bandwidth_nm = 0.1;
  return cfg;
}

}  // namespace

TEST_CASE("fiber transmittance") {
  SystemConfig cfg;
  cfg.awg_loss_db = 0.0;
  CHECK(fiber_transmittance(0.0, 0.0, cfg) == doctest::Approx(1.0).epsilon(1e-12));
  cfg.awg_loss_db = 2.0;
  CHECK(fiber_transmittance(5.0, 0.5, cfg) == doctest::Approx(0.309029543251).epsilon(1e-9));
  CHECK(fiber_transmittance(10.0, 0.5, cfg) == doctest::Approx(0.245470891569).epsilon(1e-9));
  CHECK_THROWS_AS(fiber_transmittance(-1.0, 0.0, cfg), std::invalid_argument);
}

TEST_CASE("launch power policies") {
  LaunchPolicy ber{LaunchMode::kBerDriven, -38.5, 0.0};
  CHECK(launch_power(ber, 0.0) == doctest::Approx(1.41253754462e-7).epsilon(1e-9));
  CHECK(launch_power(ber, 5.0) == doctest::Approx(4.46683592151e-7).epsilon(1e-9));
  LaunchPolicy fixed{LaunchMode::kFixed, -38.5, 0.0};
  CHECK(launch_power(fixed, 0.0) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(launch_power(fixed, 30.0) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK_THROWS_AS(launch_power(ber, -1.0), std::invalid_argument);
}

TEST_CASE("forward Raman scattering") {
  const SystemConfig cfg = synthetic_cfg();
  const auto table = RamanCrossSectionTable::flat_placeholder(1e-9);
  CHECK(raman_forward(1e-3, 0.0, 1585.2, 1555.62, table, cfg) == 0.0);
  CHECK(raman_forward(0.0, 10.0, 1585.2, 1555.62, table, cfg) == 0.0);
  CHECK(raman_forward(1e-3, 10.0, 1585.2, 1555.62, table, cfg) ==
        doctest::Approx(6.31283645507e-13).epsilon(1e-9));
}

TEST_CASE("backward Raman scattering") {
  const SystemConfig cfg = synthetic_cfg();
  const auto table = RamanCrossSectionTable::flat_placeholder(1e-9);
  CHECK(raman_backward(1e-3, 0.0, 1585.2, 1555.62, table, cfg) == 0.0);
  CHECK(raman_backward(1e-3, 10.0, 1585.2, 1555.62, table, cfg) ==
        doctest::Approx(6.53783650995e-13).epsilon(1e-9));
  // Long-length limit I * Gamma * dl / (2 alpha_r).
  const double limit = 1.08695652174e-12;
  CHECK(raman_backward(1e-3, 1e4, 1585.2, 1555.62, table, cfg) ==
        doctest::Approx(limit).epsilon(1e-6));
}

TEST_CASE("forward Raman peaks at 1/alpha_r") {
  const SystemConfig cfg = synthetic_cfg();
  const auto table = RamanCrossSectionTable::flat_placeholder(1e-9);
  const double l_star = 1.0 / cfg.alpha_raman_per_km;
  double best_l = 0.0, best = -1.0;
  for (int i = 0; i <= 4000; ++i) {
    const double l = 0.05 * i;
    const double v = raman_forward(1e-3, l, 1585.2, 1555.62, table, cfg);
    if (v > best) {
      best = v;
      best_l = l;
    }
  }
  CHECK(best_l == doctest::Approx(l_star).epsilon(0.01));
  // Bounded by the analytic peak value and vanishing at both extremes.
  CHECK(raman_forward(1e-3, 1e-9, 1585.2, 1555.62, table, cfg) < 1e-18);
  CHECK(raman_forward(1e-3, 1e4, 1585.2, 1555.62, table, cfg) < 1e-18);
}

TEST_CASE("backward Raman is monotone in length and bounded") {
  const SystemConfig cfg = synthetic_cfg();
  const auto table = RamanCrossSectionTable::flat_placeholder(1e-9);
  const double bound = 1e-3 * 1e-9 * 0.1 / (2.0 * cfg.alpha_raman_per_km);
  double prev = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double v = raman_backward(1e-3, i * 1.0, 1585.2, 1555.62, table, cfg);
    CHECK(v >= prev);
    CHECK(v <= bound * (1.0 + 1e-12));
    prev = v;
  }
}

TEST_CASE("photon conversion") {
  const SystemConfig cfg;  // eta_d = 0.3, T_d = 100 ps
  CHECK(raman_photons(0.0, 1555.62, cfg) == 0.0);
  CHECK(raman_photons(6.3e-13, 1555.62, cfg) == doctest::Approx(1.4800915864e-4).epsilon(1e-9));
  // Inversion identity: the power that makes exactly one photon per gate.
  const double one_photon_w = 1.98644585715e-25 / (1555.62e-9 * 100e-12 * 0.3);
  CHECK(raman_photons(one_photon_w, 1555.62, cfg) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cross-section table interpolation") {
  RamanCrossSectionTable table({{-40.0, 2e-9}, {0.0, 4e-9}, {40.0, 2e-9}});
  CHECK(table.gamma(1555.62, 1555.62) == doctest::Approx(4e-9));
  CHECK(table.gamma(1575.62, 1555.62) == doctest::Approx(3e-9));  // shift -20
  CHECK(table.gamma(1505.62, 1555.62) == 0.0);                    // shift +50, outside
  CHECK_THROWS(RamanCrossSectionTable({{0.0, 1e-9}, {0.0, 2e-9}}));
  CHECK_THROWS(RamanCrossSectionTable({{0.0, -1e-9}}));
}

TEST_CASE("cross-section table loads from csv") {
  const std::string path = "fiber_gamma_test.csv";
  {
    std::ofstream f(path);
    f << "# placeholder\ndelta_lambda_nm,gamma_per_km_nm\n-40,2e-10\n40,2e-10\n";
  }
  RamanCrossSectionTable table = RamanCrossSectionTable::load_csv(path);
  CHECK(table.gamma(1585.2, 1555.62) == doctest::Approx(2e-10));
  std::remove(path.c_str());
}

TEST_CASE("multi-user Raman totals") {
  SystemConfig cfg = synthetic_cfg();
  const LaunchPolicy policy = LaunchPolicy::from_config(cfg);

  SUBCASE("single user keeps only the first terms") {
    cfg.num_users = 1;
    cfg.wavelength_plan = WavelengthPlan::make_grid(1555.62, 1585.2, 0.8, 1);
    const auto table = RamanCrossSectionTable::flat_placeholder(1e-9);
    const RamanTotals t = total_raman(cfg, cfg.wavelength_plan, policy, table);
    const double awg = db_to_linear(2.0 * cfg.awg_loss_db);
    const double p = launch_power(policy, classical_path_loss_db(cfg.l1_km, cfg.l0_km, cfg));
    CHECK(t.forward_w == doctest::Approx(awg * raman_forward(p, cfg.l0_km + cfg.l1_km, 1585.2,
                                                             1555.62, table, cfg))
                             .epsilon(1e-12));
    CHECK(t.backward_w == doctest::Approx(awg * raman_backward(p, cfg.l0_km + cfg.l1_km, 1585.2,
                                                               1555.62, table, cfg))
                              .epsilon(1e-12));
  }

  SUBCASE("zero cross section gives zero noise") {
    const auto table = RamanCrossSectionTable::flat_placeholder(0.0);
    const RamanTotals t = total_raman(cfg, cfg.wavelength_plan, policy, table);
    CHECK(t.forward_w == 0.0);
    CHECK(t.backward_w == 0.0);
  }

  SUBCASE("three users match the hand sum") {
    cfg.num_users = 3;
    cfg.wavelength_plan = WavelengthPlan::make_grid(1555.62, 1585.2, 0.8, 3);
    const auto table = RamanCrossSectionTable::flat_placeholder(1e-9);
    const RamanTotals t = total_raman(cfg, cfg.wavelength_plan, policy, table);

    // Brute-force oracle, written out term by term.
    const double awg = db_to_linear(2.0 * cfg.awg_loss_db);
    const double p = launch_power(policy, classical_path_loss_db(cfg.l1_km, cfg.l0_km, cfg));
    const double pre = std::exp(-cfg.alpha_raman_per_km * cfg.l1_km);
    double fwd = raman_forward(p, cfg.l0_km + cfg.l1_km, 1585.2, 1555.62, table, cfg);
    double bwd = raman_backward(p, cfg.l0_km + cfg.l1_km, 1585.2, 1555.62, table, cfg);
    for (int u = 1; u < 3; ++u) {
      const double ld = cfg.wavelength_plan.classical_nm[static_cast<size_t>(u)];
      fwd += raman_forward(p * pre, cfg.l0_km, ld, 1555.62, table, cfg);
      bwd += raman_backward(p, cfg.l0_km, ld, 1555.62, table, cfg);
    }
    CHECK(t.forward_w == doctest::Approx(fwd * awg).epsilon(1e-12));
    CHECK(t.backward_w == doctest::Approx(bwd * awg).epsilon(1e-12));
  }
}

TEST_CASE("Raman totals scale linearly in cross section and launch power") {
  SystemConfig cfg = synthetic_cfg();
  cfg.launch_mode = LaunchMode::kFixed;
  cfg.launch_fixed_dbm = 0.0;
  const LaunchPolicy p0 = LaunchPolicy::from_config(cfg);

  const auto g1 = RamanCrossSectionTable::flat_placeholder(1e-9);
  const auto g3 = RamanCrossSectionTable::flat_placeholder(3e-9);
  const RamanTotals t1 = total_raman(cfg, cfg.wavelength_plan, p0, g1);
  const RamanTotals t3 = total_raman(cfg, cfg.wavelength_plan, p0, g3);
  CHECK(t3.forward_w == doctest::Approx(3.0 * t1.forward_w).epsilon(1e-12));
  CHECK(t3.backward_w == doctest::Approx(3.0 * t1.backward_w).epsilon(1e-12));

  SystemConfig cfg10 = cfg;
  cfg10.launch_fixed_dbm = 10.0;
  const RamanTotals t10 = total_raman(cfg10, cfg10.wavelength_plan, LaunchPolicy::from_config(cfg10), g1);
  CHECK(t10.forward_w == doctest::Approx(10.0 * t1.forward_w).epsilon(1e-9));
}

TEST_CASE("total noise decomposition") {
  SystemConfig cfg;
  const ChannelBudget budget = ChannelBudget::make(0.8775, db_to_linear(10.0),
                                                   fiber_transmittance(5.0, 0.5, cfg), 0.3);

  SUBCASE("dark counts only") {
    const NoiseBudget n = total_noise(cfg, 0.0, budget, {0.0, 0.0});
    CHECK(n.raman_forward == 0.0);
    CHECK(n.raman_backward == 0.0);
    CHECK(n.ambient == 0.0);
    CHECK(n.dark == doctest::Approx(1e-8).epsilon(1e-12));
    CHECK(n.n_total == doctest::Approx(1e-8).epsilon(1e-12));
  }

  SUBCASE("everything zero") {
    cfg.dark_count_rate_per_ns = 0.0;
    const NoiseBudget n = total_noise(cfg, 0.0, budget, {0.0, 0.0});
    CHECK(n.n_total == 0.0);
  }

  SUBCASE("components sum to the total") {
    const NoiseBudget n = total_noise(cfg, 1e-3, budget, {2e-14, 3e-14});
    CHECK(n.n_total ==
          doctest::Approx(n.raman_forward + n.raman_backward + n.ambient + n.dark).epsilon(1e-12));
    CHECK(n.raman_forward > 0.0);
    CHECK(n.ambient ==
          doctest::Approx(0.3 * 1e-3 * budget.eta_fib * budget.eta_coup).epsilon(1e-12));
  }
}
