#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "hdqkd/owc.hpp"
#include "hdqkd/units.hpp"

using namespace hdqkd;

TEST_CASE("lambert mode number") {
  CHECK(lambert_mode(60.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lambert_mode(70.0) == doctest::Approx(0.646058770349).epsilon(1e-9));
  CHECK(lambert_mode(1.0) == doctest::Approx(4550.70487557).epsilon(1e-9));
  CHECK_THROWS_AS(lambert_mode(0.0), std::invalid_argument);
  CHECK_THROWS_AS(lambert_mode(90.0), std::invalid_argument);
}

TEST_CASE("lambert mode grows as the beam narrows") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(1.0, 89.0);
  for (int i = 0; i < 100; ++i) {
    double a = angle(rng);
    double b = angle(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    CHECK(lambert_mode(a) > lambert_mode(b));
  }
}

TEST_CASE("concentrator gain") {
  const double fov = deg_to_rad(6.0);
  CHECK(concentrator_gain(deg_to_rad(10.0), fov, 1.5) == 0.0);
  CHECK(concentrator_gain(0.0, fov, 1.5) == doctest::Approx(205.927044677).epsilon(1e-9));
  // Closed interval: the boundary angle keeps the interior value.
  CHECK(concentrator_gain(fov, fov, 1.5) == concentrator_gain(0.0, fov, 1.5));
}

TEST_CASE("dc gain at the nominal full-alignment geometry") {
  const SystemConfig cfg;
  const Geometry geom = full_alignment_geometry(cfg);
  CHECK(geom.distance_m == doctest::Approx(4.12310562562).epsilon(1e-11));
  CHECK(geom.phi_rad == 0.0);
  CHECK(geom.psi_rad == 0.0);
  // Frozen regression constant for the default A and n_i.
  CHECK(dc_gain(geom, cfg) == doctest::Approx(0.877523372439).epsilon(1e-9));
}

TEST_CASE("dc gain is zero outside the field of view") {
  const SystemConfig cfg;
  Geometry geom = full_alignment_geometry(cfg);
  geom.psi_rad = deg_to_rad(6.5);
  CHECK(dc_gain(geom, cfg) == 0.0);
}

TEST_CASE("dc gain follows the inverse square of distance") {
  SystemConfig cfg;
  cfg.telescope_area_m2 = 1e-6;  // keep both points clear of the unity clamp
  Geometry geom = full_alignment_geometry(cfg);
  const double near = dc_gain(geom, cfg);
  geom.distance_m *= 2.0;
  CHECK(dc_gain(geom, cfg) == doctest::Approx(near / 4.0).epsilon(1e-12));
}

TEST_CASE("dc gain clamps at unity for degenerate short range") {
  const SystemConfig cfg;
  Geometry geom{0.05, 0.0, 0.0};
  CHECK(dc_gain(geom, cfg) == 1.0);
}

TEST_CASE("dc gain is non-increasing in distance and incidence angle") {
  SystemConfig cfg;
  cfg.telescope_area_m2 = 1e-6;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(1.0, 20.0);
  std::uniform_real_distribution<double> psi(0.0, deg_to_rad(6.0));
  for (int i = 0; i < 100; ++i) {
    double d1 = dist(rng), d2 = dist(rng);
    if (d1 > d2) std::swap(d1, d2);
    double p1 = psi(rng), p2 = psi(rng);
    if (p1 > p2) std::swap(p1, p2);
    CHECK(dc_gain({d1, 0.0, p1}, cfg) >= dc_gain({d2, 0.0, p1}, cfg));
    CHECK(dc_gain({d1, 0.0, p1}, cfg) >= dc_gain({d1, 0.0, p2}, cfg));
  }
}

TEST_CASE("geometry escape hatch matches the built-in placement") {
  const SystemConfig cfg;
  const Geometry fixed = full_alignment_geometry(cfg);
  const Geometry derived = geometry_between(
      {0.0, 0.0, 0.0}, {cfg.room_x / 2, cfg.room_y / 2, cfg.room_z},
      {cfg.room_x / 2, cfg.room_y / 2, cfg.room_z}, {-cfg.room_x / 2, -cfg.room_y / 2, -cfg.room_z});
  CHECK(derived.distance_m == doctest::Approx(fixed.distance_m).epsilon(1e-12));
  CHECK(derived.phi_rad == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(derived.psi_rad == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("geometric ambient model basics") {
  const SystemConfig cfg;
  GeometricAmbientModel model;
  CHECK(model.photons_per_gate(0.0, cfg) == 0.0);
  CHECK_FALSE(model.pins_total_noise());
  const double at_1e5 = model.photons_per_gate(1e-5, cfg);
  CHECK(at_1e5 > 0.0);
  // Linear in PSD.
  CHECK(model.photons_per_gate(2e-5, cfg) == doctest::Approx(2.0 * at_1e5).epsilon(1e-12));
}

TEST_CASE("ambient models are monotone in PSD") {
  const SystemConfig cfg;
  GeometricAmbientModel geometric;
  AmbientNoiseTable table({{1e-7, 2e-8}, {1e-5, 5e-7}, {1e-4, 6e-6}});
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> exp_dist(-8.0, -3.0);
  for (int i = 0; i < 200; ++i) {
    double a = std::pow(10.0, exp_dist(rng));
    double b = std::pow(10.0, exp_dist(rng));
    if (a > b) std::swap(a, b);
    CHECK(geometric.photons_per_gate(a, cfg) <= geometric.photons_per_gate(b, cfg));
    CHECK(table.photons_per_gate(a, cfg) <= table.photons_per_gate(b, cfg));
  }
}

TEST_CASE("ambient table interpolates and clamps at the ends") {
  const SystemConfig cfg;
  AmbientNoiseTable table({{1e-6, 1e-7}, {3e-6, 3e-7}});
  CHECK(table.pins_total_noise());
  CHECK(table.photons_per_gate(2e-6, cfg) == doctest::Approx(2e-7).epsilon(1e-12));
  CHECK(table.photons_per_gate(1e-9, cfg) == doctest::Approx(1e-7));
  CHECK(table.photons_per_gate(1.0, cfg) == doctest::Approx(3e-7));
}

TEST_CASE("ambient table rejects bad rows") {
  CHECK_THROWS(AmbientNoiseTable({}));
  CHECK_THROWS(AmbientNoiseTable({{1e-6, 1e-7}, {1e-6, 2e-7}}));           // duplicate PSD
  CHECK_THROWS(AmbientNoiseTable({{1e-6, 2e-7}, {2e-6, 1e-7}}));           // decreasing noise
  CHECK_THROWS(AmbientNoiseTable({{1e-6, -1e-7}}));                        // negative noise
}

TEST_CASE("ambient table loads from csv") {
  const std::string path = "owc_ambient_test.csv";
  {
    std::ofstream f(path);
    f << "# comment\npsd_w_per_nm,n_total_per_gate\n1e-7,1e-8\n1e-5,1e-6\n";
  }
  AmbientNoiseTable table = AmbientNoiseTable::load_csv(path);
  const SystemConfig cfg;
  CHECK(table.photons_per_gate(1e-7, cfg) == doctest::Approx(1e-8));
  CHECK(table.photons_per_gate(1e-5, cfg) == doctest::Approx(1e-6));
  std::remove(path.c_str());
}
