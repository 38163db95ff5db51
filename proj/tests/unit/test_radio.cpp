#include "doctest.h"

#include "skycell/error.hpp"
#include "skycell/radio.hpp"
#include "skycell/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace skycell;
using doctest::Approx;

TEST_CASE("los probability reference values") {
  CHECK(radio::los_probability(5000, 150) == 1.0);
  CHECK(radio::los_probability(10, 1.5) == 1.0);
  CHECK(radio::los_probability(18, 1.5) == 1.0);
  CHECK(radio::los_probability(100, 1.5) == Approx(0.3476708368).epsilon(1e-9));
  CHECK(radio::los_probability(1000, 50) == Approx(0.772051870462364).epsilon(1e-12));
  CHECK(radio::los_probability(80, 50) == 1.0);
  CHECK(radio::los_probability(1e5, 100) == 1.0);
}

TEST_CASE("los probability domain") {
  CHECK_THROWS_AS(radio::los_probability(10, 1.0), Error);
  CHECK_THROWS_AS(radio::los_probability(-1, 1.5), Error);
}

TEST_CASE("los probability is non-increasing in distance") {
  for (double h : {1.5, 10.0, 22.5, 23.0, 40.0, 60.0, 99.0}) {
    double prev = 1.0;
    for (double d = 0; d <= 5000; d += 7.3) {
      const double p = radio::los_probability(d, h);
      CHECK(p >= 0.0);
      CHECK(p <= prev + 1e-15);
      prev = p;
    }
  }
}

TEST_CASE("pathloss reference values") {
  CHECK(radio::pathloss_db(100, 2.0, 1.5, true) == Approx(78.0206).epsilon(1e-6));
  CHECK(radio::pathloss_db(1000, 2.0, 1.5, true) == Approx(100.0206).epsilon(1e-6));
  CHECK(radio::pathloss_db(300, 2.0, 1.5, true) == Approx(88.5172675171122).epsilon(1e-12));
  CHECK(radio::pathloss_db(500, 2.0, 1.5, false) == Approx(125.03634768273122).epsilon(1e-12));
  CHECK(radio::pathloss_db(500, 2.0, 50, false) == Approx(113.01670873899832).epsilon(1e-12));
}

TEST_CASE("nlos never below los") {
  for (double h : {1.5, 10.0, 30.0, 60.0, 200.0, 300.0})
    for (double d = 10; d < 5000; d *= 1.37) CHECK(radio::pathloss_db(d, 2.0, h, false) >= radio::pathloss_db(d, 2.0, h, true));
}

TEST_CASE("pathloss strictly increases with distance") {
  for (bool los : {true, false})
    for (double h : {1.5, 40.0, 150.0}) {
      double prev = -1e9;
      for (double d = 10; d < 5000; d *= 1.1) {
        const double pl = radio::pathloss_db(d, 2.0, h, los);
        CHECK(pl > prev);
        prev = pl;
      }
    }
}

TEST_CASE("pathloss domain") {
  CHECK_THROWS_AS(radio::pathloss_db(9.99, 2.0, 1.5, true), Error);
  CHECK_THROWS_AS(radio::pathloss_db(100, 0.0, 1.5, true), Error);
  CHECK_NOTHROW(radio::pathloss_db(10, 2.0, 1.5, true));
}

TEST_CASE("antenna pattern reference values") {
  CHECK(radio::antenna_gain_dbi(0, 6, 6) == Approx(8.0));
  CHECK(radio::antenna_gain_dbi(65, 6, 6) == Approx(-4.0));
  CHECK(radio::antenna_gain_dbi(180, 90, 6) == Approx(-22.0));
  CHECK(radio::antenna_gain_dbi(30, 10, 6) == Approx(3.52378698224852).epsilon(1e-12));
  CHECK(radio::antenna_gain_dbi(-100, 0, 6) == Approx(-22.0));
  CHECK(radio::antenna_gain_dbi(0, -20, 6) == Approx(-22.0));
}

TEST_CASE("antenna gain bounded and symmetric in azimuth") {
  for (double az = -180; az <= 180; az += 5)
    for (double el = -90; el <= 90; el += 5) {
      const double g = radio::antenna_gain_dbi(az, el, 6);
      CHECK(g <= 8.0);
      CHECK(g >= -22.0);
      CHECK(g == radio::antenna_gain_dbi(-az, el, 6));
    }
}

TEST_CASE("noise power") {
  CHECK(radio::noise_power_dbm(20e6, 0) == Approx(-100.9897).epsilon(1e-6));
  CHECK(radio::noise_power_dbm(20e6, 9) == Approx(-91.9897).epsilon(1e-6));
  CHECK(radio::noise_power_dbm(1, 0) == Approx(-174.0));
  CHECK_THROWS_AS(radio::noise_power_dbm(0, 0), Error);
}

TEST_CASE("rssi of one cell plus noise") {
  const double rssi = radio::linear_to_db(radio::db_to_linear(-80.0) + radio::db_to_linear(-101.0));
  CHECK(rssi == Approx(-79.9656).epsilon(1e-5));
}

TEST_CASE("wrap degrees") {
  CHECK(radio::wrap_degrees(190) == Approx(-170));
  CHECK(radio::wrap_degrees(-190) == Approx(170));
  CHECK(radio::wrap_degrees(360) == Approx(0));
  CHECK(radio::wrap_degrees(45) == Approx(45));
}

namespace {
UeDrop drop_at(double x, double y, double z, UeClass c, int idx = 0) { return UeDrop{{x, y, z}, c, idx}; }
} // namespace

TEST_CASE("single cell without shadowing: SINR is SNR") {
  NetworkLayout layout = build_hex_layout(0, 500.0, {});
  layout.cells.resize(1);
  ChannelParams p;
  p.shadow_sigma_los_db = p.shadow_sigma_nlos_db = 0;
  const auto s = compute_sample(layout, drop_at(150, 20, 1.5, UeClass::Outdoor), p, 5);
  REQUIRE(s.cells.size() == 1);
  const double noise = radio::noise_power_dbm(20e6, p.ue_noise_figure_db);
  CHECK(s.sinr_db == Approx(s.cells[0].rx_power_dbm - noise).epsilon(1e-12));
  CHECK(s.serving_cell_id == s.cells[0].cell_id);
}

TEST_CASE("single cell link budget by hand") {
  NetworkLayout layout = build_hex_layout(0, 500.0, {});
  layout.cells.resize(1);
  ChannelParams p;
  p.shadow_sigma_los_db = p.shadow_sigma_nlos_db = 0;
  // Boresight of the 0 deg sector, aerial above 100 m so LOS is certain.
  const auto s = compute_sample(layout, drop_at(300, 0, 150, UeClass::Aerial), p, 1);
  const double d3 = std::hypot(300.0, 125.0);
  const double elev = std::atan2(25.0 - 150.0, 300.0) * 180.0 / std::numbers::pi;
  const double expect =
      46.0 + radio::antenna_gain_dbi(0.0, elev, 6.0) - radio::pathloss_db(d3, 2.0, 150.0, true);
  CHECK(s.cells[0].los);
  CHECK(s.cells[0].rx_power_dbm == Approx(expect).epsilon(1e-12));
  CHECK(s.cells[0].rsrp_dbm == Approx(expect - 10 * std::log10(1200.0)).epsilon(1e-12));
}

TEST_CASE("indoor UEs are NLOS and pay penetration loss") {
  const auto layout = build_hex_layout(1, 500.0, {});
  ChannelParams p;
  p.shadow_sigma_los_db = p.shadow_sigma_nlos_db = 0;
  const auto s = compute_sample(layout, drop_at(60, 60, 1.5, UeClass::Indoor), p, 3);
  for (const auto& c : s.cells) CHECK_FALSE(c.los);
  ChannelParams q = p;
  q.indoor_penetration_db = 0;
  const auto t = compute_sample(layout, drop_at(60, 60, 1.5, UeClass::Indoor), q, 3);
  for (std::size_t i = 0; i < s.cells.size(); ++i) CHECK(t.cells[i].rx_power_dbm - s.cells[i].rx_power_dbm == Approx(20.0));
}

TEST_CASE("radio sample invariants on random drops") {
  const auto layout = build_hex_layout(2, 500.0, {});
  const ChannelParams p;
  rng::Stream r(77);
  for (int i = 0; i < 200; ++i) {
    const double z = (i % 3 == 0) ? 1.5 : r.uniform(2.0, 300.0);
    const auto s = compute_sample(layout, drop_at(r.uniform(-250, 250), r.uniform(-250, 250), z,
                                                  z > 1.5 ? UeClass::Aerial : UeClass::Outdoor, i),
                                  p, 1234);
    REQUIRE(s.cells.size() == layout.cells.size());
    CHECK(s.serving_cell_id == s.cells[0].cell_id);
    double total = radio::db_to_linear(radio::noise_power_dbm(20e6, 9.0));
    for (std::size_t k = 0; k < s.cells.size(); ++k) {
      total += radio::db_to_linear(s.cells[k].rx_power_dbm);
      CHECK(s.cells[k].rsrp_dbm == Approx(s.cells[k].rx_power_dbm - 10 * std::log10(1200.0)).epsilon(1e-12));
      if (k > 0) {
        const bool ordered = s.cells[k - 1].rsrp_dbm > s.cells[k].rsrp_dbm ||
                             (s.cells[k - 1].rsrp_dbm == s.cells[k].rsrp_dbm && s.cells[k - 1].cell_id < s.cells[k].cell_id);
        CHECK(ordered);
      }
    }
    CHECK(radio::db_to_linear(s.rssi_dbm) == Approx(total).epsilon(1e-9));
    CHECK(s.rssi_dbm >= s.cells[0].rx_power_dbm);
  }
}

TEST_CASE("sample depends only on seed, drop index and geometry") {
  const auto layout = build_hex_layout(2, 500.0, {});
  const ChannelParams p;
  const auto a = compute_sample(layout, drop_at(100, -40, 60, UeClass::Aerial, 17), p, 9);
  const auto b = compute_sample(layout, drop_at(100, -40, 60, UeClass::Aerial, 17), p, 9);
  const auto c = compute_sample(layout, drop_at(100, -40, 60, UeClass::Aerial, 18), p, 9);
  CHECK(a.rssi_dbm == b.rssi_dbm);
  CHECK(a.sinr_db == b.sinr_db);
  for (std::size_t i = 0; i < a.cells.size(); ++i) CHECK(a.cells[i].rsrp_dbm == b.cells[i].rsrp_dbm);
  CHECK(a.rssi_dbm != c.rssi_dbm);
}

TEST_CASE("sort tie-break by cell id") {
  std::vector<PerCellMeasurement> cells{{5, -80, 0, false}, {2, -80, 0, false}, {9, -70, 0, false}, {1, -90, 0, false}};
  std::mt19937 g(1);
  for (int k = 0; k < 20; ++k) {
    std::shuffle(cells.begin(), cells.end(), g);
    sort_measurements(cells);
    CHECK(cells[0].cell_id == 9);
    CHECK(cells[1].cell_id == 2);
    CHECK(cells[2].cell_id == 5);
    CHECK(cells[3].cell_id == 1);
  }
}

TEST_CASE("channel params validation") {
  ChannelParams p;
  p.shadow_sigma_los_db = -1;
  CHECK_THROWS_AS(p.validate(), Error);
  ChannelParams q;
  q.n_subcarriers = 0;
  CHECK_THROWS_AS(q.validate(), Error);
}
