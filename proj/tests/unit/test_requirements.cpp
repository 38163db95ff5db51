#include "doctest.h"

#include "skycell/error.hpp"
#include "skycell/requirements.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace skycell;
using namespace skycell::requirements;
using doctest::Approx;

namespace {

std::vector<std::vector<std::string>> read_tsv(const std::string& name) {
  std::ifstream in(std::string(SKYCELL_GOLDEN_DIR) + "/" + name);
  REQUIRE(in.good());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line); // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, '\t')) cells.push_back(cell);
    while (cells.size() < 5) cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

KpiReport all_passing(const RequirementProfile& p) {
  KpiReport k;
  k.uplink_rate_bps = p.uplink_rate_bps;
  k.downlink_rate_bps = p.downlink_rate_bps.value_or(0.0);
  k.e2e_latency_ms = p.e2e_latency_ms;
  k.network_latency_ms = p.network_latency_ms;
  k.positioning_accuracy_m = p.positioning_accuracy_m;
  k.max_reliable_height_m = p.altitude_max_m;
  return k;
}

} // namespace

TEST_CASE("every table 1 cell appears in exactly one level entry") {
  const auto& reg = Registry::builtin();
  const auto rows = read_tsv("table1.tsv");
  CHECK(rows.size() == 19);
  for (const auto& row : rows) {
    int matches = 0;
    for (const auto& e : reg.levels()) {
      if (e.dimension != row[0] || e.level != std::stoi(row[1])) continue;
      ++matches;
      CHECK(e.values.at(0) == row[2]);
      if (!row[3].empty()) CHECK(e.values.at(1) == row[3]);
      CHECK(e.typical_use == row[4]);
    }
    CHECK_MESSAGE(matches == 1, row[0] << " level " << row[1]);
  }
  CHECK(reg.levels().size() == rows.size());
}

TEST_CASE("table 2 rows are reproduced") {
  const auto& reg = Registry::builtin();
  const auto rows = read_tsv("table2.tsv");
  REQUIRE(rows.size() == reg.rates_5g().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = reg.rates_5g()[i];
    CHECK(r.fc_ghz == std::stod(rows[i][0]));
    CHECK(r.bw_hz == std::stod(rows[i][1]));
    CHECK(r.cell_radius_m == std::stod(rows[i][2]));
    CHECK(r.antenna_config == rows[i][3]);
    CHECK(r.dl_peak_bps == std::stod(rows[i][4]));
  }
}

TEST_CASE("expected 5g rates lookups") {
  const auto& reg = Registry::builtin();
  const auto a = reg.expected_5g_rates(3.5, 300);
  REQUIRE(a.size() == 1);
  CHECK(a[0].dl_peak_bps == 1.3e9);
  CHECK(a[0].ul_peak_bps == 175e6);
  CHECK(a[0].dl_edge_bps == 200e6);
  CHECK(a[0].ul_edge_bps == 4e6);
  CHECK(reg.expected_5g_rates(3.5, 200)[0].dl_edge_bps == 450e6);
  CHECK(reg.expected_5g_rates(3.5, 100)[0].ul_edge_bps == 40e6);
  const auto mm = reg.expected_5g_rates(26, 50);
  REQUIRE(mm.size() == 2);
  CHECK(mm[0].dl_peak_bps == 6.5e9);
  CHECK(mm[1].dl_peak_bps == 13e9);
  CHECK(mm[0].dl_edge_bps == 5e9);
  CHECK(mm[1].dl_edge_bps == 10e9);
  CHECK(mm[0].ul_peak_bps == 1.75e9);
  CHECK(mm[0].ul_edge_bps == 200e6);
  try {
    reg.expected_5g_rates(28, 50);
    FAIL("expected lookup failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotFound);
    CHECK(std::string(e.what()).find("26") != std::string::npos);
  }
}

TEST_CASE("profiles compose table 1 levels") {
  const auto& reg = Registry::builtin();
  CHECK(reg.application_names().size() == 12);
  const auto c = reg.lookup("control_and_command");
  CHECK(c.uplink_rate_bps == 200e3);
  CHECK(c.downlink_rate_bps.value() == 600e3);
  CHECK(c.e2e_latency_ms == 400);
  CHECK(c.network_latency_ms == 40);
  const auto rrc = reg.lookup("remote_real_time_control");
  CHECK(rrc.e2e_latency_ms == 100);
  CHECK(rrc.network_latency_ms == 20);
  CHECK(reg.lookup("1080p_transmission").uplink_rate_bps == 4e6);
  CHECK(reg.lookup("4k_video").uplink_rate_bps == 15e6);
  CHECK(reg.lookup("8k_video_inspection").uplink_rate_bps == 60e6);
  CHECK(reg.lookup("ar_vr").uplink_rate_bps == 1e9);
  CHECK(reg.lookup("aerial_surveillance").positioning_accuracy_m == 50);
  CHECK(reg.lookup("farmland_mapping").positioning_accuracy_m == Approx(0.1));
  CHECK(reg.lookup("farmland_mapping").altitude_max_m == 300);
  CHECK(reg.lookup("vegetation_protection").altitude_max_m == 10);
  CHECK(reg.lookup("upper_air_pipeline_inspection").altitude_max_m == 3000);
  CHECK(reg.lookup("logistics").coverage_scenario == CoverageScenario::WideArea);
  CHECK_FALSE(reg.lookup("4k_video").downlink_rate_bps.has_value());
}

TEST_CASE("unknown application lists valid names") {
  try {
    Registry::builtin().lookup("crop_dusting");
    FAIL("expected not found");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotFound);
    const std::string msg = e.what();
    CHECK(msg.find("control_and_command") != std::string::npos);
    CHECK(msg.find("logistics") != std::string::npos);
  }
}

TEST_CASE("builtin registry equals the data file") {
  std::ifstream in(SKYCELL_REGISTRY_JSON);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto reg = Registry::from_json(ss.str());
  CHECK(reg.application_names() == Registry::builtin().application_names());
  CHECK(Registry::load(SKYCELL_REGISTRY_JSON).levels().size() == Registry::builtin().levels().size());
  CHECK_THROWS_AS(Registry::from_json("{\"schema_version\": 9}"), Error);
  CHECK_THROWS_AS(Registry::from_json("not json"), Error);
}

TEST_CASE("gate verdicts") {
  const auto p = Registry::builtin().lookup("control_and_command");
  CHECK(gate(all_passing(p), p).verdict == Verdict::Pass);
  CHECK(gate(KpiReport{}, p).verdict == Verdict::PassWithGaps);
  auto k = all_passing(p);
  k.e2e_latency_ms = 401;
  CHECK(gate(k, p).verdict == Verdict::Fail);
  k.positioning_accuracy_m.reset();
  CHECK(gate(k, p).verdict == Verdict::Fail); // fail beats gaps
}

TEST_CASE("gate boundaries are inclusive") {
  const auto p = Registry::builtin().lookup("remote_real_time_control");
  auto k = all_passing(p);
  const auto r = gate(k, p);
  for (const auto& d : r.dimensions) CHECK(d.status == DimensionStatus::Pass);
  k.uplink_rate_bps = std::nextafter(p.uplink_rate_bps, 0.0);
  CHECK(gate(k, p).verdict == Verdict::Fail);
  k = all_passing(p);
  k.network_latency_ms = std::nextafter(p.network_latency_ms, 1e9);
  CHECK(gate(k, p).verdict == Verdict::Fail);
}

TEST_CASE("improving a KPI never worsens the verdict") {
  auto rank = [](Verdict v) { return v == Verdict::Pass ? 0 : v == Verdict::PassWithGaps ? 1 : 2; };
  for (const auto& name : Registry::builtin().application_names()) {
    const auto p = Registry::builtin().lookup(name);
    for (double f : {0.25, 0.5, 0.99, 1.0, 1.01, 2.0}) {
      KpiReport worse;
      worse.uplink_rate_bps = p.uplink_rate_bps * f;
      worse.e2e_latency_ms = p.e2e_latency_ms / f;
      KpiReport better = worse;
      better.uplink_rate_bps = *worse.uplink_rate_bps * 1.5;
      better.e2e_latency_ms = *worse.e2e_latency_ms / 1.5;
      CHECK(rank(gate(better, p).verdict) <= rank(gate(worse, p).verdict));
    }
  }
}

TEST_CASE("kpi json parsing") {
  const auto k = kpi_from_json(R"({"uplink_rate_bps": 5e6, "e2e_latency_ms": null, "source": "simulated"})");
  CHECK(*k.uplink_rate_bps == 5e6);
  CHECK_FALSE(k.e2e_latency_ms.has_value());
  CHECK(k.source == KpiSource::Simulated);
  CHECK_THROWS_AS(kpi_from_json(R"({"uplink": 1})"), Error);
  CHECK_THROWS_AS(kpi_from_json(R"({"uplink_rate_bps": -1})"), Error);
  CHECK_THROWS_AS(kpi_from_json(R"({"uplink_rate_bps": "fast"})"), Error);
  CHECK_THROWS_AS(kpi_from_json("[1]"), Error);
  CHECK_THROWS_AS(kpi_from_json("{"), Error);
  CHECK(gate(kpi_from_json("{}"), Registry::builtin().lookup("ar_vr")).verdict == Verdict::PassWithGaps);
}

TEST_CASE("report serialization") {
  const auto p = Registry::builtin().lookup("4k_video");
  KpiReport k;
  k.uplink_rate_bps = 1e6;
  const auto r = gate(k, p);
  const auto json = report_to_json(r);
  CHECK(json.find("\"verdict\": \"fail\"") != std::string::npos);
  CHECK(json.find("\"observed\": null") != std::string::npos);
  const auto text = report_to_text(r);
  CHECK(text.find("uplink_rate_bps") != std::string::npos);
  CHECK(text.find("verdict: fail") != std::string::npos);
}
