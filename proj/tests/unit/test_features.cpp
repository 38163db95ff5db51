#include "doctest.h"

#include "skycell/error.hpp"
#include "skycell/features.hpp"
#include "skycell/rng.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace skycell;
using doctest::Approx;

namespace {

RadioSample sample_with(std::vector<double> rsrps, double rssi = -60.0) {
  RadioSample s;
  s.rssi_dbm = rssi;
  for (std::size_t i = 0; i < rsrps.size(); ++i) s.cells.push_back({static_cast<int>(i), rsrps[i], rsrps[i] + 30.8, true});
  sort_measurements(s.cells);
  if (!s.cells.empty()) s.serving_cell_id = s.cells.front().cell_id;
  return s;
}

LabeledSample labeled(double rssi, double std_db, Label label, double h = 1.5, int idx = 0) {
  LabeledSample s;
  s.features = {rssi, std_db};
  s.label = label;
  s.height_m = h;
  s.ue_class = label == Label::Drone ? UeClass::Aerial : UeClass::Outdoor;
  s.drop_index = idx;
  return s;
}

} // namespace

TEST_CASE("rsrp std reference values") {
  CHECK(extract_features(sample_with(std::vector<double>(8, -80.0))).rsrp_std_db == 0.0);
  CHECK(extract_features(sample_with({-70, -70, -70, -70, -90, -90, -90, -90})).rsrp_std_db == Approx(10.0));
  CHECK(extract_features(sample_with({-70, -90})).rsrp_std_db == Approx(10.0));
  CHECK(extract_features(sample_with({-70, -70, -70, -70, -90, -90, -90, -90}, -55.5)).rssi_dbm == -55.5);
}

TEST_CASE("only the eight strongest count") {
  const auto a = extract_features(sample_with({-60, -61, -63, -64, -66, -70, -71, -72}));
  const auto b = extract_features(sample_with({-60, -61, -63, -64, -66, -70, -71, -72, -140, -150}));
  CHECK(a.rsrp_std_db == b.rsrp_std_db);
}

TEST_CASE("fewer than two cells is rejected") {
  CHECK_THROWS_AS(extract_features(sample_with({-70})), Error);
  CHECK_THROWS_AS(extract_features(sample_with({})), Error);
}

TEST_CASE("features are permutation invariant") {
  rng::Stream r(4);
  std::mt19937 g(4);
  for (int t = 0; t < 50; ++t) {
    RadioSample s;
    s.rssi_dbm = -50;
    for (int i = 0; i < 12; ++i) s.cells.push_back({i, r.uniform(-120, -60), 0, false});
    const double ref = extract_features(s).rsrp_std_db;
    for (int k = 0; k < 5; ++k) {
      std::shuffle(s.cells.begin(), s.cells.end(), g);
      CHECK(extract_features(s).rsrp_std_db == ref);
    }
  }
}

TEST_CASE("labels follow ue class") {
  auto s = sample_with({-70, -80});
  s.drop.ue_class = UeClass::Aerial;
  s.drop.position.z = 60;
  CHECK(label_sample(s).label == Label::Drone);
  s.drop.ue_class = UeClass::Indoor;
  s.drop.position.z = 1.5;
  CHECK(label_sample(s).label == Label::Terrestrial);
}

TEST_CASE("standardize two-point column") {
  Dataset d;
  d.samples = {labeled(0, 0, Label::Terrestrial), labeled(2, 4, Label::Drone)};
  const auto [z, params] = standardize(d);
  CHECK(z.samples[0].features.rssi_dbm == Approx(-1.0));
  CHECK(z.samples[1].features.rssi_dbm == Approx(1.0));
  CHECK(params.mean[0] == Approx(1.0));
  CHECK(params.std[0] == Approx(1.0));
  CHECK(params.std[1] == Approx(2.0));
}

TEST_CASE("standardize rejects degenerate columns") {
  Dataset one;
  one.samples = {labeled(-50, 3, Label::Drone)};
  CHECK_THROWS_AS(standardize(one), Error);
  Dataset constant;
  constant.samples = {labeled(-50, 3, Label::Drone), labeled(-50, 4, Label::Terrestrial)};
  CHECK_THROWS_AS(standardize(constant), Error);
  CHECK_THROWS_AS(standardize(Dataset{}), Error);
}

TEST_CASE("standardization properties on random data") {
  rng::Stream r(8);
  Dataset d;
  for (int i = 0; i < 500; ++i)
    d.samples.push_back(labeled(r.uniform(-100, -30), r.uniform(0, 20), i % 2 ? Label::Drone : Label::Terrestrial));
  const auto [z, params] = standardize(d);
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    double m = 0, v = 0;
    for (const auto& s : z.samples) m += s.features[f];
    m /= 500;
    for (const auto& s : z.samples) v += (s.features[f] - m) * (s.features[f] - m);
    v /= 500;
    CHECK(std::abs(m) < 1e-9);
    CHECK(std::abs(std::sqrt(v) - 1.0) < 1e-9);
  }
  const auto back = unstandardize(z);
  CHECK_FALSE(back.standardization.has_value());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(std::abs(back.samples[i].features.rssi_dbm - d.samples[i].features.rssi_dbm) < 1e-9);
    CHECK(std::abs(back.samples[i].features.rsrp_std_db - d.samples[i].features.rsrp_std_db) < 1e-9);
  }
  const auto again = apply_standardization(d, params);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(again.samples[i].features.rssi_dbm == z.samples[i].features.rssi_dbm);
  CHECK_THROWS_AS(standardize(z), Error);
}

TEST_CASE("stratified split keeps each stratum's share") {
  Dataset d;
  int idx = 0;
  for (double h : {1.5, 15.0, 300.0})
    for (int i = 0; i < 37; ++i) d.samples.push_back(labeled(-50 - i, 1, h > 1.5 ? Label::Drone : Label::Terrestrial, h, idx++));
  const auto [train, test] = stratified_split(d, 0.7, 3);
  CHECK(train.size() + test.size() == d.size());
  for (double h : {1.5, 15.0, 300.0}) {
    const auto n = std::count_if(train.samples.begin(), train.samples.end(), [&](const auto& s) { return s.height_m == h; });
    CHECK(n == 26); // round(0.7 * 37)
  }
  const auto [again, rest] = stratified_split(d, 0.7, 3);
  for (std::size_t i = 0; i < train.size(); ++i) CHECK(train.samples[i].drop_index == again.samples[i].drop_index);
  const auto [all, none] = stratified_split(d, 1.0, 3);
  CHECK(all.size() == d.size());
  CHECK(none.empty());
  CHECK_THROWS_AS(stratified_split(d, 0.0, 3), Error);
  CHECK_THROWS_AS(stratified_split(d, 1.5, 3), Error);
}

TEST_CASE("dataset csv round trip") {
  Dataset d;
  d.samples = {labeled(-61.123456789012345, 3.25, Label::Terrestrial, 1.5, 0), labeled(-45.5, 0.1, Label::Drone, 300, 1)};
  d.samples[0].ue_class = UeClass::Indoor;
  std::ostringstream out;
  write_dataset_csv(out, d);
  CHECK(out.str().rfind("drop_index,ue_class,height_m,rssi_dbm,rsrp_std_db,label\n", 0) == 0);
  std::istringstream in(out.str());
  const auto back = read_dataset_csv(in);
  REQUIRE(back.size() == 2);
  CHECK(back.samples[0].features.rssi_dbm == d.samples[0].features.rssi_dbm);
  CHECK(back.samples[0].ue_class == UeClass::Indoor);
  CHECK(back.samples[1].label == Label::Drone);
  CHECK(back.samples[1].height_m == 300.0);
}

TEST_CASE("dataset csv errors carry line and column") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_dataset_csv(in);
  };
  const std::string header = "drop_index,ue_class,height_m,rssi_dbm,rsrp_std_db,label\n";
  CHECK(parse(header).empty());
  CHECK_THROWS_AS(parse("a,b\n"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  try {
    parse(header + "0,outdoor,1.5,-60,2,0\n1,aerial,60,-50,x,1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 5);
  }
  CHECK_THROWS_AS(parse(header + "0,outdoor,1.5,-60,2,1\n"), ParseError);
  CHECK_THROWS_AS(parse(header + "0,outdoor,1.5,-60,-2,0\n"), ParseError);
  CHECK_THROWS_AS(parse(header + "0,outdoor,1.5,-60,2\n"), ParseError);
}

TEST_CASE("generate dataset: empty placement and thread independence") {
  const auto layout = build_hex_layout(1, 500.0, {});
  CHECK(generate_dataset(layout, PlacementSpec{}, {}, 1).empty());
  PlacementSpec spec{20, 20, 10, {30, 300}};
  const auto a = generate_dataset(layout, spec, {}, 5, 1);
  const auto b = generate_dataset(layout, spec, {}, 5, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.samples[i].features.rssi_dbm == b.samples[i].features.rssi_dbm);
    CHECK(a.samples[i].features.rsrp_std_db == b.samples[i].features.rsrp_std_db);
    CHECK(a.samples[i].drop_index == static_cast<int>(i));
  }
}

TEST_CASE("aerial 300 m and outdoor classes have separated centroids") {
  const auto layout = build_hex_layout(2, 500.0, {});
  const auto data = generate_dataset(layout, PlacementSpec{0, 200, 200, {300}}, {}, 11);
  const auto [z, params] = standardize(data);
  std::vector<LabeledSample> drones, ground;
  for (const auto& s : z.samples) (s.label == Label::Drone ? drones : ground).push_back(s);
  // Direct centroid arithmetic.
  double dx = 0, dy = 0;
  for (const auto& s : drones) { dx += s.features.rssi_dbm / 200; dy += s.features.rsrp_std_db / 200; }
  for (const auto& s : ground) { dx -= s.features.rssi_dbm / 200; dy -= s.features.rsrp_std_db / 200; }
  CHECK(centroid_distance(drones, ground) == Approx(std::hypot(dx, dy)).epsilon(1e-12));
  CHECK(centroid_distance(drones, ground) > 0.5);
}
