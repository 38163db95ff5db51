#include "doctest.h"

#include "skycell/error.hpp"
#include "skycell/ml.hpp"
#include "skycell/rng.hpp"

#include "json.hpp"

#include <cmath>
#include <set>
#include <sstream>

using namespace skycell;
using doctest::Approx;

namespace {

Dataset noisy(std::uint64_t seed, int n) {
  rng::Stream r(seed);
  Dataset d;
  for (int i = 0; i < n; ++i) {
    LabeledSample s;
    const bool drone = r.uniform() < 0.5;
    s.label = drone ? Label::Drone : Label::Terrestrial;
    s.ue_class = drone ? UeClass::Aerial : UeClass::Outdoor;
    s.height_m = drone ? 100 : 1.5;
    s.features = {(drone ? -45.0 : -60.0) + 8 * r.normal(), (drone ? 3.0 : 8.0) + 3 * r.normal()};
    d.samples.push_back(s);
  }
  return d;
}

ml::Model trained_logistic() {
  const auto [z, params] = standardize(noisy(1, 300));
  return ml::train_logistic(z, {});
}

} // namespace

TEST_CASE("model json round trip reproduces predictions") {
  const ml::Model models[] = {trained_logistic(), ml::train_tree(noisy(2, 300), {})};
  rng::Stream r(3);
  for (const auto& m : models) {
    const auto text = ml::model_to_json(m);
    const auto back = ml::model_from_json(text);
    CHECK(ml::model_type(back) == ml::model_type(m));
    CHECK(ml::model_to_json(back) == text);
    for (int i = 0; i < 500; ++i) {
      const FeatureVector f{r.uniform(-110, -20), r.uniform(0, 25)};
      CHECK(std::abs(ml::predict_proba(back, f) - ml::predict_proba(m, f)) <= 1e-12);
    }
  }
}

TEST_CASE("model json carries the documented fields") {
  const auto j = nlohmann::json::parse(ml::model_to_json(trained_logistic()));
  CHECK(j.at("format_version") == 1);
  CHECK(j.at("type") == "logistic");
  CHECK(j.at("feature_order") == nlohmann::json::array({"rssi_dbm", "rsrp_std_db"}));
  CHECK(j.at("standardization").is_object());
  CHECK(j.contains("parameters"));
  CHECK(j.contains("config"));
}

TEST_CASE("model json rejects bad documents") {
  auto j = nlohmann::json::parse(ml::model_to_json(trained_logistic()));
  j["format_version"] = 2;
  try {
    ml::model_from_json(j.dump());
    FAIL("expected version error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Version);
  }
  CHECK_THROWS_AS(ml::model_from_json("{"), Error);
  CHECK_THROWS_AS(ml::model_from_json("[]"), Error);
  auto k = nlohmann::json::parse(ml::model_to_json(trained_logistic()));
  k["type"] = "forest";
  CHECK_THROWS_AS(ml::model_from_json(k.dump()), Error);
  auto t = nlohmann::json::parse(ml::model_to_json(ml::Model{ml::train_tree(noisy(2, 300), {})}));
  t["parameters"]["nodes"][0]["left"] = 999;
  CHECK_THROWS_AS(ml::model_from_json(t.dump()), Error);
}

TEST_CASE("probability grid layout and bounds") {
  const auto m = trained_logistic();
  ml::GridBounds b{{0, 20, 5}, {-100, -30, 3}};
  const auto g = ml::probability_grid(m, b);
  REQUIRE(g.values.size() == 15);
  for (int iy = 0; iy < 3; ++iy)
    for (int ix = 0; ix < 5; ++ix) {
      const double expect = ml::predict_proba(m, FeatureVector{b.rssi.at(iy), b.rsrp_std.at(ix)});
      CHECK(g.at(ix, iy) == expect);
      CHECK(g.at(ix, iy) >= 0.0);
      CHECK(g.at(ix, iy) <= 1.0);
    }
  CHECK(b.rsrp_std.at(4) == 20.0);
  CHECK(b.rssi.at(0) == -100.0);
  std::ostringstream csv;
  ml::write_grid_csv(csv, g);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "rsrp_std_db,rssi_dbm,probability");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 15);
  CHECK_THROWS_AS(ml::probability_grid(m, ml::GridBounds{{0, 20, 1}, {-100, -30, 3}}), Error);
  CHECK_THROWS_AS(ml::probability_grid(m, ml::GridBounds{{5, 5, 3}, {-100, -30, 3}}), Error);
}

TEST_CASE("tree grid is piecewise constant on leaf regions") {
  const ml::Model m = ml::train_tree(noisy(4, 400), {2, 5});
  const auto g = ml::probability_grid(m, {});
  std::set<double> distinct(g.values.begin(), g.values.end());
  CHECK(distinct.size() <= 4);
}

TEST_CASE("logistic grid is monotone along its weights") {
  const auto m = trained_logistic();
  const auto& lm = std::get<ml::LogisticModel>(m);
  const auto g = ml::probability_grid(m, {});
  // Standardization scales are positive, so the raw-feature direction keeps the weight sign.
  const int sx = lm.weights[1] > 0 ? 1 : -1;
  for (int iy = 0; iy < g.bounds.rssi.steps; iy += 10)
    for (int ix = 1; ix < g.bounds.rsrp_std.steps; ++ix) CHECK(sx * (g.at(ix, iy) - g.at(ix - 1, iy)) >= 0.0);
}
