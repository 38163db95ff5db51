#include "skycell/ml.hpp"

#include "skycell/error.hpp"

#include <cmath>
#include <ostream>

#include "json.hpp"

#include "csv_format.hpp"

namespace skycell::ml {

using nlohmann::json;

double predict_proba(const Model& model, const FeatureVector& raw) {
  return std::visit([&](const auto& m) { return predict_proba(m, raw); }, model);
}

std::string_view model_type(const Model& model) {
  return std::holds_alternative<LogisticModel>(model) ? "logistic" : "tree";
}

Metrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
  Metrics m{tp, fp, tn, fn};
  const std::size_t total = m.total();
  m.accuracy = total ? static_cast<double>(tp + tn) / static_cast<double>(total) : 0.0;
  m.precision = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  m.recall = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  return m;
}

Metrics evaluate(const Model& model, const Dataset& test, double threshold) {
  const Dataset raw = unstandardize(test);
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (const auto& s : raw.samples) {
    const bool predicted = predict_proba(model, s.features) >= threshold;
    const bool actual = s.label == Label::Drone;
    if (predicted && actual) ++tp;
    else if (predicted) ++fp;
    else if (actual) ++fn;
    else ++tn;
  }
  return metrics_from_counts(tp, fp, tn, fn);
}

ProbabilityGrid probability_grid(const Model& model, const GridBounds& bounds) {
  for (const GridAxis* axis : {&bounds.rsrp_std, &bounds.rssi}) {
    if (axis->steps < 2) throw Error(ErrorKind::InvalidArgument, "grid needs at least 2 steps per axis");
    if (!(axis->min < axis->max) || !std::isfinite(axis->min) || !std::isfinite(axis->max))
      throw Error(ErrorKind::InvalidArgument, "grid bounds require min < max");
  }
  ProbabilityGrid grid;
  grid.bounds = bounds;
  grid.values.reserve(static_cast<std::size_t>(bounds.rsrp_std.steps) *
                      static_cast<std::size_t>(bounds.rssi.steps));
  for (int iy = 0; iy < bounds.rssi.steps; ++iy)
    for (int ix = 0; ix < bounds.rsrp_std.steps; ++ix)
      grid.values.push_back(
          predict_proba(model, FeatureVector{bounds.rssi.at(iy), bounds.rsrp_std.at(ix)}));
  return grid;
}

void write_grid_csv(std::ostream& out, const ProbabilityGrid& grid) {
  out << "rsrp_std_db,rssi_dbm,probability\n";
  for (int iy = 0; iy < grid.bounds.rssi.steps; ++iy)
    for (int ix = 0; ix < grid.bounds.rsrp_std.steps; ++ix)
      out << csv::num(grid.bounds.rsrp_std.at(ix)) << ',' << csv::num(grid.bounds.rssi.at(iy)) << ','
          << csv::num(grid.at(ix, iy)) << '\n';
}

namespace {

json standardization_json(const std::optional<Standardization>& st) {
  if (!st) return nullptr;
  return {{"mean", st->mean}, {"std", st->std}};
}

std::optional<Standardization> standardization_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  Standardization st;
  st.mean = j.at("mean").get<std::array<double, kFeatureCount>>();
  st.std = j.at("std").get<std::array<double, kFeatureCount>>();
  for (std::size_t k = 0; k < kFeatureCount; ++k)
    if (!(st.std[k] > 0.0) || !std::isfinite(st.mean[k]))
      throw Error(ErrorKind::InvalidArgument, "standardization std must be > 0 and mean finite");
  return st;
}

} // namespace

std::string model_to_json(const Model& model) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["type"] = model_type(model);
  doc["feature_order"] = {"rssi_dbm", "rsrp_std_db"};
  if (const auto* lm = std::get_if<LogisticModel>(&model)) {
    doc["standardization"] = standardization_json(lm->standardization);
    doc["parameters"] = {{"weights", lm->weights}, {"bias", lm->bias}};
    doc["config"] = {{"learning_rate", lm->config.learning_rate},
                     {"max_iters", lm->config.max_iters},
                     {"tolerance", lm->config.tolerance},
                     {"l2", lm->config.l2}};
  } else {
    const auto& tm = std::get<TreeModel>(model);
    doc["standardization"] = standardization_json(tm.standardization);
    json nodes = json::array();
    for (const auto& n : tm.nodes) {
      json node = {{"drone_probability", n.drone_probability}, {"sample_count", n.sample_count}};
      if (!n.is_leaf()) {
        node["feature_index"] = n.feature_index;
        node["threshold"] = n.threshold;
        node["left"] = n.left;
        node["right"] = n.right;
      }
      nodes.push_back(std::move(node));
    }
    doc["parameters"] = {{"nodes", std::move(nodes)}};
    doc["config"] = {{"max_depth", tm.config.max_depth}, {"min_leaf", tm.config.min_leaf}};
  }
  return doc.dump(2) + "\n";
}

Model model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion)
      throw Error(ErrorKind::Version, "unsupported model format_version " + std::to_string(version) +
                                          " (expected " + std::to_string(kModelFormatVersion) + ")");
    const auto type = doc.at("type").get<std::string>();
    const auto& params = doc.at("parameters");
    const auto& cfg = doc.at("config");
    if (type == "logistic") {
      LogisticModel m;
      m.standardization = standardization_from(doc.at("standardization"));
      m.weights = params.at("weights").get<std::array<double, kFeatureCount>>();
      m.bias = params.at("bias").get<double>();
      m.config.learning_rate = cfg.at("learning_rate").get<double>();
      m.config.max_iters = cfg.at("max_iters").get<int>();
      m.config.tolerance = cfg.at("tolerance").get<double>();
      m.config.l2 = cfg.at("l2").get<double>();
      for (double w : m.weights)
        if (!std::isfinite(w)) throw Error(ErrorKind::InvalidArgument, "non-finite logistic weight");
      if (!std::isfinite(m.bias)) throw Error(ErrorKind::InvalidArgument, "non-finite logistic bias");
      return m;
    }
    if (type == "tree") {
      TreeModel m;
      m.standardization = standardization_from(doc.at("standardization"));
      m.config.max_depth = cfg.at("max_depth").get<int>();
      m.config.min_leaf = cfg.at("min_leaf").get<int>();
      for (const auto& jn : params.at("nodes")) {
        TreeNode n;
        n.drone_probability = jn.at("drone_probability").get<double>();
        n.sample_count = jn.at("sample_count").get<int>();
        if (jn.contains("feature_index")) {
          n.feature_index = jn.at("feature_index").get<int>();
          if (n.feature_index < 0)
            throw Error(ErrorKind::InvalidArgument, "internal node feature_index must be >= 0");
          n.threshold = jn.at("threshold").get<double>();
          n.left = jn.at("left").get<int>();
          n.right = jn.at("right").get<int>();
        }
        m.nodes.push_back(n);
      }
      validate_tree(m);
      return m;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown model type '" + type + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed model file: ") + e.what());
  }
}

} // namespace skycell::ml
