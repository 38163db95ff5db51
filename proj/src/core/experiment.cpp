#include "skycell/experiment.hpp"

#include "skycell/error.hpp"
#include "skycell/rng.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "json.hpp"

namespace skycell {

using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::InvalidArgument, "config." + path + ": " + what);
}

ojson to_ojson(const ExperimentConfig& c) {
  ojson j;
  j["schema_version"] = kConfigSchemaVersion;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["output_dir"] = c.output_dir;
  j["layout"] = {{"rings", c.rings},
                 {"isd_m", c.isd_m},
                 {"bs_height_m", c.cell.bs_height_m},
                 {"tx_power_dbm", c.cell.tx_power_dbm},
                 {"fc_ghz", c.cell.fc_ghz},
                 {"bw_hz", c.cell.bw_hz},
                 {"downtilt_deg", c.cell.downtilt_deg}};
  j["channel"] = {{"shadow_sigma_los_db", c.channel.shadow_sigma_los_db},
                  {"shadow_sigma_nlos_db", c.channel.shadow_sigma_nlos_db},
                  {"indoor_penetration_db", c.channel.indoor_penetration_db},
                  {"ue_noise_figure_db", c.channel.ue_noise_figure_db},
                  {"n_subcarriers", c.channel.n_subcarriers}};
  j["placement"] = {{"indoor", c.placement.indoor},
                    {"outdoor", c.placement.outdoor},
                    {"aerial_per_height", c.placement.aerial_per_height},
                    {"aerial_heights_m", c.placement.aerial_heights_m}};
  j["ml"] = {{"learning_rate", c.logistic.learning_rate},
             {"max_iters", c.logistic.max_iters},
             {"tolerance", c.logistic.tolerance},
             {"l2", c.logistic.l2},
             {"max_depth", c.tree.max_depth},
             {"min_leaf", c.tree.min_leaf},
             {"threshold", c.threshold},
             {"train_fraction", c.train_fraction}};
  j["grid"] = {{"rsrp_std_min", c.grid.rsrp_std.min},
               {"rsrp_std_max", c.grid.rsrp_std.max},
               {"rsrp_std_steps", c.grid.rsrp_std.steps},
               {"rssi_min", c.grid.rssi.min},
               {"rssi_max", c.grid.rssi.max},
               {"rssi_steps", c.grid.rssi.steps}};
  return j;
}

// Overlays `user` onto `tmpl`, rejecting unknown keys and type mismatches.
void overlay(ojson& tmpl, const ojson& user, const std::string& path) {
  if (!user.is_object()) config_error(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : user.items()) {
    const std::string here = path.empty() ? key : path + "." + key;
    if (!tmpl.contains(key)) config_error(here, "unknown key");
    ojson& slot = tmpl[key];
    if (slot.is_object()) {
      overlay(slot, value, here);
    } else if (slot.is_number_unsigned()) {
      if (!value.is_number_unsigned()) config_error(here, "expected a non-negative integer");
      slot = value;
    } else if (slot.is_number_integer()) {
      if (!value.is_number_integer()) config_error(here, "expected an integer");
      slot = value;
    } else if (slot.is_number()) {
      if (!value.is_number()) config_error(here, "expected a number");
      slot = value.get<double>();
    } else if (slot.is_string()) {
      if (!value.is_string()) config_error(here, "expected a string");
      slot = value;
    } else if (slot.is_array()) {
      if (!value.is_array()) config_error(here, "expected an array of numbers");
      for (const auto& v : value)
        if (!v.is_number()) config_error(here, "expected an array of numbers");
      slot = value;
    }
  }
}

ExperimentConfig from_ojson(const ojson& j) {
  ExperimentConfig c;
  if (j.at("schema_version").get<int>() != kConfigSchemaVersion)
    throw Error(ErrorKind::Version, "config.schema_version: expected " + std::to_string(kConfigSchemaVersion));
  c.seed = j.at("seed").get<std::uint64_t>();
  c.threads = j.at("threads").get<int>();
  c.output_dir = j.at("output_dir").get<std::string>();
  const auto& l = j.at("layout");
  c.rings = l.at("rings").get<int>();
  c.isd_m = l.at("isd_m").get<double>();
  c.cell.bs_height_m = l.at("bs_height_m").get<double>();
  c.cell.tx_power_dbm = l.at("tx_power_dbm").get<double>();
  c.cell.fc_ghz = l.at("fc_ghz").get<double>();
  c.cell.bw_hz = l.at("bw_hz").get<double>();
  c.cell.downtilt_deg = l.at("downtilt_deg").get<double>();
  const auto& ch = j.at("channel");
  c.channel.shadow_sigma_los_db = ch.at("shadow_sigma_los_db").get<double>();
  c.channel.shadow_sigma_nlos_db = ch.at("shadow_sigma_nlos_db").get<double>();
  c.channel.indoor_penetration_db = ch.at("indoor_penetration_db").get<double>();
  c.channel.ue_noise_figure_db = ch.at("ue_noise_figure_db").get<double>();
  c.channel.n_subcarriers = ch.at("n_subcarriers").get<int>();
  const auto& p = j.at("placement");
  c.placement.indoor = p.at("indoor").get<int>();
  c.placement.outdoor = p.at("outdoor").get<int>();
  c.placement.aerial_per_height = p.at("aerial_per_height").get<int>();
  c.placement.aerial_heights_m = p.at("aerial_heights_m").get<std::vector<double>>();
  const auto& m = j.at("ml");
  c.logistic.learning_rate = m.at("learning_rate").get<double>();
  c.logistic.max_iters = m.at("max_iters").get<int>();
  c.logistic.tolerance = m.at("tolerance").get<double>();
  c.logistic.l2 = m.at("l2").get<double>();
  c.tree.max_depth = m.at("max_depth").get<int>();
  c.tree.min_leaf = m.at("min_leaf").get<int>();
  c.threshold = m.at("threshold").get<double>();
  c.train_fraction = m.at("train_fraction").get<double>();
  const auto& g = j.at("grid");
  c.grid.rsrp_std = {g.at("rsrp_std_min").get<double>(), g.at("rsrp_std_max").get<double>(),
                     g.at("rsrp_std_steps").get<int>()};
  c.grid.rssi = {g.at("rssi_min").get<double>(), g.at("rssi_max").get<double>(), g.at("rssi_steps").get<int>()};
  c.validate();
  return c;
}

std::vector<std::string> split_path(std::string_view key_path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key_path.find('.', start);
    parts.emplace_back(key_path.substr(start, dot == std::string_view::npos ? dot : dot - start));
    if (parts.back().empty()) throw Error(ErrorKind::InvalidArgument, "empty segment in config key '" + std::string(key_path) + "'");
    if (dot == std::string_view::npos) return parts;
    start = dot + 1;
  }
}

} // namespace

void ExperimentConfig::validate() const {
  if (threads < 1) config_error("threads", "must be >= 1");
  if (rings < 0) config_error("layout.rings", "must be >= 0");
  if (!(isd_m > 0.0)) config_error("layout.isd_m", "must be > 0");
  if (!(cell.bs_height_m > 0.0)) config_error("layout.bs_height_m", "must be > 0");
  if (!(cell.tx_power_dbm > 0.0)) config_error("layout.tx_power_dbm", "must be > 0");
  if (!(cell.fc_ghz > 0.0)) config_error("layout.fc_ghz", "must be > 0");
  if (!(cell.bw_hz > 0.0)) config_error("layout.bw_hz", "must be > 0");
  if (channel.shadow_sigma_los_db < 0.0) config_error("channel.shadow_sigma_los_db", "must be >= 0");
  if (channel.shadow_sigma_nlos_db < 0.0) config_error("channel.shadow_sigma_nlos_db", "must be >= 0");
  if (channel.n_subcarriers <= 0) config_error("channel.n_subcarriers", "must be > 0");
  if (placement.indoor < 0) config_error("placement.indoor", "must be >= 0");
  if (placement.outdoor < 0) config_error("placement.outdoor", "must be >= 0");
  if (placement.aerial_per_height < 0) config_error("placement.aerial_per_height", "must be >= 0");
  for (double h : placement.aerial_heights_m)
    if (!(h > kGroundUeHeightM)) config_error("placement.aerial_heights_m", "every height must be > 1.5");
  if (!(logistic.learning_rate > 0.0)) config_error("ml.learning_rate", "must be > 0");
  if (logistic.max_iters < 0) config_error("ml.max_iters", "must be >= 0");
  if (!(logistic.tolerance >= 0.0)) config_error("ml.tolerance", "must be >= 0");
  if (!(logistic.l2 >= 0.0)) config_error("ml.l2", "must be >= 0");
  if (tree.max_depth < 0) config_error("ml.max_depth", "must be >= 0");
  if (tree.min_leaf < 1) config_error("ml.min_leaf", "must be >= 1");
  if (!(threshold >= 0.0 && threshold <= 1.0)) config_error("ml.threshold", "must be in [0, 1]");
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) config_error("ml.train_fraction", "must be in (0, 1]");
  if (grid.rsrp_std.steps < 2) config_error("grid.rsrp_std_steps", "must be >= 2");
  if (grid.rssi.steps < 2) config_error("grid.rssi_steps", "must be >= 2");
  if (!(grid.rsrp_std.min < grid.rsrp_std.max)) config_error("grid.rsrp_std_min", "must be < rsrp_std_max");
  if (!(grid.rssi.min < grid.rssi.max)) config_error("grid.rssi_min", "must be < rssi_max");
}

ExperimentConfig config_from_json(std::string_view text) {
  ojson user;
  try {
    user = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("config is not valid JSON: ") + e.what());
  }
  ojson merged = to_ojson(ExperimentConfig{});
  overlay(merged, user, "");
  return from_ojson(merged);
}

ExperimentConfig load_config(const std::filesystem::path& path) { return config_from_json(read_file(path)); }

std::string config_to_json(const ExperimentConfig& config) { return to_ojson(config).dump(2) + "\n"; }

void set_config_value(ExperimentConfig& config, std::string_view key_path, std::string_view json_value) {
  ojson value;
  try {
    value = ojson::parse(json_value);
  } catch (const ojson::parse_error&) {
    // Bare words are taken as strings so `--set output_dir=runs/a` works unquoted.
    value = std::string(json_value);
  }
  const auto parts = split_path(key_path);
  ojson patch = std::move(value);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = ojson{{*it, std::move(patch)}};
  ojson merged = to_ojson(config);
  overlay(merged, patch, "");
  config = from_ojson(merged);
}

std::string get_config_value(const ExperimentConfig& config, std::string_view key_path) {
  const ojson full = to_ojson(config);
  const ojson* node = &full;
  for (const auto& part : split_path(key_path)) {
    if (!node->is_object() || !node->contains(part))
      throw Error(ErrorKind::NotFound, "config has no key '" + std::string(key_path) + "'");
    node = &(*node)[part];
  }
  return node->dump();
}

std::uint64_t config_hash(const ExperimentConfig& config) { return rng::fnv1a64(config_to_json(config)); }

NetworkLayout build_layout(const ExperimentConfig& config) {
  return build_hex_layout(config.rings, config.isd_m, config.cell);
}

SimulationResult run_simulation(const ExperimentConfig& config) {
  config.validate();
  SimulationResult r;
  r.layout = build_layout(config);
  const auto drops = place_ues(r.layout, config.placement, config.seed);
  r.radio = simulate_drops(r.layout, drops, config.channel, config.seed, config.threads);
  r.dataset.samples.reserve(r.radio.size());
  for (const auto& s : r.radio) r.dataset.samples.push_back(label_sample(s));
  return r;
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "logistic") return ModelKind::Logistic;
  if (text == "tree") return ModelKind::Tree;
  throw Error(ErrorKind::InvalidArgument, "model type must be 'logistic' or 'tree'");
}

Evaluation evaluate_by_height(const ml::Model& model, const Dataset& data, double threshold) {
  const Dataset raw = unstandardize(data);
  Evaluation eval;
  eval.overall = ml::evaluate(model, raw, threshold);
  std::map<long long, Dataset> groups;
  for (const auto& s : raw.samples) groups[std::llround(s.height_m * 10.0)].samples.push_back(s);
  for (const auto& [key, group] : groups)
    eval.by_height.push_back({static_cast<double>(key) / 10.0, ml::evaluate(model, group, threshold)});
  return eval;
}

TrainResult train_model(const Dataset& data, ModelKind kind, const ExperimentConfig& config) {
  config.validate();
  if (data.empty()) throw Error(ErrorKind::InvalidArgument, "dataset is empty");
  const Dataset raw = unstandardize(data);
  if (!raw.has_both_labels())
    throw Error(ErrorKind::Degenerate, "dataset holds a single class; both labels are required");

  auto [train, test] = stratified_split(raw, config.train_fraction, config.seed);
  if (!train.has_both_labels())
    throw Error(ErrorKind::Degenerate, "training split holds a single class; both labels are required");

  TrainResult result;
  if (kind == ModelKind::Logistic) {
    const auto [z_train, params] = standardize(train);
    result.model = ml::train_logistic(z_train, config.logistic);
  } else {
    result.model = ml::train_tree(train, config.tree);
  }
  result.train_size = train.size();
  result.test_size = test.size();
  result.train_eval = evaluate_by_height(result.model, train, config.threshold);
  if (!test.empty()) result.test_eval = evaluate_by_height(result.model, test, config.threshold);
  return result;
}

namespace {

ojson metrics_json(const ml::Metrics& m) {
  return {{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall},
          {"tp", m.tp},             {"fp", m.fp},               {"tn", m.tn},
          {"fn", m.fn}};
}

ojson evaluation_ojson(const Evaluation& e) {
  ojson by_height = ojson::array();
  for (const auto& h : e.by_height) {
    ojson row = metrics_json(h.metrics);
    row["height_m"] = h.height_m;
    by_height.push_back(std::move(row));
  }
  return {{"overall", metrics_json(e.overall)}, {"by_height", std::move(by_height)}};
}

} // namespace

std::string evaluation_to_json(const Evaluation& eval) { return evaluation_ojson(eval).dump(2) + "\n"; }

std::string train_result_to_json(const TrainResult& result, const ExperimentConfig& config) {
  ojson doc;
  doc["model_type"] = ml::model_type(result.model);
  doc["seed"] = config.seed;
  doc["train_fraction"] = config.train_fraction;
  doc["threshold"] = config.threshold;
  doc["train_size"] = result.train_size;
  doc["test_size"] = result.test_size;
  doc["train"] = evaluation_ojson(result.train_eval);
  doc["test"] = result.test_eval ? evaluation_ojson(*result.test_eval) : ojson(nullptr);
  return doc.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot move output into place at '" + path.string() + "'");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

} // namespace skycell
