#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "skycell/deployment.hpp"
#include "skycell/features.hpp"
#include "skycell/ml.hpp"
#include "skycell/radio.hpp"

namespace skycell {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr std::string_view kVersion = "0.3.0";

/// Everything a run depends on. JSON form:
///   {schema_version, seed, threads, output_dir,
///    layout{rings, isd_m, bs_height_m, tx_power_dbm, fc_ghz, bw_hz, downtilt_deg},
///    channel{shadow_sigma_los_db, shadow_sigma_nlos_db, indoor_penetration_db,
///            ue_noise_figure_db, n_subcarriers},
///    placement{indoor, outdoor, aerial_per_height, aerial_heights_m[]},
///    ml{learning_rate, max_iters, tolerance, l2, max_depth, min_leaf, threshold, train_fraction},
///    grid{rsrp_std_min, rsrp_std_max, rsrp_std_steps, rssi_min, rssi_max, rssi_steps}}
/// Every key is optional; unknown keys are rejected.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  int threads = 1;
  std::string output_dir = "out";
  int rings = 2;
  double isd_m = 500.0;
  CellTemplate cell;
  ChannelParams channel;
  PlacementSpec placement = PlacementSpec::defaults();
  ml::LogisticConfig logistic;
  ml::TreeConfig tree;
  double threshold = 0.5;
  double train_fraction = 0.7;
  ml::GridBounds grid;

  void validate() const;
};

ExperimentConfig config_from_json(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON (fixed key order, every key present).
std::string config_to_json(const ExperimentConfig& config);

/// Sets one dotted key ("layout.isd_m") from a JSON literal and revalidates.
void set_config_value(ExperimentConfig& config, std::string_view key_path, std::string_view json_value);

/// JSON text of one dotted key.
std::string get_config_value(const ExperimentConfig& config, std::string_view key_path);

/// FNV-1a 64 of the canonical JSON.
std::uint64_t config_hash(const ExperimentConfig& config);

NetworkLayout build_layout(const ExperimentConfig& config);

struct SimulationResult {
  NetworkLayout layout;
  std::vector<RadioSample> radio;
  Dataset dataset;
};

SimulationResult run_simulation(const ExperimentConfig& config);

enum class ModelKind { Logistic, Tree };

ModelKind parse_model_kind(std::string_view text);

struct HeightMetrics {
  double height_m = 0.0;
  ml::Metrics metrics;
};

struct Evaluation {
  ml::Metrics overall;
  std::vector<HeightMetrics> by_height; // ascending height
};

/// Overall metrics plus one entry per distinct height (rounded to 0.1 m).
Evaluation evaluate_by_height(const ml::Model& model, const Dataset& data, double threshold);

struct TrainResult {
  ml::Model model;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  Evaluation train_eval;
  std::optional<Evaluation> test_eval; // absent when train_fraction == 1
};

/// Stratified split, then fit. Logistic models are trained on z-scored features
/// (parameters kept in the model); trees on raw features.
TrainResult train_model(const Dataset& data, ModelKind kind, const ExperimentConfig& config);

std::string evaluation_to_json(const Evaluation& eval);
std::string train_result_to_json(const TrainResult& result, const ExperimentConfig& config);

/// Writes `content` to a sibling temp file then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

} // namespace skycell
