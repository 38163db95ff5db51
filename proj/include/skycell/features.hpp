#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "skycell/deployment.hpp"
#include "skycell/radio.hpp"

namespace skycell {

inline constexpr std::size_t kFeatureCount = 2;
inline constexpr std::size_t kStrongestCells = 8;

/// Index 0 is RSSI, index 1 is RSRP STD; models use the same ordering.
struct FeatureVector {
  double rssi_dbm = 0.0;
  double rsrp_std_db = 0.0;

  double operator[](std::size_t i) const { return i == 0 ? rssi_dbm : rsrp_std_db; }
  std::array<double, kFeatureCount> as_array() const { return {rssi_dbm, rsrp_std_db}; }
};

enum class Label { Terrestrial = 0, Drone = 1 };

std::string_view to_string(Label l);

struct LabeledSample {
  FeatureVector features;
  Label label = Label::Terrestrial;
  double height_m = kGroundUeHeightM;
  UeClass ue_class = UeClass::Outdoor;
  int drop_index = 0;
};

struct Standardization {
  std::array<double, kFeatureCount> mean{};
  std::array<double, kFeatureCount> std{};

  FeatureVector apply(const FeatureVector& f) const;
  FeatureVector invert(const FeatureVector& z) const;
};

/// Samples hold z-scored features when `standardization` is set, raw otherwise.
struct Dataset {
  std::vector<LabeledSample> samples;
  std::optional<Standardization> standardization;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
  bool has_both_labels() const;
};

/// RSSI plus population std-dev of the (up to) eight strongest RSRPs. The input
/// order of `sample.cells` does not matter.
FeatureVector extract_features(const RadioSample& sample);

LabeledSample label_sample(const RadioSample& sample);

/// One labeled sample per drop. `threads` > 1 splits drops across workers; the
/// result is identical to the sequential one.
Dataset generate_dataset(const NetworkLayout& layout, const PlacementSpec& placement,
                         const ChannelParams& params, std::uint64_t seed, int threads = 1);

/// Radio samples for every drop; same threading contract as generate_dataset.
std::vector<RadioSample> simulate_drops(const NetworkLayout& layout, std::span<const UeDrop> drops,
                                        const ChannelParams& params, std::uint64_t seed,
                                        int threads = 1);

Standardization fit_standardization(const Dataset& train);

/// z-scores `train` with parameters fitted on it.
std::pair<Dataset, Standardization> standardize(const Dataset& train);

Dataset apply_standardization(const Dataset& raw, const Standardization& params);

/// Back to raw feature units; a raw dataset is returned unchanged.
Dataset unstandardize(const Dataset& data);

/// Stratified by (label, height rounded to 0.1 m); round(train_fraction * n) of
/// each stratum goes to train after a seeded shuffle.
std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double train_fraction,
                                             std::uint64_t seed);

/// Dataset interchange CSV: drop_index,ue_class,height_m,rssi_dbm,rsrp_std_db,label
void write_dataset_csv(std::ostream& out, const Dataset& data);
Dataset read_dataset_csv(std::istream& in);

/// Euclidean distance between per-class feature means.
double centroid_distance(std::span<const LabeledSample> a, std::span<const LabeledSample> b);

} // namespace skycell
