#include "skycell/features.hpp"

#include "skycell/error.hpp"
#include "skycell/rng.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <thread>

#include "csv_format.hpp"

namespace skycell {

std::string_view to_string(Label l) { return l == Label::Drone ? "drone" : "terrestrial"; }

FeatureVector Standardization::apply(const FeatureVector& f) const {
  return {(f.rssi_dbm - mean[0]) / std[0], (f.rsrp_std_db - mean[1]) / std[1]};
}

FeatureVector Standardization::invert(const FeatureVector& z) const {
  return {z.rssi_dbm * std[0] + mean[0], z.rsrp_std_db * std[1] + mean[1]};
}

bool Dataset::has_both_labels() const {
  bool drone = false, terrestrial = false;
  for (const auto& s : samples) (s.label == Label::Drone ? drone : terrestrial) = true;
  return drone && terrestrial;
}

FeatureVector extract_features(const RadioSample& sample) {
  if (sample.cells.size() < 2)
    throw Error(ErrorKind::InvalidArgument,
                "at least 2 per-cell measurements are required for RSRP STD");
  std::vector<double> rsrp;
  rsrp.reserve(sample.cells.size());
  for (const auto& c : sample.cells) rsrp.push_back(c.rsrp_dbm);
  const std::size_t n = std::min(kStrongestCells, rsrp.size());
  std::partial_sort(rsrp.begin(), rsrp.begin() + static_cast<std::ptrdiff_t>(n), rsrp.end(),
                    std::greater<>());
  // Sum in sorted order so the result does not depend on the input permutation.
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += rsrp[i];
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) var += (rsrp[i] - mean) * (rsrp[i] - mean);
  var /= static_cast<double>(n);
  return {sample.rssi_dbm, std::sqrt(var)};
}

LabeledSample label_sample(const RadioSample& sample) {
  LabeledSample s;
  s.features = extract_features(sample);
  s.ue_class = sample.drop.ue_class;
  s.label = sample.drop.ue_class == UeClass::Aerial ? Label::Drone : Label::Terrestrial;
  s.height_m = sample.drop.position.z;
  s.drop_index = sample.drop.drop_index;
  return s;
}

std::vector<RadioSample> simulate_drops(const NetworkLayout& layout, std::span<const UeDrop> drops,
                                        const ChannelParams& params, std::uint64_t seed,
                                        int threads) {
  params.validate();
  std::vector<RadioSample> out(drops.size());
  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1,
                              std::max<std::size_t>(drops.size(), 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < drops.size(); ++i)
      out[i] = compute_sample(layout, drops[i], params, seed);
    return out;
  }

  // Each worker owns a contiguous block; slots are fixed by drop order.
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    const std::size_t block = (drops.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          const std::size_t end = std::min(drops.size(), (w + 1) * block);
          for (std::size_t i = w * block; i < end; ++i)
            out[i] = compute_sample(layout, drops[i], params, seed);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

Dataset generate_dataset(const NetworkLayout& layout, const PlacementSpec& placement,
                         const ChannelParams& params, std::uint64_t seed, int threads) {
  const auto drops = place_ues(layout, placement, seed);
  const auto radio = simulate_drops(layout, drops, params, seed, threads);
  Dataset data;
  data.samples.reserve(radio.size());
  for (const auto& r : radio) data.samples.push_back(label_sample(r));
  return data;
}

Standardization fit_standardization(const Dataset& train) {
  if (train.empty()) throw Error(ErrorKind::Degenerate, "cannot standardize an empty dataset");
  Standardization st;
  const double n = static_cast<double>(train.size());
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    double mean = 0.0;
    for (const auto& s : train.samples) mean += s.features[k];
    mean /= n;
    double var = 0.0;
    for (const auto& s : train.samples) var += (s.features[k] - mean) * (s.features[k] - mean);
    var /= n;
    const double sd = std::sqrt(var);
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean))))
      throw Error(ErrorKind::Degenerate,
                  std::string("degenerate feature '") + (k == 0 ? "rssi_dbm" : "rsrp_std_db") +
                      "': zero variance in the training set");
    st.mean[k] = mean;
    st.std[k] = sd;
  }
  return st;
}

Dataset apply_standardization(const Dataset& raw, const Standardization& params) {
  if (raw.standardization) throw Error(ErrorKind::InvalidArgument, "dataset is already standardized");
  Dataset out = raw;
  for (auto& s : out.samples) s.features = params.apply(s.features);
  out.standardization = params;
  return out;
}

std::pair<Dataset, Standardization> standardize(const Dataset& train) {
  if (train.standardization) throw Error(ErrorKind::InvalidArgument, "dataset is already standardized");
  const auto params = fit_standardization(train);
  return {apply_standardization(train, params), params};
}

Dataset unstandardize(const Dataset& data) {
  if (!data.standardization) return data;
  Dataset out = data;
  for (auto& s : out.samples) s.features = data.standardization->invert(s.features);
  out.standardization.reset();
  return out;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double train_fraction,
                                             std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "train_fraction must be in (0, 1]");
  std::map<std::pair<int, long long>, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& s = data.samples[i];
    strata[{static_cast<int>(s.label), std::llround(s.height_m * 10.0)}].push_back(i);
  }

  std::vector<char> in_train(data.size(), 0);
  for (auto& [key, idx] : strata) {
    rng::Stream stream(rng::derive_seed(seed, "split", static_cast<std::uint64_t>(key.first),
                                        static_cast<std::uint64_t>(key.second)));
    for (std::size_t i = idx.size(); i > 1; --i)
      std::swap(idx[i - 1], idx[stream.below(i)]);
    const auto n_train =
        static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(idx.size())));
    for (std::size_t j = 0; j < std::min(n_train, idx.size()); ++j) in_train[idx[j]] = 1;
  }

  Dataset train, test;
  train.standardization = data.standardization;
  test.standardization = data.standardization;
  for (std::size_t i = 0; i < data.size(); ++i)
    (in_train[i] ? train : test).samples.push_back(data.samples[i]);
  return {std::move(train), std::move(test)};
}

namespace {
constexpr std::string_view kDatasetHeader = "drop_index,ue_class,height_m,rssi_dbm,rsrp_std_db,label";
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  const Dataset raw = unstandardize(data);
  out << kDatasetHeader << '\n';
  for (const auto& s : raw.samples) {
    out << s.drop_index << ',' << to_string(s.ue_class) << ',' << csv::num(s.height_m) << ','
        << csv::num(s.features.rssi_dbm) << ',' << csv::num(s.features.rsrp_std_db) << ','
        << static_cast<int>(s.label) << '\n';
  }
}

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(1, 1, "missing header");
  if (csv::trim_eol(line) != kDatasetHeader)
    throw ParseError(1, 1, "dataset header must be '" + std::string(kDatasetHeader) + "'");

  Dataset data;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = csv::trim_eol(line);
    if (text.empty()) continue;
    const auto f = csv::split(text);
    if (f.size() != 6)
      throw ParseError(line_no, 1, "expected 6 fields, got " + std::to_string(f.size()));
    LabeledSample s;
    s.drop_index = static_cast<int>(csv::parse_int(f[0], line_no, 1, "drop_index"));
    try {
      s.ue_class = parse_ue_class(csv::trim(f[1]));
    } catch (const Error& e) {
      throw ParseError(line_no, 2, e.what());
    }
    s.height_m = csv::parse_double(f[2], line_no, 3, "height_m");
    s.features.rssi_dbm = csv::parse_double(f[3], line_no, 4, "rssi_dbm");
    s.features.rsrp_std_db = csv::parse_double(f[4], line_no, 5, "rsrp_std_db");
    const auto label = csv::parse_int(f[5], line_no, 6, "label");
    if (label != 0 && label != 1) throw ParseError(line_no, 6, "label must be 0 or 1");
    s.label = label == 1 ? Label::Drone : Label::Terrestrial;
    if ((s.label == Label::Drone) != (s.ue_class == UeClass::Aerial))
      throw ParseError(line_no, 6, "label must be 1 exactly when ue_class is aerial");
    if (s.features.rsrp_std_db < 0.0) throw ParseError(line_no, 5, "rsrp_std_db must be >= 0");
    data.samples.push_back(s);
  }
  return data;
}

double centroid_distance(std::span<const LabeledSample> a, std::span<const LabeledSample> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::InvalidArgument, "centroid of an empty set");
  auto centroid = [](std::span<const LabeledSample> s) {
    std::array<double, kFeatureCount> c{};
    for (const auto& x : s)
      for (std::size_t k = 0; k < kFeatureCount; ++k) c[k] += x.features[k];
    for (auto& v : c) v /= static_cast<double>(s.size());
    return c;
  };
  const auto ca = centroid(a), cb = centroid(b);
  double d2 = 0.0;
  for (std::size_t k = 0; k < kFeatureCount; ++k) d2 += (ca[k] - cb[k]) * (ca[k] - cb[k]);
  return std::sqrt(d2);
}

} // namespace skycell
