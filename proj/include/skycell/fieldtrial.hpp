#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skycell/requirements.hpp"

namespace skycell::fieldtrial {

/// Canonical log header; an optional trailing `network_latency_ms` column is also accepted.
inline constexpr std::string_view kTrialHeader = "height_m,rsrp_dbm,sinr_db,ul_rate_bps,latency_ms";

struct TrialRecord {
  double height_m = 0.0;
  std::optional<double> rsrp_dbm;
  std::optional<double> sinr_db;
  std::optional<double> ul_rate_bps;
  std::optional<double> latency_ms; // end-to-end round trip
  std::optional<double> network_latency_ms;
  std::size_t line = 0;
};

enum class Metric { Rsrp, Sinr, UlRate, Latency, NetworkLatency };
inline constexpr std::size_t kMetricCount = 5;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::Rsrp, Metric::Sinr, Metric::UlRate, Metric::Latency, Metric::NetworkLatency};

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view name);
std::optional<double> metric_value(const TrialRecord& r, Metric m);

/// Half-open height interval (lo, hi].
struct HeightBin {
  double lo_m = 0.0;
  double hi_m = 0.0;
  bool contains(double h) const { return h > lo_m && h <= hi_m; }
};

/// Closed value interval [lo, hi].
struct ValueBand {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

using BandSet = std::array<std::optional<ValueBand>, kMetricCount>;

struct MetricStats {
  std::size_t count = 0;
  std::optional<double> p25;
  std::optional<double> median;
  std::optional<double> p75;
  std::optional<ValueBand> band;
  std::optional<double> band_fraction;
};

struct BinSummary {
  std::optional<HeightBin> bin; // empty for the unbinned bucket
  std::size_t count = 0;
  std::array<MetricStats, kMetricCount> metrics{};

  const MetricStats& stats(Metric m) const { return metrics[static_cast<std::size_t>(m)]; }
};

struct TrialSummary {
  std::vector<BinSummary> bins;
  BinSummary unbinned;
  std::size_t total_records = 0;
};

std::vector<TrialRecord> read_trial_csv(std::istream& in);
std::vector<TrialRecord> ingest_csv(const std::filesystem::path& path);
void write_trial_csv(std::ostream& out, std::span<const TrialRecord> records);

/// Nearest-rank percentile (rank = ceil(p/100 * n), 1-based) of unsorted values.
double nearest_rank_percentile(std::vector<double> values, double p);

/// Per-bin nearest-rank quartiles and band fractions. Records outside every bin
/// land in `unbinned`; nothing is dropped.
TrialSummary summarize(std::span<const TrialRecord> records, std::span<const HeightBin> bins,
                       const BandSet& bands);

/// Gates the bin's medians (UL rate, e2e latency, network latency) against the profile.
requirements::ComplianceReport trial_gate(const TrialSummary& summary,
                                          const requirements::RequirementProfile& profile,
                                          std::size_t bin_index);

std::string summary_to_json(const TrialSummary& summary);
void write_summary_csv(std::ostream& out, const TrialSummary& summary);

/// Seeded synthetic log shaped like the LTE-A drone trial: heights 50/100/300 m,
/// latency mostly 200-300 ms at <= 100 m and 400-500 ms at 300 m, RSRP mostly
/// -90..-75 dBm at 50-100 m, SINR within -10..5 dB, UL rate mostly 4-10 Mbps.
/// Roughly 3% of each metric falls outside its band. Synthetic, not trial data.
std::vector<TrialRecord> synthesize_trial(std::uint64_t seed, int per_height);

/// Bins (0,50], (50,100], (100,300] and the bands above.
std::vector<HeightBin> default_trial_bins();
BandSet default_trial_bands();

} // namespace skycell::fieldtrial
