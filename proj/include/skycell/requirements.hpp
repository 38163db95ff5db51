#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace skycell::requirements {

enum class CoverageScenario { Hotspot, AlongLine, UrbanMacro, WideArea };

std::string_view to_string(CoverageScenario s);
CoverageScenario parse_scenario(std::string_view text);

/// One application's composed requirement levels.
struct RequirementProfile {
  std::string application;
  int altitude_level = 0;
  double altitude_min_m = 0.0;
  double altitude_max_m = 0.0;
  CoverageScenario coverage_scenario = CoverageScenario::UrbanMacro;
  int data_rate_level = 0;
  double uplink_rate_bps = 0.0;
  std::optional<double> downlink_rate_bps;
  int latency_level = 0;
  double e2e_latency_ms = 0.0;
  double network_latency_ms = 0.0;
  int positioning_level = 0;
  double positioning_accuracy_m = 0.0;
};

struct Rate5gEntry {
  double fc_ghz = 0.0;
  double bw_hz = 0.0;
  double cell_radius_m = 0.0;
  double dl_peak_bps = 0.0;
  double ul_peak_bps = 0.0;
  double dl_edge_bps = 0.0;
  double ul_edge_bps = 0.0;
  std::string antenna_config;
};

/// A requirement level as printed in the source table: the cell texts and the
/// typical-use text, verbatim.
struct LevelEntry {
  std::string dimension; // altitude, scenario, data_rate, latency, positioning
  int level = 0;
  std::vector<std::string> values;
  std::string typical_use;
};

class Registry {
public:
  /// Registry compiled into the library from data/requirements.json.
  static const Registry& builtin();
  static Registry from_json(std::string_view text);
  static Registry load(const std::filesystem::path& path);

  RequirementProfile lookup(std::string_view application) const;
  std::vector<std::string> application_names() const;

  /// Rows matching (fc, radius); the 26 GHz row yields one entry per antenna config.
  std::vector<Rate5gEntry> expected_5g_rates(double fc_ghz, double cell_radius_m) const;
  const std::vector<Rate5gEntry>& rates_5g() const { return rates_; }

  const std::vector<LevelEntry>& levels() const { return levels_; }

private:
  std::vector<RequirementProfile> profiles_;
  std::vector<Rate5gEntry> rates_;
  std::vector<LevelEntry> levels_;
};

enum class KpiSource { Simulated, FieldLog };

struct KpiReport {
  std::optional<double> uplink_rate_bps;
  std::optional<double> downlink_rate_bps;
  std::optional<double> e2e_latency_ms;
  std::optional<double> network_latency_ms;
  std::optional<double> positioning_accuracy_m;
  std::optional<double> max_reliable_height_m;
  KpiSource source = KpiSource::FieldLog;

  void validate() const;
};

/// {"uplink_rate_bps": ..., ..., "source": "simulated" | "field_log"}; unknown keys rejected.
KpiReport kpi_from_json(std::string_view text);

enum class DimensionStatus { Pass, Fail, Unknown };
enum class Verdict { Pass, Fail, PassWithGaps };

std::string_view to_string(DimensionStatus s);
std::string_view to_string(Verdict v);

struct DimensionResult {
  std::string dimension;
  std::string comparison; // ">=" or "<="
  double required = 0.0;
  std::optional<double> observed;
  DimensionStatus status = DimensionStatus::Unknown;
};

struct ComplianceReport {
  std::string application;
  std::vector<DimensionResult> dimensions;
  Verdict verdict = Verdict::PassWithGaps;
};

/// Rates and reliable height pass at observed >= required; latencies and
/// positioning pass at observed <= required. Missing observations are Unknown.
/// Fail if any dimension fails, pass-with-gaps if any is unknown, else pass.
ComplianceReport gate(const KpiReport& kpis, const RequirementProfile& profile);

std::string report_to_json(const ComplianceReport& report);
std::string report_to_text(const ComplianceReport& report);

} // namespace skycell::requirements
