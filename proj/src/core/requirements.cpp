#include "skycell/requirements.hpp"

#include "skycell/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace skycell::requirements {

namespace detail {
extern const char* const kBuiltinRegistryJson;
}

using nlohmann::json;

namespace {

constexpr int kRegistrySchemaVersion = 1;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, "requirements registry: " + what);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

const json& level_row(const json& levels, const char* dimension, int level) {
  for (const auto& row : levels.at(dimension))
    if (row.at("level").get<int>() == level) return row;
  throw Error(ErrorKind::InvalidArgument, std::string("requirements registry: no ") + dimension +
                                              " level " + std::to_string(level));
}

} // namespace

std::string_view to_string(CoverageScenario s) {
  switch (s) {
  case CoverageScenario::Hotspot: return "Hotspot";
  case CoverageScenario::AlongLine: return "AlongLine";
  case CoverageScenario::UrbanMacro: return "UrbanMacro";
  case CoverageScenario::WideArea: return "WideArea";
  }
  return "unknown";
}

CoverageScenario parse_scenario(std::string_view text) {
  for (auto s : {CoverageScenario::Hotspot, CoverageScenario::AlongLine, CoverageScenario::UrbanMacro,
                 CoverageScenario::WideArea})
    if (to_string(s) == text) return s;
  throw Error(ErrorKind::InvalidArgument, "unknown coverage scenario '" + std::string(text) + "'");
}

std::string_view to_string(DimensionStatus s) {
  switch (s) {
  case DimensionStatus::Pass: return "pass";
  case DimensionStatus::Fail: return "fail";
  case DimensionStatus::Unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(Verdict v) {
  switch (v) {
  case Verdict::Pass: return "pass";
  case Verdict::Fail: return "fail";
  case Verdict::PassWithGaps: return "pass-with-gaps";
  }
  return "unknown";
}

Registry Registry::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("requirements registry is not valid JSON: ") + e.what());
  }
  Registry reg;
  try {
    const int version = doc.at("schema_version").get<int>();
    if (version != kRegistrySchemaVersion)
      throw Error(ErrorKind::Version, "unsupported requirements schema_version " + std::to_string(version));
    const auto& levels = doc.at("levels");

    for (const char* dim : {"altitude", "scenario", "data_rate", "positioning"}) {
      for (const auto& row : levels.at(dim)) {
        LevelEntry e{dim, row.at("level").get<int>(), {row.at("label").get<std::string>()},
                     row.at("typical_use").get<std::string>()};
        reg.levels_.push_back(std::move(e));
      }
    }
    for (const auto& row : levels.at("latency")) {
      reg.levels_.push_back(LevelEntry{"latency", row.at("level").get<int>(),
                                       {row.at("label_e2e").get<std::string>(),
                                        row.at("label_network").get<std::string>()},
                                       row.at("typical_use").get<std::string>()});
      const double e2e = row.at("e2e_ms").get<double>(), net = row.at("network_ms").get<double>();
      require(positive_finite(e2e) && positive_finite(net) && net <= e2e,
              "latency levels need 0 < network_ms <= e2e_ms");
    }

    const auto& downlink = doc.at("control_downlink");
    const double control_dl = downlink.at("max_bps").get<double>();
    require(positive_finite(control_dl), "control_downlink.max_bps must be > 0");

    std::set<std::string> seen;
    for (const auto& app : doc.at("applications")) {
      RequirementProfile p;
      p.application = app.at("name").get<std::string>();
      require(seen.insert(p.application).second, "duplicate application '" + p.application + "'");

      p.altitude_level = app.at("altitude_level").get<int>();
      const auto& alt = level_row(levels, "altitude", p.altitude_level);
      p.altitude_min_m = alt.at("min_m").get<double>();
      p.altitude_max_m = alt.at("max_m").get<double>();
      p.coverage_scenario = parse_scenario(app.at("scenario").get<std::string>());

      p.data_rate_level = app.at("data_rate_level").get<int>();
      p.uplink_rate_bps = level_row(levels, "data_rate", p.data_rate_level).at("uplink_bps").get<double>();
      if (app.at("control_downlink").get<bool>()) p.downlink_rate_bps = control_dl;

      p.latency_level = app.at("latency_level").get<int>();
      const auto& lat = level_row(levels, "latency", p.latency_level);
      p.e2e_latency_ms = lat.at("e2e_ms").get<double>();
      p.network_latency_ms = lat.at("network_ms").get<double>();

      p.positioning_level = app.at("positioning_level").get<int>();
      p.positioning_accuracy_m =
          level_row(levels, "positioning", p.positioning_level).at("accuracy_m").get<double>();

      require(positive_finite(p.uplink_rate_bps) && positive_finite(p.e2e_latency_ms) &&
                  positive_finite(p.network_latency_ms) && positive_finite(p.positioning_accuracy_m) &&
                  positive_finite(p.altitude_max_m),
              "profile '" + p.application + "' has non-positive requirement values");
      require(p.network_latency_ms <= p.e2e_latency_ms,
              "profile '" + p.application + "' has network latency above e2e latency");
      reg.profiles_.push_back(std::move(p));
    }

    for (const auto& row : doc.at("rates_5g")) {
      Rate5gEntry r;
      r.fc_ghz = row.at("fc_ghz").get<double>();
      r.bw_hz = row.at("bw_hz").get<double>();
      r.cell_radius_m = row.at("cell_radius_m").get<double>();
      r.dl_peak_bps = row.at("dl_peak_bps").get<double>();
      r.ul_peak_bps = row.at("ul_peak_bps").get<double>();
      r.dl_edge_bps = row.at("dl_edge_bps").get<double>();
      r.ul_edge_bps = row.at("ul_edge_bps").get<double>();
      r.antenna_config = row.at("antenna_config").get<std::string>();
      require(r.dl_edge_bps <= r.dl_peak_bps && r.ul_edge_bps <= r.ul_peak_bps,
              "5G rate rows need edge <= peak");
      reg.rates_.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed requirements registry: ") + e.what());
  }
  return reg;
}

const Registry& Registry::builtin() {
  static const Registry reg = from_json(detail::kBuiltinRegistryJson);
  return reg;
}

Registry Registry::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open registry file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

RequirementProfile Registry::lookup(std::string_view application) const {
  for (const auto& p : profiles_)
    if (p.application == application) return p;
  std::string known;
  for (const auto& n : application_names()) known += (known.empty() ? "" : ", ") + n;
  throw Error(ErrorKind::NotFound,
              "unknown application '" + std::string(application) + "'; known: " + known);
}

std::vector<std::string> Registry::application_names() const {
  std::vector<std::string> names;
  for (const auto& p : profiles_) names.push_back(p.application);
  return names;
}

std::vector<Rate5gEntry> Registry::expected_5g_rates(double fc_ghz, double cell_radius_m) const {
  std::vector<Rate5gEntry> out;
  for (const auto& r : rates_)
    if (std::abs(r.fc_ghz - fc_ghz) < 1e-9 && std::abs(r.cell_radius_m - cell_radius_m) < 1e-9)
      out.push_back(r);
  if (out.empty()) {
    std::ostringstream msg;
    msg << "no 5G rate row for fc=" << fc_ghz << " GHz, radius=" << cell_radius_m << " m; available:";
    for (const auto& r : rates_) msg << " (" << r.fc_ghz << " GHz, " << r.cell_radius_m << " m)";
    throw Error(ErrorKind::NotFound, msg.str());
  }
  return out;
}

void KpiReport::validate() const {
  for (const auto& v : {uplink_rate_bps, downlink_rate_bps, e2e_latency_ms, network_latency_ms,
                        positioning_accuracy_m, max_reliable_height_m}) {
    if (v && !(std::isfinite(*v) && *v >= 0.0))
      throw Error(ErrorKind::InvalidArgument, "KPI values must be finite and >= 0");
  }
}

KpiReport kpi_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("KPI file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::Parse, "KPI document must be a JSON object");
  KpiReport k;
  const std::map<std::string, std::optional<double> KpiReport::*> fields = {
      {"uplink_rate_bps", &KpiReport::uplink_rate_bps},
      {"downlink_rate_bps", &KpiReport::downlink_rate_bps},
      {"e2e_latency_ms", &KpiReport::e2e_latency_ms},
      {"network_latency_ms", &KpiReport::network_latency_ms},
      {"positioning_accuracy_m", &KpiReport::positioning_accuracy_m},
      {"max_reliable_height_m", &KpiReport::max_reliable_height_m},
  };
  for (const auto& [key, value] : doc.items()) {
    if (key == "source") {
      const auto s = value.get<std::string>();
      if (s == "simulated") k.source = KpiSource::Simulated;
      else if (s == "field_log") k.source = KpiSource::FieldLog;
      else throw Error(ErrorKind::InvalidArgument, "KPI source must be 'simulated' or 'field_log'");
      continue;
    }
    const auto it = fields.find(key);
    if (it == fields.end()) throw Error(ErrorKind::InvalidArgument, "unknown KPI key '" + key + "'");
    if (value.is_null()) continue;
    if (!value.is_number()) throw Error(ErrorKind::InvalidArgument, "KPI '" + key + "' must be a number");
    k.*(it->second) = value.get<double>();
  }
  k.validate();
  return k;
}

ComplianceReport gate(const KpiReport& kpis, const RequirementProfile& profile) {
  kpis.validate();
  ComplianceReport report;
  report.application = profile.application;

  auto add = [&](std::string name, bool at_least, double required, std::optional<double> observed) {
    DimensionResult d{std::move(name), at_least ? ">=" : "<=", required, observed, DimensionStatus::Unknown};
    if (observed) {
      const bool ok = at_least ? *observed >= required : *observed <= required;
      d.status = ok ? DimensionStatus::Pass : DimensionStatus::Fail;
    }
    report.dimensions.push_back(std::move(d));
  };

  add("uplink_rate_bps", true, profile.uplink_rate_bps, kpis.uplink_rate_bps);
  if (profile.downlink_rate_bps)
    add("downlink_rate_bps", true, *profile.downlink_rate_bps, kpis.downlink_rate_bps);
  add("e2e_latency_ms", false, profile.e2e_latency_ms, kpis.e2e_latency_ms);
  add("network_latency_ms", false, profile.network_latency_ms, kpis.network_latency_ms);
  add("positioning_accuracy_m", false, profile.positioning_accuracy_m, kpis.positioning_accuracy_m);
  add("max_reliable_height_m", true, profile.altitude_max_m, kpis.max_reliable_height_m);

  const auto has = [&](DimensionStatus s) {
    return std::any_of(report.dimensions.begin(), report.dimensions.end(),
                       [&](const DimensionResult& d) { return d.status == s; });
  };
  report.verdict = has(DimensionStatus::Fail)      ? Verdict::Fail
                   : has(DimensionStatus::Unknown) ? Verdict::PassWithGaps
                                                   : Verdict::Pass;
  return report;
}

std::string report_to_json(const ComplianceReport& report) {
  json dims = json::array();
  for (const auto& d : report.dimensions) {
    dims.push_back({{"dimension", d.dimension},
                    {"comparison", d.comparison},
                    {"required", d.required},
                    {"observed", d.observed ? json(*d.observed) : json(nullptr)},
                    {"status", to_string(d.status)}});
  }
  json doc = {{"application", report.application},
              {"verdict", to_string(report.verdict)},
              {"dimensions", std::move(dims)}};
  return doc.dump(2) + "\n";
}

std::string report_to_text(const ComplianceReport& report) {
  std::ostringstream out;
  out << "application: " << report.application << "\n";
  for (const auto& d : report.dimensions) {
    out << "  " << d.dimension << ": required " << d.comparison << ' ' << d.required << ", observed ";
    if (d.observed) out << *d.observed;
    else out << "n/a";
    out << " -> " << to_string(d.status) << "\n";
  }
  out << "verdict: " << to_string(report.verdict) << "\n";
  return out.str();
}

} // namespace skycell::requirements
