#include "skycell/fieldtrial.hpp"

#include "skycell/error.hpp"
#include "skycell/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "csv_format.hpp"
#include "json.hpp"

namespace skycell::fieldtrial {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 6> kColumns = {
    "height_m", "rsrp_dbm", "sinr_db", "ul_rate_bps", "latency_ms", "network_latency_ms"};

std::optional<double> TrialRecord::*metric_member(Metric m) {
  switch (m) {
  case Metric::Rsrp: return &TrialRecord::rsrp_dbm;
  case Metric::Sinr: return &TrialRecord::sinr_db;
  case Metric::UlRate: return &TrialRecord::ul_rate_bps;
  case Metric::Latency: return &TrialRecord::latency_ms;
  case Metric::NetworkLatency: return &TrialRecord::network_latency_ms;
  }
  return &TrialRecord::rsrp_dbm;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? csv::num(*v) : std::string(); }

} // namespace

std::string_view to_string(Metric m) {
  switch (m) {
  case Metric::Rsrp: return "rsrp_dbm";
  case Metric::Sinr: return "sinr_db";
  case Metric::UlRate: return "ul_rate_bps";
  case Metric::Latency: return "latency_ms";
  case Metric::NetworkLatency: return "network_latency_ms";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  for (auto m : kAllMetrics)
    if (to_string(m) == name) return m;
  throw Error(ErrorKind::InvalidArgument, "unknown metric '" + std::string(name) + "'");
}

std::optional<double> metric_value(const TrialRecord& r, Metric m) { return r.*metric_member(m); }

std::vector<TrialRecord> read_trial_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, 1, "missing header");
  const auto header = csv::split(csv::trim_eol(line));
  if (header.size() < 5 || header.size() > 6)
    throw ParseError(1, 1, "header must be '" + std::string(kTrialHeader) +
                               "' optionally followed by ',network_latency_ms'");
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (csv::trim(header[c]) != kColumns[c])
      throw ParseError(1, c + 1, "unexpected column '" + std::string(header[c]) + "', expected '" +
                                     std::string(kColumns[c]) + "'");
  }
  const std::size_t width = header.size();

  std::vector<TrialRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = csv::trim_eol(line);
    if (csv::trim(text).empty()) continue;
    const auto f = csv::split(text);
    if (f.size() != width)
      throw ParseError(line_no, std::min(f.size(), width) + 1,
                       "expected " + std::to_string(width) + " fields, got " + std::to_string(f.size()));
    TrialRecord r;
    r.line = line_no;
    if (csv::trim(f[0]).empty()) throw ParseError(line_no, 1, "height_m is required");
    r.height_m = csv::parse_double(f[0], line_no, 1, "height_m");
    if (!(r.height_m > 0.0)) throw ParseError(line_no, 1, "height_m must be > 0");
    auto optional_field = [&](std::size_t col, std::optional<double>& dst) {
      if (col < f.size() && !csv::trim(f[col]).empty())
        dst = csv::parse_double(f[col], line_no, col + 1, kColumns[col]);
    };
    optional_field(1, r.rsrp_dbm);
    optional_field(2, r.sinr_db);
    optional_field(3, r.ul_rate_bps);
    optional_field(4, r.latency_ms);
    optional_field(5, r.network_latency_ms);
    records.push_back(r);
  }
  return records;
}

std::vector<TrialRecord> ingest_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open trial log '" + path.string() + "'");
  return read_trial_csv(in);
}

void write_trial_csv(std::ostream& out, std::span<const TrialRecord> records) {
  const bool with_network = std::any_of(records.begin(), records.end(),
                                        [](const TrialRecord& r) { return r.network_latency_ms.has_value(); });
  out << kTrialHeader << (with_network ? ",network_latency_ms" : "") << '\n';
  for (const auto& r : records) {
    out << csv::num(r.height_m) << ',' << fmt_opt(r.rsrp_dbm) << ',' << fmt_opt(r.sinr_db) << ','
        << fmt_opt(r.ul_rate_bps) << ',' << fmt_opt(r.latency_ms);
    if (with_network) out << ',' << fmt_opt(r.network_latency_ms);
    out << '\n';
  }
}

double nearest_rank_percentile(std::vector<double> values, double p) {
  if (values.empty()) throw Error(ErrorKind::InvalidArgument, "percentile of an empty set");
  if (!(p >= 0.0 && p <= 100.0)) throw Error(ErrorKind::InvalidArgument, "percentile must be in [0, 100]");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

TrialSummary summarize(std::span<const TrialRecord> records, std::span<const HeightBin> bins,
                       const BandSet& bands) {
  std::vector<HeightBin> sorted(bins.begin(), bins.end());
  for (const auto& b : sorted)
    if (!(b.lo_m < b.hi_m)) throw Error(ErrorKind::InvalidArgument, "height bins need lo < hi");
  std::sort(sorted.begin(), sorted.end(), [](const HeightBin& a, const HeightBin& b) { return a.lo_m < b.lo_m; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].lo_m < sorted[i - 1].hi_m)
      throw Error(ErrorKind::InvalidArgument, "height bins overlap");
  for (const auto& band : bands)
    if (band && !(band->lo <= band->hi)) throw Error(ErrorKind::InvalidArgument, "value bands need lo <= hi");

  // Buckets keep the caller's bin order; the last bucket is "unbinned".
  std::vector<std::vector<const TrialRecord*>> members(bins.size() + 1);
  for (const auto& r : records) {
    std::size_t slot = bins.size();
    for (std::size_t b = 0; b < bins.size(); ++b) {
      if (bins[b].contains(r.height_m)) {
        slot = b;
        break;
      }
    }
    members[slot].push_back(&r);
  }

  auto make = [&](const std::vector<const TrialRecord*>& rs, std::optional<HeightBin> bin) {
    BinSummary s;
    s.bin = bin;
    s.count = rs.size();
    for (auto m : kAllMetrics) {
      auto& st = s.metrics[static_cast<std::size_t>(m)];
      std::vector<double> values;
      for (const auto* r : rs)
        if (auto v = metric_value(*r, m)) values.push_back(*v);
      st.count = values.size();
      st.band = bands[static_cast<std::size_t>(m)];
      if (values.empty()) continue;
      st.p25 = nearest_rank_percentile(values, 25.0);
      st.median = nearest_rank_percentile(values, 50.0);
      st.p75 = nearest_rank_percentile(values, 75.0);
      if (st.band) {
        const auto inside = std::count_if(values.begin(), values.end(),
                                          [&](double v) { return st.band->contains(v); });
        st.band_fraction = static_cast<double>(inside) / static_cast<double>(values.size());
      }
    }
    return s;
  };

  TrialSummary summary;
  summary.total_records = records.size();
  for (std::size_t b = 0; b < bins.size(); ++b) summary.bins.push_back(make(members[b], bins[b]));
  summary.unbinned = make(members.back(), std::nullopt);
  return summary;
}

requirements::ComplianceReport trial_gate(const TrialSummary& summary,
                                          const requirements::RequirementProfile& profile,
                                          std::size_t bin_index) {
  if (bin_index >= summary.bins.size())
    throw Error(ErrorKind::NotFound, "height bin index " + std::to_string(bin_index) + " out of range");
  const auto& bin = summary.bins[bin_index];
  requirements::KpiReport kpis;
  kpis.source = requirements::KpiSource::FieldLog;
  if (bin.count > 0) {
    kpis.uplink_rate_bps = bin.stats(Metric::UlRate).median;
    kpis.e2e_latency_ms = bin.stats(Metric::Latency).median;
    kpis.network_latency_ms = bin.stats(Metric::NetworkLatency).median;
  }
  return requirements::gate(kpis, profile);
}

namespace {

json stats_json(const MetricStats& st) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j = {{"count", st.count}, {"p25", opt(st.p25)}, {"median", opt(st.median)}, {"p75", opt(st.p75)}};
  j["band"] = st.band ? json::array({st.band->lo, st.band->hi}) : json(nullptr);
  j["band_fraction"] = opt(st.band_fraction);
  return j;
}

json bin_json(const BinSummary& b) {
  json j;
  j["bin"] = b.bin ? json::array({b.bin->lo_m, b.bin->hi_m}) : json(nullptr);
  j["count"] = b.count;
  json metrics = json::object();
  for (auto m : kAllMetrics) metrics[std::string(to_string(m))] = stats_json(b.stats(m));
  j["metrics"] = std::move(metrics);
  return j;
}

} // namespace

std::string summary_to_json(const TrialSummary& summary) {
  json bins = json::array();
  for (const auto& b : summary.bins) bins.push_back(bin_json(b));
  json doc = {{"total_records", summary.total_records},
              {"bins", std::move(bins)},
              {"unbinned", bin_json(summary.unbinned)}};
  return doc.dump(2) + "\n";
}

void write_summary_csv(std::ostream& out, const TrialSummary& summary) {
  out << "bin_lo_m,bin_hi_m,metric,count,p25,median,p75,band_lo,band_hi,band_fraction\n";
  auto rows = [&](const BinSummary& b) {
    for (auto m : kAllMetrics) {
      const auto& st = b.stats(m);
      if (b.bin) out << csv::num(b.bin->lo_m) << ',' << csv::num(b.bin->hi_m);
      else out << "unbinned,unbinned";
      out << ',' << to_string(m) << ',' << st.count << ',' << fmt_opt(st.p25) << ','
          << fmt_opt(st.median) << ',' << fmt_opt(st.p75) << ','
          << (st.band ? csv::num(st.band->lo) : "") << ',' << (st.band ? csv::num(st.band->hi) : "")
          << ',' << fmt_opt(st.band_fraction) << '\n';
    }
  };
  for (const auto& b : summary.bins) rows(b);
  rows(summary.unbinned);
}

std::vector<HeightBin> default_trial_bins() { return {{0.0, 50.0}, {50.0, 100.0}, {100.0, 300.0}}; }

BandSet default_trial_bands() {
  BandSet bands;
  bands[static_cast<std::size_t>(Metric::Rsrp)] = ValueBand{-90.0, -75.0};
  bands[static_cast<std::size_t>(Metric::Sinr)] = ValueBand{-10.0, 5.0};
  bands[static_cast<std::size_t>(Metric::UlRate)] = ValueBand{4e6, 10e6};
  bands[static_cast<std::size_t>(Metric::Latency)] = ValueBand{200.0, 300.0};
  return bands;
}

std::vector<TrialRecord> synthesize_trial(std::uint64_t seed, int per_height) {
  if (per_height < 0) throw Error(ErrorKind::InvalidArgument, "per_height must be >= 0");
  constexpr double kOutlierShare = 0.03;
  std::vector<TrialRecord> out;
  const std::array<double, 3> heights = {50.0, 100.0, 300.0};
  for (std::size_t h = 0; h < heights.size(); ++h) {
    const double height = heights[h];
    const bool high = height > 100.0;
    for (int i = 0; i < per_height; ++i) {
      rng::Stream s(rng::derive_seed(seed, "synth-trial", h, static_cast<std::uint64_t>(i)));
      TrialRecord r;
      r.height_m = height;
      r.line = out.size() + 2;

      const double lat_lo = high ? 400.0 : 200.0;
      r.latency_ms = s.uniform() < kOutlierShare ? s.uniform(lat_lo - 80.0, lat_lo) : s.uniform(lat_lo, lat_lo + 100.0);

      if (high) r.rsrp_dbm = s.uniform(-100.0, -85.0);
      else r.rsrp_dbm = s.uniform() < kOutlierShare ? s.uniform(-100.0, -90.0) : s.uniform(-90.0, -75.0);

      const double sinr_hi = height <= 50.0 ? 5.0 : (high ? 0.0 : 3.0);
      r.sinr_db = s.uniform() < kOutlierShare ? s.uniform(-14.0, -10.0) : s.uniform(-10.0, sinr_hi);

      const double u = s.uniform();
      const double rate_hi = high ? 8e6 : 10e6;
      if (u < kOutlierShare) r.ul_rate_bps = s.uniform(10e6, 14e6);
      else if (u < 0.10) r.ul_rate_bps = s.uniform(1e6, 4e6);
      else r.ul_rate_bps = s.uniform(4e6, rate_hi);
      out.push_back(r);
    }
  }
  return out;
}

} // namespace skycell::fieldtrial
