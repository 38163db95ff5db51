#include "skycell/skycell.h"

#include "skycell/error.hpp"
#include "skycell/experiment.hpp"
#include "skycell/fieldtrial.hpp"
#include "skycell/linkrate.hpp"
#include "skycell/requirements.hpp"
#include "skycell/tree_oracle.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

using namespace skycell;

struct skc_config {
  ExperimentConfig value;
};
struct skc_layout {
  NetworkLayout value;
};
struct skc_dataset {
  Dataset value;
};
struct skc_model {
  ml::Model value;
};
struct skc_registry {
  requirements::Registry value;
};
struct skc_report {
  requirements::ComplianceReport value;
};
struct skc_trial {
  std::vector<fieldtrial::TrialRecord> value;
};
struct skc_summary {
  fieldtrial::TrialSummary value;
};

namespace {

thread_local std::string g_last_error;

skc_status status_of(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::InvalidArgument: return SKC_ERR_INVALID_ARGUMENT;
  case ErrorKind::Domain: return SKC_ERR_DOMAIN;
  case ErrorKind::Parse: return SKC_ERR_PARSE;
  case ErrorKind::Io: return SKC_ERR_IO;
  case ErrorKind::Degenerate: return SKC_ERR_DEGENERATE;
  case ErrorKind::Diverged: return SKC_ERR_DIVERGED;
  case ErrorKind::NotFound: return SKC_ERR_NOT_FOUND;
  case ErrorKind::Version: return SKC_ERR_VERSION;
  }
  return SKC_ERR_INTERNAL;
}

skc_status fail(skc_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `fn`, mapping exceptions to status codes. Nothing escapes the C boundary.
template <class Fn>
skc_status guarded(Fn&& fn) {
  try {
    fn();
    return SKC_OK;
  } catch (const Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SKC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SKC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SKC_ERR_INTERNAL, "unknown error");
  }
}

#define SKC_REQUIRE(cond)                                                                          \
  do {                                                                                             \
    if (!(cond)) return fail(SKC_ERR_INVALID_ARGUMENT, "null argument: " #cond);                   \
  } while (0)

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class Fn>
void write_stream_atomic(const char* path, Fn&& writer) {
  std::ostringstream buf;
  writer(buf);
  write_file_atomic(path, buf.str());
}

skc_metrics to_c(const ml::Metrics& m) {
  return skc_metrics{m.tp, m.fp, m.tn, m.fn, m.accuracy, m.precision, m.recall};
}

ml::GridBounds to_cpp(const skc_grid_bounds& b) {
  return {{b.rsrp_std_min, b.rsrp_std_max, b.rsrp_std_steps}, {b.rssi_min, b.rssi_max, b.rssi_steps}};
}

} // namespace

extern "C" {

const char* skc_version(void) { return kVersion.data(); }

const char* skc_status_name(skc_status status) {
  switch (status) {
  case SKC_OK: return "ok";
  case SKC_ERR_INVALID_ARGUMENT: return "invalid-argument";
  case SKC_ERR_DOMAIN: return "domain";
  case SKC_ERR_PARSE: return "parse";
  case SKC_ERR_IO: return "io";
  case SKC_ERR_DEGENERATE: return "degenerate";
  case SKC_ERR_DIVERGED: return "diverged";
  case SKC_ERR_NOT_FOUND: return "not-found";
  case SKC_ERR_VERSION: return "version";
  case SKC_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* skc_last_error(void) { return g_last_error.c_str(); }

void skc_string_free(char* s) { std::free(s); }

/* radio and link ----------------------------------------------------------- */

skc_status skc_los_probability(double d2d_m, double h_ut_m, double* out) {
  SKC_REQUIRE(out);
  return guarded([&] { *out = radio::los_probability(d2d_m, h_ut_m); });
}

skc_status skc_pathloss_db(double d3d_m, double fc_ghz, double h_ut_m, int los, double* out) {
  SKC_REQUIRE(out);
  return guarded([&] { *out = radio::pathloss_db(d3d_m, fc_ghz, h_ut_m, los != 0); });
}

skc_status skc_antenna_gain_dbi(double azimuth_off_deg, double elevation_deg, double downtilt_deg, double* out) {
  SKC_REQUIRE(out);
  if (!(azimuth_off_deg >= -180.0 && azimuth_off_deg <= 180.0))
    return fail(SKC_ERR_DOMAIN, "azimuth offset must be in [-180, 180]");
  return guarded([&] { *out = radio::antenna_gain_dbi(azimuth_off_deg, elevation_deg, downtilt_deg); });
}

skc_status skc_noise_power_dbm(double bw_hz, double noise_figure_db, double* out) {
  SKC_REQUIRE(out);
  return guarded([&] { *out = radio::noise_power_dbm(bw_hz, noise_figure_db); });
}

skc_status skc_spectral_efficiency(double sinr_db, double se_max_bps_hz, double attenuation, double* out) {
  SKC_REQUIRE(out);
  return guarded([&] { *out = linkrate::spectral_efficiency(sinr_db, se_max_bps_hz, attenuation); });
}

skc_status skc_throughput_bps(double sinr_db, double bw_hz, int layers, double attenuation, int mod_bits,
                              double* out) {
  SKC_REQUIRE(out);
  return guarded([&] {
    *out = linkrate::throughput_bps(sinr_db, bw_hz, layers,
                                    linkrate::LinkConfig{attenuation, mod_bits, linkrate::kCodeRateMax});
  });
}

skc_status skc_peak_rate_bps(double bw_hz, int layers, int mod_bits, double overhead_fraction, double* out) {
  SKC_REQUIRE(out);
  return guarded([&] { *out = linkrate::peak_rate_bps(bw_hz, layers, mod_bits, overhead_fraction); });
}

void skc_peak_rate_calibration(double* code_rate_max, double* dl_overhead, double* ul_overhead) {
  if (code_rate_max) *code_rate_max = linkrate::kCodeRateMax;
  if (dl_overhead) *dl_overhead = linkrate::kDownlinkOverhead;
  if (ul_overhead) *ul_overhead = linkrate::kUplinkOverhead;
}

/* config --------------------------------------------------------------------- */

skc_status skc_config_create_default(skc_config** out) {
  SKC_REQUIRE(out);
  return guarded([&] { *out = new skc_config{}; });
}

skc_status skc_config_parse(const char* json, skc_config** out) {
  SKC_REQUIRE(json && out);
  return guarded([&] { *out = new skc_config{config_from_json(json)}; });
}

skc_status skc_config_load(const char* path, skc_config** out) {
  SKC_REQUIRE(path && out);
  return guarded([&] { *out = new skc_config{load_config(path)}; });
}

skc_status skc_config_set(skc_config* config, const char* key_path, const char* json_value) {
  SKC_REQUIRE(config && key_path && json_value);
  return guarded([&] { set_config_value(config->value, key_path, json_value); });
}

skc_status skc_config_get(const skc_config* config, const char* key_path, char** out_json) {
  SKC_REQUIRE(config && key_path && out_json);
  return guarded([&] { *out_json = dup_string(get_config_value(config->value, key_path)); });
}

skc_status skc_config_to_json(const skc_config* config, char** out_json) {
  SKC_REQUIRE(config && out_json);
  return guarded([&] { *out_json = dup_string(config_to_json(config->value)); });
}

skc_status skc_config_hash(const skc_config* config, uint64_t* out) {
  SKC_REQUIRE(config && out);
  return guarded([&] { *out = config_hash(config->value); });
}

void skc_config_free(skc_config* config) { delete config; }

/* layout --------------------------------------------------------------------- */

skc_status skc_layout_build(const skc_config* config, skc_layout** out) {
  SKC_REQUIRE(config && out);
  return guarded([&] { *out = new skc_layout{build_layout(config->value)}; });
}

size_t skc_layout_site_count(const skc_layout* layout) { return layout ? layout->value.sites.size() : 0; }
size_t skc_layout_cell_count(const skc_layout* layout) { return layout ? layout->value.cells.size() : 0; }

skc_status skc_layout_write_csv(const skc_layout* layout, const char* path) {
  SKC_REQUIRE(layout && path);
  return guarded([&] { write_stream_atomic(path, [&](std::ostream& o) { write_layout_csv(o, layout->value); }); });
}

void skc_layout_free(skc_layout* layout) { delete layout; }

/* datasets ------------------------------------------------------------------- */

skc_status skc_simulate(const skc_config* config, const char* dataset_csv_path, const char* radio_csv_path,
                        skc_dataset** out) {
  SKC_REQUIRE(config);
  return guarded([&] {
    auto result = run_simulation(config->value);
    if (dataset_csv_path)
      write_stream_atomic(dataset_csv_path, [&](std::ostream& o) { write_dataset_csv(o, result.dataset); });
    if (radio_csv_path) {
      write_stream_atomic(radio_csv_path, [&](std::ostream& o) {
        write_radio_csv_header(o);
        for (const auto& s : result.radio) write_radio_csv_row(o, s);
      });
    }
    if (out) *out = new skc_dataset{std::move(result.dataset)};
  });
}

skc_status skc_dataset_from_samples(const skc_sample* samples, size_t count, skc_dataset** out) {
  SKC_REQUIRE(out && (samples || count == 0));
  return guarded([&] {
    Dataset data;
    for (size_t i = 0; i < count; ++i) {
      const auto& c = samples[i];
      if (c.ue_class < SKC_UE_INDOOR || c.ue_class > SKC_UE_AERIAL || (c.label != 0 && c.label != 1))
        throw Error(ErrorKind::InvalidArgument, "sample " + std::to_string(i) + ": invalid class or label");
      LabeledSample s;
      s.drop_index = c.drop_index;
      s.ue_class = static_cast<UeClass>(c.ue_class);
      s.height_m = c.height_m;
      s.features = {c.rssi_dbm, c.rsrp_std_db};
      s.label = c.label ? Label::Drone : Label::Terrestrial;
      data.samples.push_back(s);
    }
    *out = new skc_dataset{std::move(data)};
  });
}

skc_status skc_dataset_load_csv(const char* path, skc_dataset** out) {
  SKC_REQUIRE(path && out);
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, std::string("cannot open dataset '") + path + "'");
    *out = new skc_dataset{read_dataset_csv(in)};
  });
}

skc_status skc_dataset_write_csv(const skc_dataset* dataset, const char* path) {
  SKC_REQUIRE(dataset && path);
  return guarded([&] { write_stream_atomic(path, [&](std::ostream& o) { write_dataset_csv(o, dataset->value); }); });
}

size_t skc_dataset_size(const skc_dataset* dataset) { return dataset ? dataset->value.size() : 0; }

skc_status skc_dataset_get(const skc_dataset* dataset, size_t index, skc_sample* out) {
  SKC_REQUIRE(dataset && out);
  if (index >= dataset->value.size()) return fail(SKC_ERR_NOT_FOUND, "sample index out of range");
  const Dataset raw = unstandardize(Dataset{{dataset->value.samples[index]}, dataset->value.standardization});
  const auto& s = raw.samples.front();
  *out = skc_sample{s.drop_index, static_cast<int>(s.ue_class), s.height_m,
                    s.features.rssi_dbm, s.features.rsrp_std_db, static_cast<int>(s.label)};
  return SKC_OK;
}

void skc_dataset_free(skc_dataset* dataset) { delete dataset; }

/* models --------------------------------------------------------------------- */

skc_status skc_train(const skc_dataset* dataset, skc_model_kind kind, const skc_config* config,
                     skc_model** out_model, char** out_metrics_json) {
  SKC_REQUIRE(dataset && config && out_model);
  return guarded([&] {
    const auto result = train_model(dataset->value, kind == SKC_MODEL_TREE ? ModelKind::Tree : ModelKind::Logistic,
                                    config->value);
    char* metrics = out_metrics_json ? dup_string(train_result_to_json(result, config->value)) : nullptr;
    *out_model = new skc_model{result.model};
    if (out_metrics_json) *out_metrics_json = metrics;
  });
}

skc_status skc_tree_train_bruteforce(const skc_dataset* dataset, const skc_config* config, skc_model** out) {
  SKC_REQUIRE(dataset && config && out);
  return guarded([&] {
    *out = new skc_model{oracle::brute_force_tree(unstandardize(dataset->value), config->value.tree)};
  });
}

skc_status skc_model_parse(const char* json, skc_model** out) {
  SKC_REQUIRE(json && out);
  return guarded([&] { *out = new skc_model{ml::model_from_json(json)}; });
}

skc_status skc_model_load(const char* path, skc_model** out) {
  SKC_REQUIRE(path && out);
  return guarded([&] { *out = new skc_model{ml::model_from_json(read_file(path))}; });
}

skc_status skc_model_to_json(const skc_model* model, char** out_json) {
  SKC_REQUIRE(model && out_json);
  return guarded([&] { *out_json = dup_string(ml::model_to_json(model->value)); });
}

skc_status skc_model_save(const skc_model* model, const char* path) {
  SKC_REQUIRE(model && path);
  return guarded([&] { write_file_atomic(path, ml::model_to_json(model->value)); });
}

skc_model_kind skc_model_get_kind(const skc_model* model) {
  return model && std::holds_alternative<ml::TreeModel>(model->value) ? SKC_MODEL_TREE : SKC_MODEL_LOGISTIC;
}

skc_status skc_model_predict(const skc_model* model, double rssi_dbm, double rsrp_std_db, double* out_probability) {
  SKC_REQUIRE(model && out_probability);
  return guarded([&] { *out_probability = ml::predict_proba(model->value, FeatureVector{rssi_dbm, rsrp_std_db}); });
}

skc_status skc_model_evaluate(const skc_model* model, const skc_dataset* dataset, double threshold,
                              skc_metrics* out) {
  SKC_REQUIRE(model && dataset && out);
  return guarded([&] { *out = to_c(ml::evaluate(model->value, dataset->value, threshold)); });
}

skc_status skc_model_evaluate_json(const skc_model* model, const skc_dataset* dataset, double threshold,
                                   char** out_json) {
  SKC_REQUIRE(model && dataset && out_json);
  return guarded([&] {
    *out_json = dup_string(evaluation_to_json(evaluate_by_height(model->value, dataset->value, threshold)));
  });
}

skc_status skc_grid_bounds_from_config(const skc_config* config, skc_grid_bounds* out) {
  SKC_REQUIRE(config && out);
  const auto& g = config->value.grid;
  *out = skc_grid_bounds{g.rsrp_std.min, g.rsrp_std.max, g.rsrp_std.steps, g.rssi.min, g.rssi.max, g.rssi.steps};
  return SKC_OK;
}

skc_status skc_model_grid(const skc_model* model, const skc_grid_bounds* bounds, double* values, size_t capacity) {
  SKC_REQUIRE(model && bounds && values);
  return guarded([&] {
    const auto grid = ml::probability_grid(model->value, to_cpp(*bounds));
    if (capacity < grid.values.size())
      throw Error(ErrorKind::InvalidArgument,
                  "grid buffer too small: need " + std::to_string(grid.values.size()) + " values");
    std::copy(grid.values.begin(), grid.values.end(), values);
  });
}

skc_status skc_model_grid_write_csv(const skc_model* model, const skc_grid_bounds* bounds, const char* path) {
  SKC_REQUIRE(model && bounds && path);
  return guarded([&] {
    const auto grid = ml::probability_grid(model->value, to_cpp(*bounds));
    write_stream_atomic(path, [&](std::ostream& o) { ml::write_grid_csv(o, grid); });
  });
}

void skc_model_free(skc_model* model) { delete model; }

/* requirements ----------------------------------------------------------------- */

namespace {
const skc_registry* builtin_registry() {
  static const skc_registry reg{requirements::Registry::builtin()};
  return &reg;
}
} // namespace

skc_status skc_registry_builtin(const skc_registry** out) {
  SKC_REQUIRE(out);
  return guarded([&] { *out = builtin_registry(); });
}

skc_status skc_registry_load(const char* path, skc_registry** out) {
  SKC_REQUIRE(path && out);
  return guarded([&] { *out = new skc_registry{requirements::Registry::load(path)}; });
}

void skc_registry_free(const skc_registry* registry) {
  if (registry && registry != builtin_registry()) delete registry;
}

skc_status skc_registry_application_names(const skc_registry* registry, char** out) {
  SKC_REQUIRE(registry && out);
  return guarded([&] {
    std::string names;
    for (const auto& n : registry->value.application_names()) names += n + "\n";
    *out = dup_string(names);
  });
}

skc_status skc_registry_profile_json(const skc_registry* registry, const char* application, char** out_json) {
  SKC_REQUIRE(registry && application && out_json);
  return guarded([&] {
    const auto p = registry->value.lookup(application);
    std::ostringstream o;
    o.precision(17);
    o << "{\n  \"application\": \"" << p.application << "\",\n"
      << "  \"altitude_band_m\": [" << p.altitude_min_m << ", " << p.altitude_max_m << "],\n"
      << "  \"coverage_scenario\": \"" << requirements::to_string(p.coverage_scenario) << "\",\n"
      << "  \"uplink_rate_bps\": " << p.uplink_rate_bps << ",\n"
      << "  \"downlink_rate_bps\": ";
    if (p.downlink_rate_bps) o << *p.downlink_rate_bps;
    else o << "null";
    o << ",\n  \"e2e_latency_ms\": " << p.e2e_latency_ms << ",\n"
      << "  \"network_latency_ms\": " << p.network_latency_ms << ",\n"
      << "  \"positioning_accuracy_m\": " << p.positioning_accuracy_m << "\n}\n";
    *out_json = dup_string(o.str());
  });
}

skc_status skc_expected_5g_rates(const skc_registry* registry, double fc_ghz, double cell_radius_m, skc_rate5g* out,
                                 size_t capacity, size_t* count) {
  SKC_REQUIRE(registry && count && (out || capacity == 0));
  return guarded([&] {
    const auto rows = registry->value.expected_5g_rates(fc_ghz, cell_radius_m);
    *count = rows.size();
    for (size_t i = 0; i < rows.size() && i < capacity; ++i) {
      const auto& r = rows[i];
      skc_rate5g c{r.fc_ghz, r.bw_hz, r.cell_radius_m, r.dl_peak_bps, r.ul_peak_bps, r.dl_edge_bps, r.ul_edge_bps, {}};
      std::strncpy(c.antenna_config, r.antenna_config.c_str(), sizeof(c.antenna_config) - 1);
      out[i] = c;
    }
  });
}

skc_status skc_gate_kpi_json(const skc_registry* registry, const char* kpi_json, const char* application,
                             skc_report** out) {
  SKC_REQUIRE(registry && kpi_json && application && out);
  return guarded([&] {
    const auto profile = registry->value.lookup(application);
    *out = new skc_report{requirements::gate(requirements::kpi_from_json(kpi_json), profile)};
  });
}

skc_verdict skc_report_verdict(const skc_report* report) {
  if (!report) return SKC_VERDICT_FAIL;
  switch (report->value.verdict) {
  case requirements::Verdict::Pass: return SKC_VERDICT_PASS;
  case requirements::Verdict::Fail: return SKC_VERDICT_FAIL;
  case requirements::Verdict::PassWithGaps: return SKC_VERDICT_PASS_WITH_GAPS;
  }
  return SKC_VERDICT_FAIL;
}

skc_status skc_report_dimension(const skc_report* report, const char* dimension, skc_dimension_status* out) {
  SKC_REQUIRE(report && dimension && out);
  for (const auto& d : report->value.dimensions) {
    if (d.dimension == dimension) {
      *out = d.status == requirements::DimensionStatus::Pass   ? SKC_DIM_PASS
             : d.status == requirements::DimensionStatus::Fail ? SKC_DIM_FAIL
                                                               : SKC_DIM_UNKNOWN;
      return SKC_OK;
    }
  }
  return fail(SKC_ERR_NOT_FOUND, std::string("report has no dimension '") + dimension + "'");
}

skc_status skc_report_to_json(const skc_report* report, char** out_json) {
  SKC_REQUIRE(report && out_json);
  return guarded([&] { *out_json = dup_string(requirements::report_to_json(report->value)); });
}

skc_status skc_report_to_text(const skc_report* report, char** out_text) {
  SKC_REQUIRE(report && out_text);
  return guarded([&] { *out_text = dup_string(requirements::report_to_text(report->value)); });
}

void skc_report_free(skc_report* report) { delete report; }

/* field trial ------------------------------------------------------------------- */

skc_status skc_trial_load_csv(const char* path, skc_trial** out) {
  SKC_REQUIRE(path && out);
  return guarded([&] { *out = new skc_trial{fieldtrial::ingest_csv(path)}; });
}

skc_status skc_trial_synthesize(uint64_t seed, int per_height, skc_trial** out) {
  SKC_REQUIRE(out);
  return guarded([&] { *out = new skc_trial{fieldtrial::synthesize_trial(seed, per_height)}; });
}

skc_status skc_trial_write_csv(const skc_trial* trial, const char* path) {
  SKC_REQUIRE(trial && path);
  return guarded(
      [&] { write_stream_atomic(path, [&](std::ostream& o) { fieldtrial::write_trial_csv(o, trial->value); }); });
}

size_t skc_trial_size(const skc_trial* trial) { return trial ? trial->value.size() : 0; }

void skc_trial_free(skc_trial* trial) { delete trial; }

skc_status skc_trial_summarize(const skc_trial* trial, const skc_height_bin* bins, size_t bin_count,
                               const skc_value_band* bands, size_t band_count, skc_summary** out) {
  SKC_REQUIRE(trial && out);
  return guarded([&] {
    std::vector<fieldtrial::HeightBin> cpp_bins;
    if (bins) {
      for (size_t i = 0; i < bin_count; ++i) cpp_bins.push_back({bins[i].lo_m, bins[i].hi_m});
    } else {
      cpp_bins = fieldtrial::default_trial_bins();
    }
    fieldtrial::BandSet cpp_bands{};
    if (bands) {
      for (size_t i = 0; i < band_count; ++i) {
        if (bands[i].metric < 0 || bands[i].metric >= static_cast<int>(fieldtrial::kMetricCount))
          throw Error(ErrorKind::InvalidArgument, "band metric out of range");
        cpp_bands[static_cast<size_t>(bands[i].metric)] = fieldtrial::ValueBand{bands[i].lo, bands[i].hi};
      }
    } else {
      cpp_bands = fieldtrial::default_trial_bands();
    }
    *out = new skc_summary{fieldtrial::summarize(trial->value, cpp_bins, cpp_bands)};
  });
}

size_t skc_summary_bin_count(const skc_summary* summary) { return summary ? summary->value.bins.size() : 0; }

namespace {
const fieldtrial::BinSummary* bin_at(const skc_summary* summary, size_t index) {
  if (index < summary->value.bins.size()) return &summary->value.bins[index];
  if (index == summary->value.bins.size()) return &summary->value.unbinned;
  return nullptr;
}
} // namespace

skc_status skc_summary_bin_records(const skc_summary* summary, size_t bin_index, size_t* out) {
  SKC_REQUIRE(summary && out);
  const auto* bin = bin_at(summary, bin_index);
  if (!bin) return fail(SKC_ERR_NOT_FOUND, "bin index out of range");
  *out = bin->count;
  return SKC_OK;
}

skc_status skc_summary_stats(const skc_summary* summary, size_t bin_index, skc_metric metric, skc_metric_stats* out) {
  SKC_REQUIRE(summary && out);
  const auto* bin = bin_at(summary, bin_index);
  if (!bin) return fail(SKC_ERR_NOT_FOUND, "bin index out of range");
  if (metric < SKC_METRIC_RSRP || metric > SKC_METRIC_NETWORK_LATENCY)
    return fail(SKC_ERR_INVALID_ARGUMENT, "metric out of range");
  const auto& st = bin->metrics[static_cast<size_t>(metric)];
  *out = skc_metric_stats{st.count,
                          st.median.has_value(),
                          st.p25.value_or(0.0),
                          st.median.value_or(0.0),
                          st.p75.value_or(0.0),
                          st.band_fraction.has_value(),
                          st.band_fraction.value_or(0.0)};
  return SKC_OK;
}

skc_status skc_summary_to_json(const skc_summary* summary, char** out_json) {
  SKC_REQUIRE(summary && out_json);
  return guarded([&] { *out_json = dup_string(fieldtrial::summary_to_json(summary->value)); });
}

skc_status skc_summary_write_csv(const skc_summary* summary, const char* path) {
  SKC_REQUIRE(summary && path);
  return guarded(
      [&] { write_stream_atomic(path, [&](std::ostream& o) { fieldtrial::write_summary_csv(o, summary->value); }); });
}

skc_status skc_gate_trial(const skc_registry* registry, const skc_summary* summary, size_t bin_index,
                          const char* application, skc_report** out) {
  SKC_REQUIRE(registry && summary && application && out);
  return guarded([&] {
    const auto profile = registry->value.lookup(application);
    *out = new skc_report{fieldtrial::trial_gate(summary->value, profile, bin_index)};
  });
}

void skc_summary_free(skc_summary* summary) { delete summary; }

skc_status skc_write_text_atomic(const char* path, const char* text) {
  SKC_REQUIRE(path && text);
  return guarded([&] { write_file_atomic(path, text); });
}

} // extern "C"
