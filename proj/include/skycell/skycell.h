/*
 * skycell C API.
 *
 * Every object is an opaque handle created by a skc_*_create/load/... call and
 * released with the matching skc_*_free. Every fallible call returns an
 * skc_status; on failure a message is available from skc_last_error() on the
 * same thread until the next failing call. Strings returned through char**
 * are owned by the caller and released with skc_string_free.
 */
#ifndef SKYCELL_H
#define SKYCELL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SKYCELL_BUILDING)
#    define SKYCELL_API __declspec(dllexport)
#  else
#    define SKYCELL_API __declspec(dllimport)
#  endif
#else
#  define SKYCELL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum skc_status {
  SKC_OK = 0,
  SKC_ERR_INVALID_ARGUMENT = 1,
  SKC_ERR_DOMAIN = 2,
  SKC_ERR_PARSE = 3,
  SKC_ERR_IO = 4,
  SKC_ERR_DEGENERATE = 5,
  SKC_ERR_DIVERGED = 6,
  SKC_ERR_NOT_FOUND = 7,
  SKC_ERR_VERSION = 8,
  SKC_ERR_INTERNAL = 9
} skc_status;

SKYCELL_API const char* skc_version(void);
SKYCELL_API const char* skc_status_name(skc_status status);
SKYCELL_API const char* skc_last_error(void);
SKYCELL_API void skc_string_free(char* s);

/* ---- radio and link primitives ---------------------------------------- */

SKYCELL_API skc_status skc_los_probability(double d2d_m, double h_ut_m, double* out);
SKYCELL_API skc_status skc_pathloss_db(double d3d_m, double fc_ghz, double h_ut_m, int los, double* out);
SKYCELL_API skc_status skc_antenna_gain_dbi(double azimuth_off_deg, double elevation_deg,
                                            double downtilt_deg, double* out);
SKYCELL_API skc_status skc_noise_power_dbm(double bw_hz, double noise_figure_db, double* out);
SKYCELL_API skc_status skc_spectral_efficiency(double sinr_db, double se_max_bps_hz,
                                               double attenuation, double* out);
SKYCELL_API skc_status skc_throughput_bps(double sinr_db, double bw_hz, int layers, double attenuation,
                                          int mod_bits, double* out);
SKYCELL_API skc_status skc_peak_rate_bps(double bw_hz, int layers, int mod_bits, double overhead_fraction,
                                         double* out);
/* Calibrated constants used by the peak-rate estimator. Any pointer may be NULL. */
SKYCELL_API void skc_peak_rate_calibration(double* code_rate_max, double* dl_overhead, double* ul_overhead);

/* ---- experiment configuration ----------------------------------------- */

typedef struct skc_config skc_config;

SKYCELL_API skc_status skc_config_create_default(skc_config** out);
SKYCELL_API skc_status skc_config_parse(const char* json, skc_config** out);
SKYCELL_API skc_status skc_config_load(const char* path, skc_config** out);
/* key_path is dotted ("layout.isd_m"); value is a JSON literal (bare words are strings). */
SKYCELL_API skc_status skc_config_set(skc_config* config, const char* key_path, const char* json_value);
SKYCELL_API skc_status skc_config_get(const skc_config* config, const char* key_path, char** out_json);
SKYCELL_API skc_status skc_config_to_json(const skc_config* config, char** out_json);
SKYCELL_API skc_status skc_config_hash(const skc_config* config, uint64_t* out);
SKYCELL_API void skc_config_free(skc_config* config);

/* ---- network layout ---------------------------------------------------- */

typedef struct skc_layout skc_layout;

SKYCELL_API skc_status skc_layout_build(const skc_config* config, skc_layout** out);
SKYCELL_API size_t skc_layout_site_count(const skc_layout* layout);
SKYCELL_API size_t skc_layout_cell_count(const skc_layout* layout);
SKYCELL_API skc_status skc_layout_write_csv(const skc_layout* layout, const char* path);
SKYCELL_API void skc_layout_free(skc_layout* layout);

/* ---- datasets ------------------------------------------------------------ */

typedef enum skc_ue_class { SKC_UE_INDOOR = 0, SKC_UE_OUTDOOR = 1, SKC_UE_AERIAL = 2 } skc_ue_class;

typedef struct skc_sample {
  int drop_index;
  int ue_class; /* skc_ue_class */
  double height_m;
  double rssi_dbm;
  double rsrp_std_db;
  int label; /* 1 = drone, 0 = terrestrial */
} skc_sample;

typedef struct skc_dataset skc_dataset;

/* Runs layout -> placement -> radio -> features. Either path may be NULL to skip
 * that file; out may be NULL when only files are wanted. Files are written
 * atomically. */
SKYCELL_API skc_status skc_simulate(const skc_config* config, const char* dataset_csv_path,
                                    const char* radio_csv_path, skc_dataset** out);
SKYCELL_API skc_status skc_dataset_from_samples(const skc_sample* samples, size_t count, skc_dataset** out);
SKYCELL_API skc_status skc_dataset_load_csv(const char* path, skc_dataset** out);
SKYCELL_API skc_status skc_dataset_write_csv(const skc_dataset* dataset, const char* path);
SKYCELL_API size_t skc_dataset_size(const skc_dataset* dataset);
SKYCELL_API skc_status skc_dataset_get(const skc_dataset* dataset, size_t index, skc_sample* out);
SKYCELL_API void skc_dataset_free(skc_dataset* dataset);

/* ---- models -------------------------------------------------------------- */

typedef enum skc_model_kind { SKC_MODEL_LOGISTIC = 0, SKC_MODEL_TREE = 1 } skc_model_kind;

typedef struct skc_metrics {
  size_t tp, fp, tn, fn;
  double accuracy, precision, recall;
} skc_metrics;

typedef struct skc_grid_bounds {
  double rsrp_std_min, rsrp_std_max;
  int rsrp_std_steps;
  double rssi_min, rssi_max;
  int rssi_steps;
} skc_grid_bounds;

typedef struct skc_model skc_model;

/* Stratified split (ml.train_fraction, seed) then fit. out_metrics_json may be NULL. */
SKYCELL_API skc_status skc_train(const skc_dataset* dataset, skc_model_kind kind, const skc_config* config,
                                 skc_model** out_model, char** out_metrics_json);
/* Exhaustive-split reference tree on the whole dataset (ml.max_depth, ml.min_leaf). */
SKYCELL_API skc_status skc_tree_train_bruteforce(const skc_dataset* dataset, const skc_config* config,
                                                 skc_model** out);
SKYCELL_API skc_status skc_model_parse(const char* json, skc_model** out);
SKYCELL_API skc_status skc_model_load(const char* path, skc_model** out);
SKYCELL_API skc_status skc_model_to_json(const skc_model* model, char** out_json);
SKYCELL_API skc_status skc_model_save(const skc_model* model, const char* path);
SKYCELL_API skc_model_kind skc_model_get_kind(const skc_model* model);
SKYCELL_API skc_status skc_model_predict(const skc_model* model, double rssi_dbm, double rsrp_std_db,
                                         double* out_probability);
SKYCELL_API skc_status skc_model_evaluate(const skc_model* model, const skc_dataset* dataset, double threshold,
                                          skc_metrics* out);
/* Overall and per-height metrics as JSON. */
SKYCELL_API skc_status skc_model_evaluate_json(const skc_model* model, const skc_dataset* dataset,
                                               double threshold, char** out_json);
SKYCELL_API skc_status skc_grid_bounds_from_config(const skc_config* config, skc_grid_bounds* out);
/* Row-major over RSSI (rows) and RSRP STD (columns); capacity must cover all points. */
SKYCELL_API skc_status skc_model_grid(const skc_model* model, const skc_grid_bounds* bounds, double* values,
                                      size_t capacity);
SKYCELL_API skc_status skc_model_grid_write_csv(const skc_model* model, const skc_grid_bounds* bounds,
                                                const char* path);
SKYCELL_API void skc_model_free(skc_model* model);

/* ---- requirements --------------------------------------------------------- */

typedef struct skc_registry skc_registry;

typedef struct skc_rate5g {
  double fc_ghz, bw_hz, cell_radius_m;
  double dl_peak_bps, ul_peak_bps, dl_edge_bps, ul_edge_bps;
  char antenna_config[64];
} skc_rate5g;

typedef enum skc_verdict {
  SKC_VERDICT_PASS = 0,
  SKC_VERDICT_FAIL = 1,
  SKC_VERDICT_PASS_WITH_GAPS = 2
} skc_verdict;

typedef enum skc_dimension_status {
  SKC_DIM_PASS = 0,
  SKC_DIM_FAIL = 1,
  SKC_DIM_UNKNOWN = 2
} skc_dimension_status;

/* The built-in registry is static; passing it to skc_registry_free is a no-op. */
SKYCELL_API skc_status skc_registry_builtin(const skc_registry** out);
SKYCELL_API skc_status skc_registry_load(const char* path, skc_registry** out);
SKYCELL_API void skc_registry_free(const skc_registry* registry);
/* Newline-separated application names. */
SKYCELL_API skc_status skc_registry_application_names(const skc_registry* registry, char** out);
SKYCELL_API skc_status skc_registry_profile_json(const skc_registry* registry, const char* application,
                                                 char** out_json);
/* Writes up to capacity entries; *count receives the number of matches. */
SKYCELL_API skc_status skc_expected_5g_rates(const skc_registry* registry, double fc_ghz, double cell_radius_m,
                                             skc_rate5g* out, size_t capacity, size_t* count);

typedef struct skc_report skc_report;

SKYCELL_API skc_status skc_gate_kpi_json(const skc_registry* registry, const char* kpi_json,
                                         const char* application, skc_report** out);
SKYCELL_API skc_verdict skc_report_verdict(const skc_report* report);
SKYCELL_API skc_status skc_report_dimension(const skc_report* report, const char* dimension,
                                            skc_dimension_status* out);
SKYCELL_API skc_status skc_report_to_json(const skc_report* report, char** out_json);
SKYCELL_API skc_status skc_report_to_text(const skc_report* report, char** out_text);
SKYCELL_API void skc_report_free(skc_report* report);

/* ---- field-trial logs ------------------------------------------------------ */

typedef enum skc_metric {
  SKC_METRIC_RSRP = 0,
  SKC_METRIC_SINR = 1,
  SKC_METRIC_UL_RATE = 2,
  SKC_METRIC_LATENCY = 3,
  SKC_METRIC_NETWORK_LATENCY = 4
} skc_metric;

typedef struct skc_height_bin {
  double lo_m; /* exclusive */
  double hi_m; /* inclusive */
} skc_height_bin;

typedef struct skc_value_band {
  int metric; /* skc_metric */
  double lo, hi;
} skc_value_band;

typedef struct skc_metric_stats {
  size_t count;
  int has_values;
  double p25, median, p75;
  int has_band_fraction;
  double band_fraction;
} skc_metric_stats;

typedef struct skc_trial skc_trial;
typedef struct skc_summary skc_summary;

SKYCELL_API skc_status skc_trial_load_csv(const char* path, skc_trial** out);
SKYCELL_API skc_status skc_trial_synthesize(uint64_t seed, int per_height, skc_trial** out);
SKYCELL_API skc_status skc_trial_write_csv(const skc_trial* trial, const char* path);
SKYCELL_API size_t skc_trial_size(const skc_trial* trial);
SKYCELL_API void skc_trial_free(skc_trial* trial);

/* bins == NULL uses (0,50], (50,100], (100,300]; bands == NULL uses the default bands. */
SKYCELL_API skc_status skc_trial_summarize(const skc_trial* trial, const skc_height_bin* bins, size_t bin_count,
                                           const skc_value_band* bands, size_t band_count, skc_summary** out);
SKYCELL_API size_t skc_summary_bin_count(const skc_summary* summary);
/* bin_index == skc_summary_bin_count() addresses the unbinned bucket. */
SKYCELL_API skc_status skc_summary_bin_records(const skc_summary* summary, size_t bin_index, size_t* out);
SKYCELL_API skc_status skc_summary_stats(const skc_summary* summary, size_t bin_index, skc_metric metric,
                                         skc_metric_stats* out);
SKYCELL_API skc_status skc_summary_to_json(const skc_summary* summary, char** out_json);
SKYCELL_API skc_status skc_summary_write_csv(const skc_summary* summary, const char* path);
SKYCELL_API skc_status skc_gate_trial(const skc_registry* registry, const skc_summary* summary, size_t bin_index,
                                      const char* application, skc_report** out);
SKYCELL_API void skc_summary_free(skc_summary* summary);

/* ---- files ------------------------------------------------------------------ */

SKYCELL_API skc_status skc_write_text_atomic(const char* path, const char* text);

#ifdef __cplusplus
}
#endif

#endif /* SKYCELL_H */
