#include "skycell/skycell.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitError = 3;

struct CliError : std::runtime_error {
  skc_status status;
  CliError(skc_status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
};

void check(skc_status s) {
  if (s != SKC_OK) throw CliError(s, std::string(skc_status_name(s)) + ": " + skc_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using Config = std::unique_ptr<skc_config, Deleter<skc_config, skc_config_free>>;
using Layout = std::unique_ptr<skc_layout, Deleter<skc_layout, skc_layout_free>>;
using DatasetH = std::unique_ptr<skc_dataset, Deleter<skc_dataset, skc_dataset_free>>;
using ModelH = std::unique_ptr<skc_model, Deleter<skc_model, skc_model_free>>;
using Report = std::unique_ptr<skc_report, Deleter<skc_report, skc_report_free>>;
using Trial = std::unique_ptr<skc_trial, Deleter<skc_trial, skc_trial_free>>;
using Summary = std::unique_ptr<skc_summary, Deleter<skc_summary, skc_summary_free>>;

// Takes ownership of a malloc'd string from the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  skc_string_free(s);
  return out;
}

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out_dir;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "Experiment config JSON")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Master seed (overrides config)");
  cmd->add_option("--threads", o.threads, "Worker threads (overrides config)")->check(CLI::PositiveNumber);
  cmd->add_option("--out-dir", o.out_dir, "Output directory (overrides config)");
  cmd->add_option("--set", o.sets, "Override one config key, e.g. --set layout.isd_m=400")->take_all();
}

// Everything a command run needs to know, plus what goes into its manifest.
struct Run {
  std::string command;
  Config config;
  fs::path out_dir;
  json inputs = json::object();
  json outputs = json::array();
  std::optional<std::string> verdict;

  fs::path output(const std::string& explicit_path, const std::string& default_name) {
    fs::path p = explicit_path.empty() ? out_dir / default_name : fs::path(explicit_path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    outputs.push_back(p.generic_string());
    return p;
  }
};

std::string config_string(const skc_config* cfg, const char* key) {
  char* raw = nullptr;
  check(skc_config_get(cfg, key, &raw));
  return json::parse(take(raw)).get<std::string>();
}

std::uint64_t config_seed(const skc_config* cfg) {
  char* raw = nullptr;
  check(skc_config_get(cfg, "seed", &raw));
  return json::parse(take(raw)).get<std::uint64_t>();
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Config resolve_config(const CommonOptions& o) {
  skc_config* raw = nullptr;
  if (o.config_path.empty()) check(skc_config_create_default(&raw));
  else check(skc_config_load(o.config_path.c_str(), &raw));
  Config cfg(raw);
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw CliError(SKC_ERR_INVALID_ARGUMENT, "--set expects key=value, got '" + kv + "'");
    check(skc_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
  }
  if (o.seed) check(skc_config_set(cfg.get(), "seed", std::to_string(*o.seed).c_str()));
  if (o.threads) check(skc_config_set(cfg.get(), "threads", std::to_string(*o.threads).c_str()));
  if (!o.out_dir.empty()) check(skc_config_set(cfg.get(), "output_dir", json(o.out_dir).dump().c_str()));
  return cfg;
}

void write_manifest(const Run& run, const CommonOptions& o, const std::string& status, const std::string& error,
                    int exit_code) {
  json m;
  m["command"] = run.command;
  m["version"] = skc_version();
  if (run.config) {
    std::uint64_t hash = 0;
    skc_config_hash(run.config.get(), &hash);
    m["seed"] = config_seed(run.config.get());
    m["config_hash"] = hex64(hash);
  } else {
    m["seed"] = nullptr;
    m["config_hash"] = nullptr;
  }
  m["config_path"] = o.config_path.empty() ? json(nullptr) : json(o.config_path);
  m["inputs"] = run.inputs;
  m["outputs"] = run.outputs;
  m["status"] = status;
  m["error"] = error.empty() ? json(nullptr) : json(error);
  m["exit_code"] = exit_code;
  if (run.verdict) m["verdict"] = *run.verdict;

  const fs::path dir = run.out_dir.empty() ? fs::path(o.out_dir.empty() ? "out" : o.out_dir) : run.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path path = dir / ("manifest_" + run.command + ".json");
  if (skc_write_text_atomic(path.string().c_str(), (m.dump(2) + "\n").c_str()) != SKC_OK)
    std::cerr << "warning: could not write " << path.string() << ": " << skc_last_error() << "\n";
}

/* subcommands -------------------------------------------------------------- */

struct LayoutArgs {
  std::string out;
};

int cmd_layout(Run& run, const LayoutArgs& a) {
  skc_layout* raw = nullptr;
  check(skc_layout_build(run.config.get(), &raw));
  Layout layout(raw);
  const auto path = run.output(a.out, "layout.csv");
  check(skc_layout_write_csv(layout.get(), path.string().c_str()));
  std::cout << skc_layout_site_count(layout.get()) << " sites, " << skc_layout_cell_count(layout.get())
            << " cells -> " << path.string() << "\n";
  return 0;
}

struct SimulateArgs {
  std::string dataset_out;
  std::string radio_out;
};

int cmd_simulate(Run& run, const SimulateArgs& a) {
  const auto dataset_path = run.output(a.dataset_out, "dataset.csv");
  const auto radio_path = run.output(a.radio_out, "radio.csv");
  skc_dataset* raw = nullptr;
  check(skc_simulate(run.config.get(), dataset_path.string().c_str(), radio_path.string().c_str(), &raw));
  DatasetH ds(raw);
  std::cout << skc_dataset_size(ds.get()) << " samples -> " << dataset_path.string() << "\n";
  return 0;
}

DatasetH load_dataset(Run& run, const std::string& path) {
  const std::string p = path.empty() ? (run.out_dir / "dataset.csv").string() : path;
  run.inputs["dataset"] = p;
  skc_dataset* raw = nullptr;
  check(skc_dataset_load_csv(p.c_str(), &raw));
  return DatasetH(raw);
}

ModelH load_model(Run& run, const std::string& path) {
  run.inputs["model"] = path;
  skc_model* raw = nullptr;
  check(skc_model_load(path.c_str(), &raw));
  return ModelH(raw);
}

skc_model_kind parse_kind(const std::string& s) { return s == "tree" ? SKC_MODEL_TREE : SKC_MODEL_LOGISTIC; }

struct TrainArgs {
  std::string dataset;
  std::string model = "logistic";
  std::string model_out;
  std::string metrics_out;
};

int cmd_train(Run& run, const TrainArgs& a) {
  auto ds = load_dataset(run, a.dataset);
  skc_model* raw = nullptr;
  char* metrics = nullptr;
  check(skc_train(ds.get(), parse_kind(a.model), run.config.get(), &raw, &metrics));
  ModelH model(raw);
  const std::string metrics_json = take(metrics);
  const auto model_path = run.output(a.model_out, "model_" + a.model + ".json");
  const auto metrics_path = run.output(a.metrics_out, "metrics_" + a.model + ".json");
  check(skc_model_save(model.get(), model_path.string().c_str()));
  check(skc_write_text_atomic(metrics_path.string().c_str(), metrics_json.c_str()));

  const auto m = json::parse(metrics_json);
  std::cout << a.model << " model -> " << model_path.string() << "\n";
  if (m.contains("test") && !m["test"].is_null())
    std::cout << "held-out accuracy " << m["test"]["overall"]["accuracy"].get<double>() << "\n";
  return 0;
}

struct GridArgs {
  std::string model;
  std::string out;
  std::optional<double> rsrp_std_min, rsrp_std_max, rssi_min, rssi_max;
  std::optional<int> rsrp_std_steps, rssi_steps;
};

int cmd_grid(Run& run, const GridArgs& a) {
  auto model = load_model(run, a.model);
  skc_grid_bounds b{};
  check(skc_grid_bounds_from_config(run.config.get(), &b));
  if (a.rsrp_std_min) b.rsrp_std_min = *a.rsrp_std_min;
  if (a.rsrp_std_max) b.rsrp_std_max = *a.rsrp_std_max;
  if (a.rsrp_std_steps) b.rsrp_std_steps = *a.rsrp_std_steps;
  if (a.rssi_min) b.rssi_min = *a.rssi_min;
  if (a.rssi_max) b.rssi_max = *a.rssi_max;
  if (a.rssi_steps) b.rssi_steps = *a.rssi_steps;
  const char* kind = skc_model_get_kind(model.get()) == SKC_MODEL_TREE ? "tree" : "logistic";
  const auto path = run.output(a.out, std::string("grid_") + kind + ".csv");
  check(skc_model_grid_write_csv(model.get(), &b, path.string().c_str()));
  std::cout << b.rsrp_std_steps << "x" << b.rssi_steps << " grid -> " << path.string() << "\n";
  return 0;
}

struct EvaluateArgs {
  std::string model;
  std::string dataset;
  std::optional<double> threshold;
  std::string out;
};

int cmd_evaluate(Run& run, const EvaluateArgs& a) {
  auto model = load_model(run, a.model);
  auto ds = load_dataset(run, a.dataset);
  double threshold = 0.5;
  if (a.threshold) {
    threshold = *a.threshold;
  } else {
    char* raw = nullptr;
    check(skc_config_get(run.config.get(), "ml.threshold", &raw));
    threshold = json::parse(take(raw)).get<double>();
  }
  char* raw = nullptr;
  check(skc_model_evaluate_json(model.get(), ds.get(), threshold, &raw));
  const std::string text = take(raw);
  const auto path = run.output(a.out, "evaluation.json");
  check(skc_write_text_atomic(path.string().c_str(), text.c_str()));
  std::cout << "accuracy " << json::parse(text)["overall"]["accuracy"].get<double>() << " -> " << path.string()
            << "\n";
  return 0;
}

struct GateArgs {
  std::string application;
  std::string kpi;
  std::string trial;
  std::string registry;
  std::string out;
};

const char* verdict_name(skc_verdict v) {
  switch (v) {
  case SKC_VERDICT_PASS: return "pass";
  case SKC_VERDICT_FAIL: return "fail";
  case SKC_VERDICT_PASS_WITH_GAPS: return "pass-with-gaps";
  }
  return "fail";
}

// fail > pass-with-gaps > pass
skc_verdict worse(skc_verdict a, skc_verdict b) {
  auto rank = [](skc_verdict v) { return v == SKC_VERDICT_FAIL ? 2 : v == SKC_VERDICT_PASS_WITH_GAPS ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

int cmd_gate(Run& run, const GateArgs& a) {
  const skc_registry* builtin = nullptr;
  skc_registry* loaded = nullptr;
  if (a.registry.empty()) {
    check(skc_registry_builtin(&builtin));
  } else {
    run.inputs["registry"] = a.registry;
    check(skc_registry_load(a.registry.c_str(), &loaded));
  }
  std::unique_ptr<skc_registry, Deleter<const skc_registry, skc_registry_free>> owned(loaded);
  const skc_registry* reg = loaded ? loaded : builtin;

  json out;
  std::string text;
  skc_verdict verdict = SKC_VERDICT_PASS;
  if (!a.kpi.empty()) {
    run.inputs["kpi"] = a.kpi;
    std::string kpi_text;
    {
      std::ifstream in(a.kpi, std::ios::binary);
      if (!in) throw CliError(SKC_ERR_IO, "cannot open KPI file '" + a.kpi + "'");
      std::ostringstream ss;
      ss << in.rdbuf();
      kpi_text = ss.str();
    }
    skc_report* raw = nullptr;
    check(skc_gate_kpi_json(reg, kpi_text.c_str(), a.application.c_str(), &raw));
    Report report(raw);
    verdict = skc_report_verdict(report.get());
    char* j = nullptr;
    check(skc_report_to_json(report.get(), &j));
    out = json::parse(take(j));
    char* t = nullptr;
    check(skc_report_to_text(report.get(), &t));
    text = take(t);
  } else {
    run.inputs["trial"] = a.trial;
    skc_trial* raw_trial = nullptr;
    check(skc_trial_load_csv(a.trial.c_str(), &raw_trial));
    Trial trial(raw_trial);
    skc_summary* raw_summary = nullptr;
    check(skc_trial_summarize(trial.get(), nullptr, 0, nullptr, 0, &raw_summary));
    Summary summary(raw_summary);

    out["application"] = a.application;
    out["source"] = "field_log";
    out["bins"] = json::array();
    bool any = false;
    for (size_t i = 0; i < skc_summary_bin_count(summary.get()); ++i) {
      size_t records = 0;
      check(skc_summary_bin_records(summary.get(), i, &records));
      if (records == 0) continue;
      skc_report* raw = nullptr;
      check(skc_gate_trial(reg, summary.get(), i, a.application.c_str(), &raw));
      Report report(raw);
      const skc_verdict v = skc_report_verdict(report.get());
      verdict = any ? worse(verdict, v) : v;
      any = true;
      char* j = nullptr;
      check(skc_report_to_json(report.get(), &j));
      json entry = json::parse(take(j));
      out["bins"].push_back(entry);
      char* t = nullptr;
      check(skc_report_to_text(report.get(), &t));
      text += take(t);
    }
    if (!any) {
      // Nothing binned: every dimension is unobserved. Still validates the application name.
      skc_report* raw = nullptr;
      check(skc_gate_kpi_json(reg, "{}", a.application.c_str(), &raw));
      Report report(raw);
      verdict = skc_report_verdict(report.get());
    }
    out["verdict"] = verdict_name(verdict);
  }

  const auto path = run.output(a.out, "report.json");
  check(skc_write_text_atomic(path.string().c_str(), (out.dump(2) + "\n").c_str()));
  std::cout << text;
  if (a.kpi.empty()) std::cout << "overall verdict: " << verdict_name(verdict) << "\n";
  run.verdict = verdict_name(verdict);
  return static_cast<int>(verdict);
}

struct TrialArgs {
  std::string input;
  std::string bins;
  std::string json_out;
  std::string csv_out;
};

std::vector<skc_height_bin> parse_bins(const std::string& text) {
  std::vector<skc_height_bin> bins;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw CliError(SKC_ERR_INVALID_ARGUMENT, "--bins expects lo:hi[,lo:hi...]");
    try {
      bins.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    } catch (const std::exception&) {
      throw CliError(SKC_ERR_INVALID_ARGUMENT, "--bins: cannot parse '" + item + "'");
    }
  }
  if (bins.empty()) throw CliError(SKC_ERR_INVALID_ARGUMENT, "--bins is empty");
  return bins;
}

int cmd_trial(Run& run, const TrialArgs& a) {
  run.inputs["trial"] = a.input;
  skc_trial* raw_trial = nullptr;
  check(skc_trial_load_csv(a.input.c_str(), &raw_trial));
  Trial trial(raw_trial);
  std::vector<skc_height_bin> bins;
  if (!a.bins.empty()) bins = parse_bins(a.bins);
  skc_summary* raw = nullptr;
  check(skc_trial_summarize(trial.get(), bins.empty() ? nullptr : bins.data(), bins.size(), nullptr, 0, &raw));
  Summary summary(raw);
  char* j = nullptr;
  check(skc_summary_to_json(summary.get(), &j));
  const auto json_path = run.output(a.json_out, "trial_summary.json");
  check(skc_write_text_atomic(json_path.string().c_str(), take(j).c_str()));
  const auto csv_path = run.output(a.csv_out, "trial_summary.csv");
  check(skc_summary_write_csv(summary.get(), csv_path.string().c_str()));
  std::cout << skc_trial_size(trial.get()) << " records -> " << json_path.string() << "\n";
  return 0;
}

struct OracleArgs {
  std::string dataset;
  std::string out;
};

constexpr size_t kOracleMaxRows = 5000;

int cmd_oracle_tree(Run& run, const OracleArgs& a) {
  auto ds = load_dataset(run, a.dataset);
  if (skc_dataset_size(ds.get()) > kOracleMaxRows)
    throw CliError(SKC_ERR_INVALID_ARGUMENT, "oracle-tree is limited to " + std::to_string(kOracleMaxRows) +
                                                 " rows; dataset has " + std::to_string(skc_dataset_size(ds.get())));
  skc_model* raw = nullptr;
  check(skc_tree_train_bruteforce(ds.get(), run.config.get(), &raw));
  ModelH model(raw);
  const auto path = run.output(a.out, "oracle_tree.json");
  check(skc_model_save(model.get(), path.string().c_str()));
  std::cout << "oracle tree -> " << path.string() << "\n";
  return 0;
}

struct SynthArgs {
  int per_height = 200;
  std::string out;
};

int cmd_synth_trial(Run& run, const SynthArgs& a) {
  skc_trial* raw = nullptr;
  check(skc_trial_synthesize(config_seed(run.config.get()), a.per_height, &raw));
  Trial trial(raw);
  const auto path = run.output(a.out, "trial.csv");
  check(skc_trial_write_csv(trial.get(), path.string().c_str()));
  std::cout << skc_trial_size(trial.get()) << " records -> " << path.string() << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aerial-UE cellular coverage, drone identification and connectivity gating"};
  app.set_version_flag("--version", std::string(skc_version()));
  app.require_subcommand(1);

  CommonOptions common;
  std::function<int(Run&)> action;
  std::string command;

  auto sub = [&](const char* name, const char* desc) {
    auto* cmd = app.add_subcommand(name, desc);
    add_common(cmd, common);
    return cmd;
  };

  LayoutArgs layout_args;
  auto* layout = sub("layout", "Write the hexagonal cell layout");
  layout->add_option("--out", layout_args.out, "Layout CSV (default <out-dir>/layout.csv)");
  layout->callback([&] { command = "layout"; action = [&](Run& r) { return cmd_layout(r, layout_args); }; });

  SimulateArgs sim_args;
  auto* simulate = sub("simulate", "Drop UEs, compute radio measurements and features");
  simulate->add_option("--dataset-out", sim_args.dataset_out, "Dataset CSV (default <out-dir>/dataset.csv)");
  simulate->add_option("--radio-out", sim_args.radio_out, "Radio-sample CSV (default <out-dir>/radio.csv)");
  simulate->callback([&] { command = "simulate"; action = [&](Run& r) { return cmd_simulate(r, sim_args); }; });

  TrainArgs train_args;
  auto* train = sub("train", "Train a classifier on a dataset CSV");
  train->add_option("--dataset", train_args.dataset, "Dataset CSV (default <out-dir>/dataset.csv)");
  train->add_option("--model", train_args.model, "Model type")
      ->check(CLI::IsMember({"logistic", "tree"}))
      ->capture_default_str();
  train->add_option("--model-out", train_args.model_out, "Model JSON (default <out-dir>/model_<type>.json)");
  train->add_option("--metrics-out", train_args.metrics_out,
                    "Metrics JSON (default <out-dir>/metrics_<type>.json)");
  train->callback([&] { command = "train"; action = [&](Run& r) { return cmd_train(r, train_args); }; });

  GridArgs grid_args;
  auto* grid = sub("grid", "Evaluate a model's drone probability over a feature grid");
  grid->add_option("--model", grid_args.model, "Model JSON")->required();
  grid->add_option("--out", grid_args.out, "Grid CSV (default <out-dir>/grid_<type>.csv)");
  grid->add_option("--rsrp-std-min", grid_args.rsrp_std_min, "RSRP STD axis start (dB)");
  grid->add_option("--rsrp-std-max", grid_args.rsrp_std_max, "RSRP STD axis end (dB)");
  grid->add_option("--rsrp-std-steps", grid_args.rsrp_std_steps, "RSRP STD axis points");
  grid->add_option("--rssi-min", grid_args.rssi_min, "RSSI axis start (dBm)");
  grid->add_option("--rssi-max", grid_args.rssi_max, "RSSI axis end (dBm)");
  grid->add_option("--rssi-steps", grid_args.rssi_steps, "RSSI axis points");
  grid->callback([&] { command = "grid"; action = [&](Run& r) { return cmd_grid(r, grid_args); }; });

  EvaluateArgs eval_args;
  auto* evaluate = sub("evaluate", "Score a model on a dataset, overall and per height");
  evaluate->add_option("--model", eval_args.model, "Model JSON")->required();
  evaluate->add_option("--dataset", eval_args.dataset, "Dataset CSV (default <out-dir>/dataset.csv)");
  evaluate->add_option("--threshold", eval_args.threshold, "Drone decision threshold (default ml.threshold)")
      ->check(CLI::Range(0.0, 1.0));
  evaluate->add_option("--out", eval_args.out, "Evaluation JSON (default <out-dir>/evaluation.json)");
  evaluate->callback([&] { command = "evaluate"; action = [&](Run& r) { return cmd_evaluate(r, eval_args); }; });

  GateArgs gate_args;
  auto* gate = sub("gate", "Check KPIs or a trial log against an application's requirements");
  gate->add_option("--application", gate_args.application, "Application name")->required();
  auto* kpi_opt = gate->add_option("--kpi", gate_args.kpi, "KPI JSON")->check(CLI::ExistingFile);
  auto* trial_opt = gate->add_option("--trial", gate_args.trial, "Trial log CSV")->check(CLI::ExistingFile);
  kpi_opt->excludes(trial_opt);
  gate->add_option("--registry", gate_args.registry, "Requirement registry JSON (default built-in)")
      ->check(CLI::ExistingFile);
  gate->add_option("--out", gate_args.out, "Report JSON (default <out-dir>/report.json)");
  gate->callback([&] {
    if (gate_args.kpi.empty() && gate_args.trial.empty())
      throw CLI::ValidationError("gate", "one of --kpi or --trial is required");
    command = "gate";
    action = [&](Run& r) { return cmd_gate(r, gate_args); };
  });

  TrialArgs trial_args;
  auto* trial = sub("trial", "Summarize a field-trial log per height bin");
  trial->add_option("--input", trial_args.input, "Trial log CSV")->required()->check(CLI::ExistingFile);
  trial->add_option("--bins", trial_args.bins, "Height bins lo:hi,... as (lo, hi] (default 0:50,50:100,100:300)");
  trial->add_option("--json-out", trial_args.json_out, "Summary JSON (default <out-dir>/trial_summary.json)");
  trial->add_option("--csv-out", trial_args.csv_out, "Summary CSV (default <out-dir>/trial_summary.csv)");
  trial->callback([&] { command = "trial"; action = [&](Run& r) { return cmd_trial(r, trial_args); }; });

  OracleArgs oracle_args;
  auto* oracle = sub("oracle-tree", "Exhaustive reference tree on the full dataset (testing aid)");
  oracle->add_option("--dataset", oracle_args.dataset, "Dataset CSV (default <out-dir>/dataset.csv)");
  oracle->add_option("--out", oracle_args.out, "Model JSON (default <out-dir>/oracle_tree.json)");
  oracle->callback(
      [&] { command = "oracle-tree"; action = [&](Run& r) { return cmd_oracle_tree(r, oracle_args); }; });

  SynthArgs synth_args;
  auto* synth = sub("synth-trial", "Generate a synthetic drone field-trial log");
  synth->add_option("--per-height", synth_args.per_height, "Records per flight height")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  synth->add_option("--out", synth_args.out, "Trial CSV (default <out-dir>/trial.csv)");
  synth->callback(
      [&] { command = "synth-trial"; action = [&](Run& r) { return cmd_synth_trial(r, synth_args); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  Run run;
  run.command = command;
  int code = kExitError;
  try {
    run.config = resolve_config(common);
    run.out_dir = config_string(run.config.get(), "output_dir");
    fs::create_directories(run.out_dir);
    code = action(run);
    write_manifest(run, common, "ok", "", code);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    write_manifest(run, common, "error", e.what(), kExitError);
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    write_manifest(run, common, "error", e.what(), kExitError);
    return kExitError;
  }
  return code;
}
