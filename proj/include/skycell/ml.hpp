#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "skycell/features.hpp"

namespace skycell::ml {

struct LogisticConfig {
  double learning_rate = 0.1;
  int max_iters = 5000;
  double tolerance = 1e-6;
  double l2 = 0.0;
};

struct LogisticModel {
  std::array<double, kFeatureCount> weights{};
  double bias = 0.0;
  std::optional<Standardization> standardization;
  LogisticConfig config;
};

struct TrainingTrace {
  std::vector<double> loss; // loss before each parameter update, plus the final loss
  int iterations = 0;
  bool converged = false;
};

struct LossAndGradient {
  double loss = 0.0;
  std::array<double, kFeatureCount> grad_w{};
  double grad_b = 0.0;
};

/// Mean negative log-likelihood + l2 * |w|^2 / 2 over the (already standardized)
/// features of `samples`, with its analytic gradient.
LossAndGradient logistic_objective(std::span<const LabeledSample> samples,
                                   const std::array<double, kFeatureCount>& w, double b,
                                   double l2);

/// Full-batch gradient descent from zero. `train` must be standardized and hold
/// both labels.
LogisticModel train_logistic(const Dataset& train, const LogisticConfig& config,
                             TrainingTrace* trace = nullptr);

/// Probability of Drone for raw (un-standardized) features.
double predict_proba(const LogisticModel& model, const FeatureVector& raw);

struct TreeConfig {
  int max_depth = 6;
  int min_leaf = 5;
};

/// Internal nodes have feature_index >= 0 and valid children; leaves have
/// feature_index == -1. Every node keeps its sample count and drone fraction.
struct TreeNode {
  int feature_index = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double drone_probability = 0.0;
  int sample_count = 0;

  bool is_leaf() const { return feature_index < 0; }
  bool operator==(const TreeNode&) const = default;
};

/// Nodes in preorder; node 0 is the root.
struct TreeModel {
  std::vector<TreeNode> nodes;
  TreeConfig config;
  std::optional<Standardization> standardization;

  std::size_t leaf_count() const;
  int depth() const;
};

/// CART with Gini impurity. Candidate thresholds are midpoints of consecutive
/// distinct values; ties go to the lower feature, then the lower threshold. A
/// node splits only when the weighted impurity strictly decreases.
TreeModel train_tree(const Dataset& train, const TreeConfig& config);

/// Routes `x < threshold` left, otherwise right.
double predict_proba(const TreeModel& model, const FeatureVector& raw);

/// Gini impurity of a node holding `drones` positives out of `total`.
double gini(std::size_t drones, std::size_t total);

/// Structural checks applied to every loaded or hand-built tree.
void validate_tree(const TreeModel& model);

using Model = std::variant<LogisticModel, TreeModel>;

double predict_proba(const Model& model, const FeatureVector& raw);
std::string_view model_type(const Model& model);

struct Metrics {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 0.0;
  double precision = 0.0; // 0 when nothing was predicted Drone
  double recall = 0.0;    // 0 when no Drone samples exist

  std::size_t total() const { return tp + fp + tn + fn; }
};

Metrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn);

/// Predicts Drone iff probability >= threshold. Accepts raw or standardized data.
Metrics evaluate(const Model& model, const Dataset& test, double threshold = 0.5);

struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  int steps = 2;

  double at(int i) const { return min + (max - min) * i / (steps - 1); }
};

struct GridBounds {
  GridAxis rsrp_std{0.0, 20.0, 101};
  GridAxis rssi{-100.0, -30.0, 101};
};

/// values[iy * rsrp_std.steps + ix], x along RSRP STD, y along RSSI.
struct ProbabilityGrid {
  GridBounds bounds;
  std::vector<double> values;

  double at(int ix, int iy) const {
    return values[static_cast<std::size_t>(iy) * static_cast<std::size_t>(bounds.rsrp_std.steps) +
                  static_cast<std::size_t>(ix)];
  }
};

ProbabilityGrid probability_grid(const Model& model, const GridBounds& bounds);

void write_grid_csv(std::ostream& out, const ProbabilityGrid& grid);

inline constexpr int kModelFormatVersion = 1;

/// Single JSON document: {format_version, type, standardization, parameters, config}.
std::string model_to_json(const Model& model);
Model model_from_json(std::string_view text);

} // namespace skycell::ml
