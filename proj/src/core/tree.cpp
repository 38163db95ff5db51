#include "skycell/ml.hpp"

#include "skycell/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace skycell::ml {

namespace {

__extension__ using u128 = unsigned __int128;

// Sum of squared class counts over node size, kept as an exact fraction.
// Maximizing (aL^2+bL^2)/nL + (aR^2+bR^2)/nR is maximizing the Gini decrease.
struct SplitScore {
  u128 num = 0;
  u128 den = 1;

  static SplitScore of(std::uint64_t drones_l, std::uint64_t n_l, std::uint64_t drones_r,
                       std::uint64_t n_r) {
    const u128 sq_l = u128(drones_l) * drones_l + u128(n_l - drones_l) * (n_l - drones_l);
    const u128 sq_r = u128(drones_r) * drones_r + u128(n_r - drones_r) * (n_r - drones_r);
    return {sq_l * n_r + sq_r * n_l, u128(n_l) * n_r};
  }
  bool beats(const SplitScore& o) const { return num * o.den > o.num * den; }
};

struct Builder {
  const std::vector<LabeledSample>& samples;
  TreeConfig config;
  std::vector<TreeNode> nodes;

  int build(std::vector<std::size_t>& idx, int depth) {
    const std::size_t n = idx.size();
    std::size_t drones = 0;
    for (auto i : idx) drones += samples[i].label == Label::Drone;

    const int self = static_cast<int>(nodes.size());
    TreeNode node;
    node.sample_count = static_cast<int>(n);
    node.drone_probability = static_cast<double>(drones) / static_cast<double>(n);
    nodes.push_back(node);

    const auto min_leaf = static_cast<std::size_t>(config.min_leaf);
    if (depth >= config.max_depth || drones == 0 || drones == n || n < 2 * min_leaf) return self;

    bool found = false;
    int best_feature = -1;
    double best_threshold = 0.0;
    SplitScore best;
    std::vector<std::size_t> order = idx;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double va = samples[a].features[f], vb = samples[b].features[f];
        return va < vb || (va == vb && a < b);
      });
      std::size_t drones_left = 0;
      for (std::size_t pos = 1; pos < n; ++pos) {
        drones_left += samples[order[pos - 1]].label == Label::Drone;
        const double lo = samples[order[pos - 1]].features[f];
        const double hi = samples[order[pos]].features[f];
        if (!(lo < hi) || pos < min_leaf || n - pos < min_leaf) continue;
        const double threshold = lo + (hi - lo) / 2.0;
        if (!(lo < threshold)) continue; // adjacent doubles: midpoint collapses onto lo
        const auto score = SplitScore::of(drones_left, pos, drones - drones_left, n - pos);
        if (!found || score.beats(best)) {
          found = true;
          best = score;
          best_feature = static_cast<int>(f);
          best_threshold = threshold;
        }
      }
    }
    // Parent score is (d^2 + (n-d)^2) / n; require a strict improvement.
    const SplitScore parent{u128(drones) * drones + u128(n - drones) * (n - drones), u128(n)};
    if (!found || !best.beats(parent)) return self;

    std::vector<std::size_t> left, right;
    for (auto i : idx)
      (samples[i].features[static_cast<std::size_t>(best_feature)] < best_threshold ? left : right)
          .push_back(i);
    idx.clear();
    idx.shrink_to_fit();

    nodes[static_cast<std::size_t>(self)].feature_index = best_feature;
    nodes[static_cast<std::size_t>(self)].threshold = best_threshold;
    const int l = build(left, depth + 1);
    nodes[static_cast<std::size_t>(self)].left = l;
    const int r = build(right, depth + 1);
    nodes[static_cast<std::size_t>(self)].right = r;
    return self;
  }
};

int subtree_depth(const std::vector<TreeNode>& nodes, int i) {
  const auto& n = nodes[static_cast<std::size_t>(i)];
  if (n.is_leaf()) return 0;
  return 1 + std::max(subtree_depth(nodes, n.left), subtree_depth(nodes, n.right));
}

} // namespace

double gini(std::size_t drones, std::size_t total) {
  if (total == 0) return 0.0;
  const double p = static_cast<double>(drones) / static_cast<double>(total);
  return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

std::size_t TreeModel::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

int TreeModel::depth() const { return nodes.empty() ? 0 : subtree_depth(nodes, 0); }

TreeModel train_tree(const Dataset& train, const TreeConfig& config) {
  if (train.empty()) throw Error(ErrorKind::InvalidArgument, "training set is empty");
  if (config.max_depth < 0 || config.min_leaf < 1)
    throw Error(ErrorKind::InvalidArgument, "tree config requires max_depth >= 0 and min_leaf >= 1");
  Builder builder{train.samples, config, {}};
  std::vector<std::size_t> idx(train.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  builder.build(idx, 0);

  TreeModel model;
  model.nodes = std::move(builder.nodes);
  model.config = config;
  model.standardization = train.standardization;
  return model;
}

double predict_proba(const TreeModel& model, const FeatureVector& raw) {
  if (model.nodes.empty()) throw Error(ErrorKind::InvalidArgument, "tree has no nodes");
  if (!std::isfinite(raw.rssi_dbm) || !std::isfinite(raw.rsrp_std_db))
    throw Error(ErrorKind::InvalidArgument, "features must be finite");
  const FeatureVector x = model.standardization ? model.standardization->apply(raw) : raw;
  std::size_t i = 0;
  while (!model.nodes[i].is_leaf()) {
    const auto& n = model.nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature_index)] < n.threshold ? n.left
                                                                                           : n.right);
  }
  return model.nodes[i].drone_probability;
}

void validate_tree(const TreeModel& model) {
  const auto& nodes = model.nodes;
  if (nodes.empty()) throw Error(ErrorKind::InvalidArgument, "tree has no nodes");
  const int count = static_cast<int>(nodes.size());
  std::vector<int> refs(nodes.size(), 0);
  for (int i = 0; i < count; ++i) {
    const auto& n = nodes[static_cast<std::size_t>(i)];
    const std::string where = "tree node " + std::to_string(i) + ": ";
    if (!(n.drone_probability >= 0.0 && n.drone_probability <= 1.0))
      throw Error(ErrorKind::InvalidArgument, where + "probability outside [0, 1]");
    if (n.sample_count < 0) throw Error(ErrorKind::InvalidArgument, where + "negative sample count");
    if (n.is_leaf()) {
      if (n.feature_index != -1 || n.left != -1 || n.right != -1)
        throw Error(ErrorKind::InvalidArgument, where + "malformed leaf");
      continue;
    }
    if (n.feature_index >= static_cast<int>(kFeatureCount))
      throw Error(ErrorKind::InvalidArgument, where + "feature index out of range");
    if (!std::isfinite(n.threshold))
      throw Error(ErrorKind::InvalidArgument, where + "non-finite threshold");
    // Preorder storage: children always come after their parent.
    for (int c : {n.left, n.right}) {
      if (c <= i || c >= count)
        throw Error(ErrorKind::InvalidArgument, where + "child index " + std::to_string(c) + " invalid");
      ++refs[static_cast<std::size_t>(c)];
    }
  }
  if (refs[0] != 0) throw Error(ErrorKind::InvalidArgument, "tree root is referenced as a child");
  for (int i = 1; i < count; ++i) {
    if (refs[static_cast<std::size_t>(i)] != 1)
      throw Error(ErrorKind::InvalidArgument,
                  "tree node " + std::to_string(i) + " is referenced " +
                      std::to_string(refs[static_cast<std::size_t>(i)]) + " times");
  }
}

} // namespace skycell::ml
