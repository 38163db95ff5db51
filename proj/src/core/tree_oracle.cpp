#include "skycell/tree_oracle.hpp"

#include "skycell/error.hpp"

#include <numeric>
#include <set>

namespace skycell::oracle {

namespace {

// Exact non-negative fraction; inputs here stay far below overflow for the
// dataset sizes the oracle is meant for.
__extension__ using i128 = __int128;

struct Fraction {
  i128 num = 0;
  i128 den = 1;

  static Fraction make(i128 n, i128 d) {
    i128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
      const i128 t = a % b;
      a = b;
      b = t;
    }
    const i128 g = a == 0 ? 1 : a;
    return {n / g, d / g};
  }
  Fraction operator+(const Fraction& o) const { return make(num * o.den + o.num * den, den * o.den); }
  Fraction operator-(const Fraction& o) const { return make(num * o.den - o.num * den, den * o.den); }
  bool operator>(const Fraction& o) const { return num * o.den > o.num * den; }
};

// Gini of a group as a fraction: 1 - (p^2 + q^2) = (m^2 - a^2 - b^2) / m^2.
Fraction gini_fraction(long long positives, long long m) {
  const long long negatives = m - positives;
  return Fraction::make(m * m - positives * positives - negatives * negatives, m * m);
}

struct Oracle {
  const std::vector<LabeledSample>& samples;
  ml::TreeConfig config;
  std::vector<ml::TreeNode> nodes;

  int grow(const std::vector<std::size_t>& members, int depth) {
    const long long n = static_cast<long long>(members.size());
    long long positives = 0;
    for (auto i : members)
      if (samples[i].label == Label::Drone) ++positives;

    ml::TreeNode node;
    node.sample_count = static_cast<int>(n);
    node.drone_probability = static_cast<double>(positives) / static_cast<double>(n);
    const int self = static_cast<int>(nodes.size());
    nodes.push_back(node);

    if (depth >= config.max_depth || positives == 0 || positives == n) return self;

    const Fraction parent = gini_fraction(positives, n);
    bool have = false;
    Fraction best_decrease;
    int best_f = -1;
    double best_t = 0.0;

    for (int f = 0; f < static_cast<int>(kFeatureCount); ++f) {
      std::set<double> distinct;
      for (auto i : members) distinct.insert(samples[i].features[static_cast<std::size_t>(f)]);
      for (auto it = distinct.begin(); std::next(it) != distinct.end(); ++it) {
        const double lo = *it, hi = *std::next(it);
        const double t = lo + (hi - lo) / 2.0;
        if (!(lo < t)) continue;
        long long nl = 0, pl = 0;
        for (auto i : members) {
          if (samples[i].features[static_cast<std::size_t>(f)] < t) {
            ++nl;
            if (samples[i].label == Label::Drone) ++pl;
          }
        }
        const long long nr = n - nl, pr = positives - pl;
        if (nl < config.min_leaf || nr < config.min_leaf) continue;
        // weighted = sum over children of (m_c / n) * gini_c
        const Fraction weighted =
            Fraction::make(gini_fraction(pl, nl).num * nl, gini_fraction(pl, nl).den * n) +
            Fraction::make(gini_fraction(pr, nr).num * nr, gini_fraction(pr, nr).den * n);
        const Fraction decrease = parent - weighted;
        if (!have || decrease > best_decrease) {
          have = true;
          best_decrease = decrease;
          best_f = f;
          best_t = t;
        }
      }
    }
    if (!have || !(best_decrease > Fraction{0, 1})) return self;

    std::vector<std::size_t> left, right;
    for (auto i : members) {
      if (samples[i].features[static_cast<std::size_t>(best_f)] < best_t)
        left.push_back(i);
      else
        right.push_back(i);
    }
    nodes[static_cast<std::size_t>(self)].feature_index = best_f;
    nodes[static_cast<std::size_t>(self)].threshold = best_t;
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    nodes[static_cast<std::size_t>(self)].left = l;
    nodes[static_cast<std::size_t>(self)].right = r;
    return self;
  }
};

} // namespace

ml::TreeModel brute_force_tree(const Dataset& train, const ml::TreeConfig& config) {
  if (train.empty()) throw Error(ErrorKind::InvalidArgument, "training set is empty");
  if (config.max_depth < 0 || config.min_leaf < 1)
    throw Error(ErrorKind::InvalidArgument, "tree config requires max_depth >= 0 and min_leaf >= 1");
  Oracle oracle{train.samples, config, {}};
  std::vector<std::size_t> all(train.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  oracle.grow(all, 0);

  ml::TreeModel model;
  model.nodes = std::move(oracle.nodes);
  model.config = config;
  model.standardization = train.standardization;
  return model;
}

} // namespace skycell::oracle
