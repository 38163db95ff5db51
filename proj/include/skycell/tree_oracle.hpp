#pragma once

#include "skycell/ml.hpp"

namespace skycell::oracle {

/// Reference tree builder: enumerates every (feature, midpoint) split by direct
/// counting and scores it with exact rational Gini arithmetic. Shares no code
/// with ml::train_tree; quadratic per node, meant for small datasets.
ml::TreeModel brute_force_tree(const Dataset& train, const ml::TreeConfig& config);

} // namespace skycell::oracle
