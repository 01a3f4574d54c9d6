#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "leadwalk/leadership.hpp"
#include "leadwalk/types.hpp"

namespace leadwalk {

// Directed influence graph over one time window. Edge weight w_ij in [0, 1]
// is the fraction of the window in which i leads j; for every unordered
// pair both directions are read off the canonical profile, so
// w_ij + w_ji <= 1 holds by construction.
struct InfluenceNetwork {
  int window_start = 0;  // absolute sample interval [start, end)
  int window_end = 0;
  std::vector<AgentId> nodes;
  std::map<PairKey, double> edges;
  std::set<PairKey> undefined_edges;  // no defined samples in the window
};

// Splits [0, trial_length) into n contiguous intervals whose lengths differ
// by at most one (remainder to the earliest windows).
std::vector<std::pair<int, int>> window_partition(int trial_length,
                                                  int n_windows = 5);

// Lead-time fractions over the sample interval [window.first,
// window.second). For each unordered pair the profile with the
// lexicographically smaller (from, to) orientation supplies both directed
// weights (positive lags forward, negative lags reverse).
InfluenceNetwork edge_weights(const DelayProfileSet& profiles,
                              std::pair<int, int> window);

// Data-processing-inequality pruning: zero-weight edges are dropped, then
// every ordered triplet with edges i->j, j->k, i->k marks the shortcut
// (i,k) for removal when w_ik is strictly below both w_ij and w_jk. Marks
// are evaluated against the original weights in one pass and applied
// together; ties keep the edge.
InfluenceNetwork dpi_prune(const InfluenceNetwork& net);

// Removes edges with weight < theta.
InfluenceNetwork threshold(const InfluenceNetwork& net, double theta);

}  // namespace leadwalk
