#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "leadwalk/lagcorr.hpp"
#include "leadwalk/types.hpp"

namespace leadwalk {

using PairKey = std::pair<AgentId, AgentId>;
using DelayProfileSet = std::map<PairKey, DelayProfile>;

struct LeadershipScore {
  AgentId agent;
  double index_percent = 0.0;                  // 100 * mean of the fractions
  std::map<AgentId, double> per_pair_fractions;  // other agent -> [0, 1]
  Eigen::Index defined_samples = 0;
  bool partial = false;  // some pair had no defined samples
};

// Fraction of defined, non-zero tau* samples that are positive. Zero lags
// are unassigned: excluded from numerator and denominator. All-zero
// profiles score 0.
double lead_fraction(const DelayProfile& profile);

// As above but counting negative lags, i.e. the reverse direction read off
// the same profile.
double follow_fraction(const DelayProfile& profile);

// Individual leadership index for `agent`: 100 times the unweighted mean of
// lead_fraction over the profiles (agent -> other). Pairs with no defined
// samples are dropped and flagged via `partial`.
LeadershipScore leadership_index(const DelayProfileSet& profiles,
                                 const AgentId& agent);

enum class Grouping { by_position, by_agent };

struct ScoreRecord {
  AgentId agent;
  std::optional<FormationSlot> position;
  double index_percent = 0.0;
};

struct AggregateCell {
  double mean_percent = 0.0;
  double sem_percent = 0.0;  // sample std / sqrt(n); 0 when n == 1
  int n_trials = 0;
};

struct AggregateReport {
  Grouping grouping;
  std::map<std::string, AggregateCell> cells;
  int skipped = 0;  // records missing the grouping key
};

// Mean and standard error of the index across trials, grouped by formation
// position or by agent id. Records without the grouping key are skipped and
// counted.
AggregateReport aggregate(const std::vector<ScoreRecord>& scores,
                          Grouping grouping);

}  // namespace leadwalk
