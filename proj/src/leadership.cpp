#include "leadwalk/leadership.hpp"

#include <cmath>

namespace leadwalk {

namespace {

struct SignCounts {
  Eigen::Index positive = 0, negative = 0, defined = 0;
};

SignCounts count_signs(const DelayProfile& profile) {
  SignCounts c;
  for (Eigen::Index t = 0; t < profile.tau_star.size(); ++t) {
    if (!profile.defined[t]) continue;
    ++c.defined;
    if (profile.tau_star[t] > 0) ++c.positive;
    else if (profile.tau_star[t] < 0) ++c.negative;
  }
  return c;
}

double fraction_of(Eigen::Index hits, const SignCounts& c,
                   const DelayProfile& profile) {
  if (c.defined == 0)
    throw Error(Error::Kind::undefined_score,
                "profile " + profile.from + " -> " + profile.to +
                    " has no defined samples");
  const Eigen::Index nonzero = c.positive + c.negative;
  if (nonzero == 0) return 0.0;
  return static_cast<double>(hits) / static_cast<double>(nonzero);
}

}  // namespace

double lead_fraction(const DelayProfile& profile) {
  const SignCounts c = count_signs(profile);
  return fraction_of(c.positive, c, profile);
}

double follow_fraction(const DelayProfile& profile) {
  const SignCounts c = count_signs(profile);
  return fraction_of(c.negative, c, profile);
}

LeadershipScore leadership_index(const DelayProfileSet& profiles,
                                 const AgentId& agent) {
  LeadershipScore score;
  score.agent = agent;

  double sum = 0.0;
  int n_pairs = 0;
  for (const auto& [key, profile] : profiles) {
    if (key.first != agent) continue;
    try {
      const double f = lead_fraction(profile);
      score.per_pair_fractions[key.second] = f;
      sum += f;
      ++n_pairs;
      for (Eigen::Index t = 0; t < profile.defined.size(); ++t)
        if (profile.defined[t]) ++score.defined_samples;
    } catch (const Error& e) {
      if (e.kind() != Error::Kind::undefined_score) throw;
      score.partial = true;
    }
  }
  if (n_pairs == 0)
    throw Error(Error::Kind::undefined_score,
                "no scorable pair for agent " + agent);
  score.index_percent = 100.0 * sum / n_pairs;
  return score;
}

AggregateReport aggregate(const std::vector<ScoreRecord>& scores,
                          Grouping grouping) {
  AggregateReport report;
  report.grouping = grouping;

  std::map<std::string, std::vector<double>> groups;
  for (const auto& record : scores) {
    std::string key;
    if (grouping == Grouping::by_agent) {
      key = record.agent;
    } else {
      if (!record.position) {
        ++report.skipped;
        continue;
      }
      key = to_string(*record.position);
    }
    groups[key].push_back(record.index_percent);
  }

  for (const auto& [key, values] : groups) {
    AggregateCell cell;
    cell.n_trials = static_cast<int>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= values.size();
    cell.mean_percent = mean;
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      const double sample_std = std::sqrt(ss / (values.size() - 1));
      cell.sem_percent = sample_std / std::sqrt(static_cast<double>(values.size()));
    }
    report.cells[key] = cell;
  }
  return report;
}

}  // namespace leadwalk
