#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "leadwalk/types.hpp"

namespace leadwalk {

// A multi-agent planar trajectory recording at a fixed sample rate.
// Plain data: construction does not enforce the invariants, load_trial()
// does, and validate() reports violations on any instance.
struct Trial {
  std::vector<AgentId> agents;
  double sample_rate_hz = 0.0;
  std::vector<Path> positions;  // parallel to agents, equal row counts

  std::map<AgentId, FormationSlot> formation;
  std::optional<double> ipd_m;
  std::optional<Condition> condition;
  std::optional<std::string> sequence_tag;

  Eigen::Index n_samples() const {
    return positions.empty() ? 0 : positions.front().rows();
  }
  std::optional<Eigen::Index> agent_index(const AgentId& id) const;
};

// Shortest trial the analysis defaults can operate on: twice the default
// heading window 2*omega+1 with omega = round(40*fs/60).
Eigen::Index min_samples(double sample_rate_hz);

// Reads the long CSV format (header `time,id,x,y`, optional `#` metadata
// comments). Rows may arrive in any order; samples are sorted by time per
// agent and the time base must be uniform within 1e-6 s.
Trial load_trial(std::istream& in);

// Writes the long CSV format, time-major, with metadata comments.
// Coordinates are emitted with shortest round-trip precision, so
// load_trial(serialize(t)) reproduces t exactly.
void serialize(const Trial& trial, std::ostream& out);

// Drops round(head_s*fs) samples from the front and round(tail_s*fs) from
// the back of every agent.
Trial truncate(const Trial& trial, double head_s, double tail_s);

struct Diagnostic {
  enum class Severity { error, warning };
  Severity severity;
  std::string message;
  std::optional<AgentId> agent;
  std::optional<Eigen::Index> sample;
};

// Invariant and plausibility checks. No error-severity entries iff the
// Trial invariants hold; warnings (e.g. implausible speed bursts) may
// appear on valid trials.
std::vector<Diagnostic> validate(const Trial& trial);

inline bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics)
    if (d.severity == Diagnostic::Severity::error) return true;
  return false;
}

}  // namespace leadwalk
