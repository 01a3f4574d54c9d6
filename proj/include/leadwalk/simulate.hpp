#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "leadwalk/trial.hpp"
#include "leadwalk/types.hpp"

namespace leadwalk {

struct ScriptEvent {
  enum class Kind { turn_left, turn_right, speed_up, slow_down };
  AgentId agent;
  double t_s = 0.0;
  Kind kind = Kind::turn_left;
  double magnitude = 0.0;  // degrees for turns, m/s for speed changes
};

struct CouplingEdge {
  AgentId from;     // influencer
  AgentId to;       // follower
  double delay_s = 0.5;
  double gain = 8.0;  // relaxation rate, 1/s
};

// Synthetic group walk: scripted initiators ramp their heading/speed,
// followers relax toward the gain-weighted mean of their influencers'
// states evaluated delay_s in the past, positions integrate by forward
// Euler. Deterministic given the seed.
struct SimConfig {
  std::string name;  // output stem for corpus files; empty -> indexed
  std::vector<AgentId> agents{"A", "B", "C", "D"};
  std::map<AgentId, FormationSlot> formation;
  double ipd_m = 2.0;
  std::vector<CouplingEdge> coupling;
  std::vector<ScriptEvent> script;
  double heading_noise_deg = 0.0;  // per-sample heading jitter std
  double speed_noise_mps = 0.0;    // per-sample speed jitter std
  double duration_s = 30.0;
  double fs_hz = 60.0;
  double initial_speed_mps = 1.3;
  double ramp_s = 1.0;  // smooth ramp length of scripted changes
  std::optional<Condition> condition;
  std::optional<std::string> sequence_tag;
  std::uint64_t seed = 0;
};

const char* to_string(ScriptEvent::Kind kind);
std::optional<ScriptEvent::Kind> script_kind_from_string(const std::string& s);

// Throws Error(config) on invalid configs (negative delays, cyclic coupling
// in the follower direction, events outside the duration, ...).
void check_config(const SimConfig& config);

Trial simulate_trial(const SimConfig& config);

// Writes one long CSV per config plus a manifest.json mapping each file to
// its ground-truth coupling and script.
std::vector<std::filesystem::path> write_corpus(
    const std::vector<SimConfig>& configs, const std::filesystem::path& out_dir);

}  // namespace leadwalk
