#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "leadwalk/kinematics.hpp"
#include "leadwalk/lagcorr.hpp"
#include "leadwalk/leadership.hpp"
#include "leadwalk/network.hpp"
#include "leadwalk/trial.hpp"

#include "json.hpp"

namespace leadwalk {

using Json = nlohmann::ordered_json;

// All artifact numbers go through a fixed 9-significant-digit formatting so
// repeated runs are byte-identical.
std::string format_g9(double value);
// The double nearest to format_g9(value), for numeric JSON fields.
double round9(double value);

// Write-temp-then-rename, so readers never observe partial files.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

// Analysis settings echoed into every artifact header for audit.
struct ParamsEcho {
  std::map<std::string, std::string> entries;  // ordered key -> value
  void set(const std::string& key, double value);
  void set(const std::string& key, const std::string& value);
  std::string comment_block() const;  // "# key=value\n" lines
  Json json() const;
};

std::string kinematics_csv(const Trial& trial,
                           const std::vector<KinematicSeries>& kinematics,
                           const ParamsEcho& params);

// Header `t,tau,value`, one row per defined cell, both columns in seconds.
std::string heatmap_csv(const CorrelationMap& map, const ParamsEcho& params);

struct HeatmapGrid {
  std::string from, to;
  Mode mode = Mode::heading;
  std::vector<double> t_seconds;    // column coordinates, ascending
  std::vector<double> tau_seconds;  // row coordinates, ascending
  MatXd value;                      // tau x t
  BoolGrid defined;
  VecXd tau_star_seconds;  // per t column; NaN where undefined
};

HeatmapGrid to_grid(const CorrelationMap& map, const DelayProfile& profile);
// Rebuilds a grid from an exported heatmap CSV; tau* is recomputed with the
// standard tie rule.
HeatmapGrid parse_heatmap_csv(std::istream& in, Mode mode);

struct TrialInfo {
  std::string source;
  double sample_rate_hz = 0.0;
  std::map<AgentId, FormationSlot> formation;
  std::optional<double> ipd_m;
  std::optional<Condition> condition;
  std::optional<std::string> sequence_tag;
};

TrialInfo trial_info(const Trial& trial, const std::string& source);

Json leadership_json(const TrialInfo& info, Mode mode,
                     const DelayProfileSet& profiles,
                     const std::vector<LeadershipScore>& scores,
                     const ParamsEcho& params);

struct WindowedNetwork {
  InfluenceNetwork raw;     // edge_weights output, kept for audit
  InfluenceNetwork pruned;  // after dpi_prune and threshold
};

Json network_json(const TrialInfo& info, Mode mode,
                  const std::vector<WindowedNetwork>& windows, double theta,
                  const ParamsEcho& params);

std::string network_dot(const InfluenceNetwork& net, const std::string& label);

// `group,mean,sem,n` rows in key order.
std::string aggregate_csv(const AggregateReport& report,
                          const ParamsEcho& params);

}  // namespace leadwalk
