#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "leadwalk/report.hpp"
#include "leadwalk/simulate.hpp"

namespace leadwalk {

enum class Emit { json, csv, svg, dot };

struct RunParams {
  std::vector<Mode> modes{Mode::heading, Mode::speed};
  int omega_override = 0;  // 0 -> per-mode default scaled to fs
  double tau_max_s = 2.0;
  int n_windows = 5;
  double theta = 0.15;
  double heading_cutoff_hz = 0.6;
  double speed_cutoff_hz = 1.0;
  double truncate_head_s = 0.0;
  double truncate_tail_s = 0.0;
  std::set<Emit> emit{Emit::json, Emit::csv};
  int jobs = 1;
};

struct ModeAnalysis {
  Mode mode;
  DelayProfileSet profiles;
  std::vector<LeadershipScore> scores;
  std::vector<WindowedNetwork> networks;
};

// Full per-trial analysis for one mode: every ordered-pair correlation map
// and delay profile, leadership scores, and the windowed influence networks
// over the globally defined samples. The visitor (when set) sees each map
// right after its delay profile is extracted, before the map is dropped.
ModeAnalysis analyze_mode(
    const std::vector<KinematicSeries>& kinematics, Mode mode,
    const RunParams& params,
    const std::function<void(const CorrelationMap&, const DelayProfile&)>&
        on_map = {});

struct TrialOutcome {
  std::string input;
  bool ok = false;
  std::string error;
  std::vector<std::string> outputs;  // artifact paths relative to out_dir
};

struct RunSummary {
  std::vector<TrialOutcome> trials;
  bool all_ok() const {
    for (const auto& t : trials)
      if (!t.ok) return false;
    return true;
  }
};

// Analyzes one trial file into out_dir/<stem>/: kinematics CSV, per-pair
// heatmap CSVs (and SVGs), leadership JSON and windowed network JSON (and
// DOT) per mode.
TrialOutcome analyze_file(const std::filesystem::path& input,
                          const RunParams& params,
                          const std::filesystem::path& out_dir);

// Runs analyze_file over every input (directories are scanned for *.csv,
// sorted), up to params.jobs trials in flight; failures are isolated per
// trial. Writes analysis_summary.json into out_dir.
RunSummary run_analyze(const std::vector<std::filesystem::path>& inputs,
                       const RunParams& params,
                       const std::filesystem::path& out_dir);

struct SummarizeOptions {
  std::optional<Condition> condition;  // keep only trials of this condition
};

// Scans a directory tree of analyze outputs for leadership JSONs and writes
// aggregate_{by_position,by_agent}_<mode>.csv per mode found.
// Returns the written file paths.
std::vector<std::filesystem::path> summarize_dir(
    const std::filesystem::path& in_dir, const std::filesystem::path& out_dir,
    const SummarizeOptions& options = {});

// Aggregates in-memory leadership JSON documents (one per trial and mode).
AggregateReport aggregate_leadership(const std::vector<Json>& docs,
                                     Grouping grouping, Mode mode,
                                     const SummarizeOptions& options = {});

std::vector<SimConfig> sim_configs_from_json(const Json& doc);
Json sim_config_to_json(const SimConfig& config);

}  // namespace leadwalk
