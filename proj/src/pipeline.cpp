#include "leadwalk/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <functional>
#include <thread>

#include "leadwalk/svg.hpp"

namespace leadwalk {

namespace fs = std::filesystem;

namespace {

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-') ? c : '_';
  return out;
}

AnalysisParams mode_params(const RunParams& params, Mode mode) {
  AnalysisParams p;
  p.mode = mode;
  p.omega = params.omega_override;
  p.tau_max_s = params.tau_max_s;
  return p;
}

ParamsEcho params_echo(const RunParams& params, Mode mode, double fs) {
  const AnalysisParams p = mode_params(params, mode);
  ParamsEcho echo;
  echo.set("mode", std::string(to_string(mode)));
  echo.set("fs_hz", fs);
  echo.set("omega", static_cast<double>(p.omega_or_default(fs)));
  echo.set("tau_max_s", params.tau_max_s);
  echo.set("windows", static_cast<double>(params.n_windows));
  echo.set("theta", params.theta);
  echo.set("heading_cutoff_hz", params.heading_cutoff_hz);
  echo.set("speed_cutoff_hz", params.speed_cutoff_hz);
  echo.set("truncate_head_s", params.truncate_head_s);
  echo.set("truncate_tail_s", params.truncate_tail_s);
  return echo;
}

}  // namespace

ModeAnalysis analyze_mode(
    const std::vector<KinematicSeries>& kinematics, Mode mode,
    const RunParams& params,
    const std::function<void(const CorrelationMap&, const DelayProfile&)>&
        on_map) {
  ModeAnalysis analysis;
  analysis.mode = mode;
  const AnalysisParams aparams = mode_params(params, mode);

  for (std::size_t i = 0; i < kinematics.size(); ++i)
    for (std::size_t j = 0; j < kinematics.size(); ++j) {
      if (i == j) continue;
      const CorrelationMap map =
          correlation_map(kinematics[i], kinematics[j], aparams);
      DelayProfile profile = optimal_delay(map);
      if (on_map) on_map(map, profile);
      analysis.profiles.emplace(
          PairKey{kinematics[i].agent, kinematics[j].agent},
          std::move(profile));
    }

  for (const auto& kin : kinematics)
    analysis.scores.push_back(leadership_index(analysis.profiles, kin.agent));

  // Windows partition the globally defined samples (those where every
  // ordered pair has a delay), so the per-window networks share a time base.
  Eigen::Index n = 0;
  for (const auto& [key, p] : analysis.profiles)
    n = std::max(n, p.tau_star.size());
  std::vector<int> global_ts;
  for (Eigen::Index t = 0; t < n; ++t) {
    bool all = true;
    for (const auto& [key, p] : analysis.profiles)
      if (t >= p.defined.size() || !p.defined[t]) {
        all = false;
        break;
      }
    if (all) global_ts.push_back(static_cast<int>(t));
  }
  if (static_cast<int>(global_ts.size()) < params.n_windows)
    throw Error(Error::Kind::range,
                "only " + std::to_string(global_ts.size()) +
                    " globally defined samples; cannot form " +
                    std::to_string(params.n_windows) + " windows");

  DelayProfileSet masked = analysis.profiles;
  for (auto& [key, p] : masked) {
    BoolArray keep = BoolArray::Constant(p.defined.size(), false);
    for (int t : global_ts) keep[t] = p.defined[t];
    p.defined = keep;
  }

  const auto slices =
      window_partition(static_cast<int>(global_ts.size()), params.n_windows);
  for (const auto& [c0, c1] : slices) {
    const int start = global_ts[c0];
    const int end = global_ts[c1 - 1] + 1;
    WindowedNetwork w;
    w.raw = edge_weights(masked, {start, end});
    w.pruned = threshold(dpi_prune(w.raw), params.theta);
    analysis.networks.push_back(std::move(w));
  }
  return analysis;
}

TrialOutcome analyze_file(const fs::path& input, const RunParams& params,
                          const fs::path& out_dir) {
  TrialOutcome outcome;
  outcome.input = input.string();
  try {
    std::ifstream in(input);
    if (!in)
      throw Error(Error::Kind::io, "cannot open input '" + input.string() + "'");
    Trial trial = load_trial(in);
    if (params.truncate_head_s > 0 || params.truncate_tail_s > 0)
      trial = truncate(trial, params.truncate_head_s, params.truncate_tail_s);

    const std::string stem = sanitize(input.stem().string());
    const fs::path trial_dir = out_dir / stem;
    fs::create_directories(trial_dir);
    const auto emit = [&](const fs::path& name, const std::string& content) {
      write_file_atomic(trial_dir / name, content);
      outcome.outputs.push_back((fs::path(stem) / name).string());
    };

    const auto kinematics = derive_kinematics(trial, params.heading_cutoff_hz,
                                              params.speed_cutoff_hz);
    const TrialInfo info = trial_info(trial, input.filename().string());

    if (params.emit.count(Emit::csv)) {
      // Filter settings matter here; window settings do not, but one audit
      // block per file keeps the format uniform.
      emit("kinematics.csv",
           kinematics_csv(trial, kinematics,
                          params_echo(params, params.modes.front(),
                                      trial.sample_rate_hz)));
    }

    for (const Mode mode : params.modes) {
      const ParamsEcho echo = params_echo(params, mode, trial.sample_rate_hz);
      const auto on_map = [&](const CorrelationMap& map,
                              const DelayProfile& profile) {
        const std::string pair_stem = sanitize(map.from) + "__" + sanitize(map.to);
        if (params.emit.count(Emit::csv))
          emit("heatmap_" + pair_stem + "_" + to_string(mode) + ".csv",
               heatmap_csv(map, echo));
        if (params.emit.count(Emit::svg))
          emit("heatmap_" + pair_stem + "_" + to_string(mode) + ".svg",
               render_heatmap_svg(to_grid(map, profile)));
      };
      const ModeAnalysis analysis =
          analyze_mode(kinematics, mode, params, on_map);

      if (params.emit.count(Emit::json)) {
        emit(std::string("leadership_") + to_string(mode) + ".json",
             leadership_json(info, mode, analysis.profiles, analysis.scores,
                             echo)
                     .dump(2) +
                 "\n");
        emit(std::string("networks_") + to_string(mode) + ".json",
             network_json(info, mode, analysis.networks, params.theta, echo)
                     .dump(2) +
                 "\n");
      }
      if (params.emit.count(Emit::dot)) {
        for (std::size_t w = 0; w < analysis.networks.size(); ++w) {
          const std::string label = stem + " " + to_string(mode) + " window " +
                                    std::to_string(w);
          emit(std::string("network_") + to_string(mode) + "_w" +
                   std::to_string(w) + ".dot",
               network_dot(analysis.networks[w].pruned, label));
        }
      }
    }
    outcome.ok = true;
  } catch (const std::exception& e) {
    outcome.ok = false;
    outcome.error = e.what();
  }
  return outcome;
}

RunSummary run_analyze(const std::vector<fs::path>& inputs,
                       const RunParams& params, const fs::path& out_dir) {
  std::vector<fs::path> files;
  for (const auto& input : inputs) {
    if (fs::is_directory(input)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(input))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
          found.push_back(entry.path());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(input);  // missing files fail inside analyze_file
    }
  }

  fs::create_directories(out_dir);
  RunSummary summary;
  summary.trials.resize(files.size());

  const int jobs = std::max(1, params.jobs);
  std::atomic<std::size_t> cursor{0};
  const auto worker = [&] {
    while (true) {
      const std::size_t k = cursor.fetch_add(1);
      if (k >= files.size()) return;
      summary.trials[k] = analyze_file(files[k], params, out_dir);
    }
  };
  if (jobs == 1 || files.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < std::min<int>(jobs, static_cast<int>(files.size())); ++w)
      pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  Json j;
  j["schema_version"] = 1;
  j["kind"] = "analysis_summary";
  j["params"] = params_echo(params, params.modes.front(), 0.0).json();
  j["params"].erase("fs_hz");
  Json trials = Json::array();
  for (const auto& outcome : summary.trials) {
    Json e;
    e["input"] = outcome.input;
    e["status"] = outcome.ok ? "ok" : "error";
    if (!outcome.ok) e["error"] = outcome.error;
    Json outs = Json::array();
    for (const auto& o : outcome.outputs) outs.push_back(o);
    e["outputs"] = outs;
    trials.push_back(e);
  }
  j["trials"] = trials;
  write_file_atomic(out_dir / "analysis_summary.json", j.dump(2) + "\n");
  return summary;
}

AggregateReport aggregate_leadership(const std::vector<Json>& docs,
                                     Grouping grouping, Mode mode,
                                     const SummarizeOptions& options) {
  std::vector<ScoreRecord> records;
  int skipped_condition = 0;
  for (const auto& doc : docs) {
    if (!doc.contains("mode") || doc["mode"] != to_string(mode)) continue;
    if (options.condition) {
      const auto& trial = doc["trial"];
      if (!trial.contains("condition") ||
          trial["condition"] != to_string(*options.condition)) {
        ++skipped_condition;
        continue;
      }
    }
    std::map<std::string, FormationSlot> positions;
    if (doc["trial"].contains("positions"))
      for (const auto& [id, slot] : doc["trial"]["positions"].items())
        if (const auto s = formation_slot_from_string(slot.get<std::string>()))
          positions[id] = *s;
    for (const auto& score : doc["scores"]) {
      ScoreRecord record;
      record.agent = score["agent"].get<std::string>();
      record.index_percent = score["index_percent"].get<double>();
      if (const auto it = positions.find(record.agent); it != positions.end())
        record.position = it->second;
      records.push_back(std::move(record));
    }
  }
  return aggregate(records, grouping);
}

std::vector<fs::path> summarize_dir(const fs::path& in_dir,
                                    const fs::path& out_dir,
                                    const SummarizeOptions& options) {
  std::vector<fs::path> leadership_files;
  if (!fs::is_directory(in_dir))
    throw Error(Error::Kind::io, "'" + in_dir.string() + "' is not a directory");
  for (const auto& entry : fs::recursive_directory_iterator(in_dir))
    if (entry.is_regular_file() &&
        entry.path().filename().string().rfind("leadership_", 0) == 0 &&
        entry.path().extension() == ".json")
      leadership_files.push_back(entry.path());
  std::sort(leadership_files.begin(), leadership_files.end());
  if (leadership_files.empty())
    throw Error(Error::Kind::io,
                "no leadership JSONs under '" + in_dir.string() + "'");

  std::vector<Json> docs;
  for (const auto& file : leadership_files) {
    std::ifstream in(file);
    Json doc = Json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.contains("kind") || doc["kind"] != "leadership")
      continue;
    docs.push_back(std::move(doc));
  }
  if (docs.empty())
    throw Error(Error::Kind::io, "no parsable leadership JSONs");

  std::set<Mode> modes;
  for (const auto& doc : docs)
    if (const auto m = mode_from_string(doc["mode"].get<std::string>()))
      modes.insert(*m);

  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  for (const Mode mode : modes) {
    for (const Grouping grouping : {Grouping::by_position, Grouping::by_agent}) {
      const AggregateReport report =
          aggregate_leadership(docs, grouping, mode, options);
      if (report.cells.empty()) continue;
      ParamsEcho echo;
      echo.set("mode", std::string(to_string(mode)));
      if (options.condition)
        echo.set("condition", std::string(to_string(*options.condition)));
      const std::string name =
          std::string("aggregate_") +
          (grouping == Grouping::by_position ? "by_position" : "by_agent") +
          "_" + to_string(mode) + ".csv";
      write_file_atomic(out_dir / name, aggregate_csv(report, echo));
      written.push_back(out_dir / name);
    }
  }
  return written;
}

std::vector<SimConfig> sim_configs_from_json(const Json& doc) {
  const auto one = [](const Json& j) {
    SimConfig config;
    if (j.contains("name")) config.name = j["name"].get<std::string>();
    if (j.contains("agents")) {
      config.agents.clear();
      for (const auto& id : j["agents"])
        config.agents.push_back(id.get<std::string>());
    } else if (j.contains("n_agents")) {
      config.agents.clear();
      const int n = j["n_agents"].get<int>();
      for (int k = 0; k < n; ++k) config.agents.push_back("P" + std::to_string(k + 1));
    }
    if (j.contains("formation"))
      for (const auto& [id, slot] : j["formation"].items()) {
        const auto s = formation_slot_from_string(slot.get<std::string>());
        if (!s) throw Error(Error::Kind::config, "bad formation slot for " + id);
        config.formation[id] = *s;
      }
    if (j.contains("ipd_m")) config.ipd_m = j["ipd_m"].get<double>();
    if (j.contains("coupling"))
      for (const auto& e : j["coupling"]) {
        CouplingEdge edge;
        edge.from = e["from"].get<std::string>();
        edge.to = e["to"].get<std::string>();
        if (e.contains("delay_s")) edge.delay_s = e["delay_s"].get<double>();
        if (e.contains("gain")) edge.gain = e["gain"].get<double>();
        config.coupling.push_back(std::move(edge));
      }
    if (j.contains("script"))
      for (const auto& e : j["script"]) {
        ScriptEvent event;
        event.agent = e["agent"].get<std::string>();
        event.t_s = e["t_s"].get<double>();
        const auto kind = script_kind_from_string(e["kind"].get<std::string>());
        if (!kind) throw Error(Error::Kind::config, "unknown script kind");
        event.kind = *kind;
        event.magnitude = e["magnitude"].get<double>();
        config.script.push_back(std::move(event));
      }
    if (j.contains("noise")) {
      const auto& noise = j["noise"];
      if (noise.contains("heading_deg"))
        config.heading_noise_deg = noise["heading_deg"].get<double>();
      if (noise.contains("speed_mps"))
        config.speed_noise_mps = noise["speed_mps"].get<double>();
    }
    if (j.contains("duration_s")) config.duration_s = j["duration_s"].get<double>();
    if (j.contains("fs_hz")) config.fs_hz = j["fs_hz"].get<double>();
    if (j.contains("initial_speed_mps"))
      config.initial_speed_mps = j["initial_speed_mps"].get<double>();
    if (j.contains("ramp_s")) config.ramp_s = j["ramp_s"].get<double>();
    if (j.contains("condition")) {
      const auto c = condition_from_string(j["condition"].get<std::string>());
      if (!c) throw Error(Error::Kind::config, "unknown condition");
      config.condition = *c;
    }
    if (j.contains("sequence")) config.sequence_tag = j["sequence"].get<std::string>();
    if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
    return config;
  };

  std::vector<SimConfig> configs;
  if (doc.is_array())
    for (const auto& j : doc) configs.push_back(one(j));
  else if (doc.contains("trials"))
    for (const auto& j : doc["trials"]) configs.push_back(one(j));
  else
    configs.push_back(one(doc));
  return configs;
}

Json sim_config_to_json(const SimConfig& config) {
  Json j;
  if (!config.name.empty()) j["name"] = config.name;
  j["agents"] = config.agents;
  if (!config.formation.empty()) {
    Json f;
    for (const auto& [id, slot] : config.formation) f[id] = to_string(slot);
    j["formation"] = f;
    j["ipd_m"] = config.ipd_m;
  }
  Json coupling = Json::array();
  for (const auto& e : config.coupling)
    coupling.push_back({{"from", e.from},
                        {"to", e.to},
                        {"delay_s", e.delay_s},
                        {"gain", e.gain}});
  j["coupling"] = coupling;
  Json script = Json::array();
  for (const auto& e : config.script)
    script.push_back({{"agent", e.agent},
                      {"t_s", e.t_s},
                      {"kind", to_string(e.kind)},
                      {"magnitude", e.magnitude}});
  j["script"] = script;
  j["noise"] = {{"heading_deg", config.heading_noise_deg},
                {"speed_mps", config.speed_noise_mps}};
  j["duration_s"] = config.duration_s;
  j["fs_hz"] = config.fs_hz;
  j["initial_speed_mps"] = config.initial_speed_mps;
  j["ramp_s"] = config.ramp_s;
  if (config.condition) j["condition"] = to_string(*config.condition);
  if (config.sequence_tag) j["sequence"] = *config.sequence_tag;
  j["seed"] = config.seed;
  return j;
}

}  // namespace leadwalk
