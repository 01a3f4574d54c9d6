#include "leadwalk/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

#include "json.hpp"

namespace leadwalk {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double smoothstep(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * (3.0 - 2.0 * u);
}

// Initial offsets: walking direction +x, front row ahead, left is +y.
Vec2d slot_offset(FormationSlot slot, double ipd) {
  switch (slot) {
    case FormationSlot::FL: return {ipd, ipd};
    case FormationSlot::FR: return {ipd, 0.0};
    case FormationSlot::BL: return {0.0, ipd};
    case FormationSlot::BR: return {0.0, 0.0};
  }
  return {0.0, 0.0};
}

}  // namespace

const char* to_string(ScriptEvent::Kind kind) {
  switch (kind) {
    case ScriptEvent::Kind::turn_left: return "turn_left";
    case ScriptEvent::Kind::turn_right: return "turn_right";
    case ScriptEvent::Kind::speed_up: return "speed_up";
    case ScriptEvent::Kind::slow_down: return "slow_down";
  }
  return "?";
}

std::optional<ScriptEvent::Kind> script_kind_from_string(const std::string& s) {
  if (s == "turn_left") return ScriptEvent::Kind::turn_left;
  if (s == "turn_right") return ScriptEvent::Kind::turn_right;
  if (s == "speed_up") return ScriptEvent::Kind::speed_up;
  if (s == "slow_down") return ScriptEvent::Kind::slow_down;
  return std::nullopt;
}

void check_config(const SimConfig& config) {
  const auto fail = [](const std::string& msg) {
    throw Error(Error::Kind::config, msg);
  };
  if (!(config.fs_hz > 0)) fail("fs_hz must be positive");
  if (!(config.duration_s > 0)) fail("duration_s must be positive");
  if (config.agents.empty()) fail("need at least one agent");
  if (std::set<AgentId>(config.agents.begin(), config.agents.end()).size() !=
      config.agents.size())
    fail("duplicate agent ids");
  const auto n =
      static_cast<Eigen::Index>(std::llround(config.duration_s * config.fs_hz));
  if (n < min_samples(config.fs_hz))
    fail("duration too short for analysis at this sample rate");
  if (config.heading_noise_deg < 0 || config.speed_noise_mps < 0)
    fail("noise std must be non-negative");
  if (!(config.ramp_s > 0)) fail("ramp_s must be positive");
  if (config.initial_speed_mps < 0) fail("initial speed must be non-negative");

  const auto known = [&](const AgentId& id) {
    return std::find(config.agents.begin(), config.agents.end(), id) !=
           config.agents.end();
  };
  for (const auto& [id, slot] : config.formation)
    if (!known(id)) fail("formation references unknown agent '" + id + "'");
  for (const auto& e : config.script) {
    if (!known(e.agent)) fail("script references unknown agent '" + e.agent + "'");
    if (e.t_s < 0 || e.t_s + config.ramp_s > config.duration_s)
      fail("script event outside trial duration");
  }

  std::map<AgentId, double> gain_sum;
  for (const auto& e : config.coupling) {
    if (!known(e.from) || !known(e.to)) fail("coupling references unknown agent");
    if (e.from == e.to) fail("self-coupling is not allowed");
    if (e.delay_s < 0) fail("coupling delay must be non-negative");
    if (!(e.gain > 0)) fail("coupling gain must be positive");
    gain_sum[e.to] += e.gain;
  }
  for (const auto& [id, g] : gain_sum)
    if (g / config.fs_hz > 1.0 + 1e-12)
      fail("total incoming gain for '" + id +
           "' exceeds the sample rate (unstable Euler step)");

  // The coupling graph must be acyclic in the follower direction.
  std::map<AgentId, std::vector<AgentId>> next;
  for (const auto& e : config.coupling) next[e.from].push_back(e.to);
  std::map<AgentId, int> color;  // 0 white, 1 grey, 2 black
  const std::function<void(const AgentId&)> visit = [&](const AgentId& id) {
    color[id] = 1;
    for (const auto& succ : next[id]) {
      if (color[succ] == 1) fail("coupling graph has a cycle");
      if (color[succ] == 0) visit(succ);
    }
    color[id] = 2;
  };
  for (const auto& id : config.agents)
    if (color[id] == 0) visit(id);
}

Trial simulate_trial(const SimConfig& config) {
  check_config(config);

  const double fs = config.fs_hz;
  const double dt = 1.0 / fs;
  const auto n = static_cast<Eigen::Index>(std::llround(config.duration_s * fs));
  const auto n_agents = static_cast<Eigen::Index>(config.agents.size());

  std::map<AgentId, Eigen::Index> index;
  for (Eigen::Index a = 0; a < n_agents; ++a) index[config.agents[a]] = a;

  // Scripted agents are driven; their state follows the ramp sum directly.
  std::vector<std::vector<ScriptEvent>> scripts(n_agents);
  for (const auto& e : config.script) scripts[index.at(e.agent)].push_back(e);
  std::vector<bool> scripted(n_agents);
  for (Eigen::Index a = 0; a < n_agents; ++a) scripted[a] = !scripts[a].empty();

  struct InEdge {
    Eigen::Index src;
    Eigen::Index delay_samples;
    double gain;
  };
  std::vector<std::vector<InEdge>> incoming(n_agents);
  for (const auto& e : config.coupling)
    incoming[index.at(e.to)].push_back(
        {index.at(e.from),
         static_cast<Eigen::Index>(std::llround(e.delay_s * fs)), e.gain});

  MatXd angle(n, n_agents), speed(n, n_agents);
  std::vector<Path> positions(n_agents, Path(n, 2));
  for (Eigen::Index a = 0; a < n_agents; ++a) {
    angle(0, a) = 0.0;
    speed(0, a) = config.initial_speed_mps;
    Vec2d origin{0.0, 0.0};
    if (const auto slot = config.formation.find(config.agents[a]);
        slot != config.formation.end())
      origin = slot_offset(slot->second, config.ipd_m);
    else
      origin = {0.0, static_cast<double>(a)};
    positions[a].row(0) = origin.transpose();
  }

  const auto scripted_state = [&](Eigen::Index a, Eigen::Index t, double& phi,
                                  double& v) {
    phi = 0.0;
    v = config.initial_speed_mps;
    const double time = static_cast<double>(t) * dt;
    for (const auto& e : scripts[a]) {
      const double u = smoothstep((time - e.t_s) / config.ramp_s);
      switch (e.kind) {
        case ScriptEvent::Kind::turn_left: phi += e.magnitude * kDegToRad * u; break;
        case ScriptEvent::Kind::turn_right: phi -= e.magnitude * kDegToRad * u; break;
        case ScriptEvent::Kind::speed_up: v += e.magnitude * u; break;
        case ScriptEvent::Kind::slow_down: v -= e.magnitude * u; break;
      }
    }
    v = std::max(0.0, v);
  };

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double noise_h = config.heading_noise_deg * kDegToRad;
  const double noise_s = config.speed_noise_mps;

  for (Eigen::Index t = 0; t < n; ++t) {
    // State update from histories <= t-1 (synchronous step).
    if (t > 0) {
      for (Eigen::Index a = 0; a < n_agents; ++a) {
        if (scripted[a]) {
          scripted_state(a, t, angle(t, a), speed(t, a));
        } else if (!incoming[a].empty()) {
          double dphi = 0.0, dv = 0.0;
          for (const auto& e : incoming[a]) {
            const Eigen::Index past = std::max<Eigen::Index>(0, t - 1 - e.delay_samples);
            dphi += e.gain * (angle(past, e.src) - angle(t - 1, a));
            dv += e.gain * (speed(past, e.src) - speed(t - 1, a));
          }
          angle(t, a) = angle(t - 1, a) + dt * dphi;
          speed(t, a) = std::max(0.0, speed(t - 1, a) + dt * dv);
        } else {
          angle(t, a) = angle(t - 1, a);
          speed(t, a) = speed(t - 1, a);
        }
      }
    }
    // Position integration with per-sample execution jitter (jitter shapes
    // the path but is never written back into the state).
    if (t + 1 < n) {
      for (Eigen::Index a = 0; a < n_agents; ++a) {
        const double phi =
            angle(t, a) + (noise_h > 0 ? noise_h * gauss(rng) : 0.0);
        const double v = std::max(
            0.0, speed(t, a) + (noise_s > 0 ? noise_s * gauss(rng) : 0.0));
        positions[a](t + 1, 0) = positions[a](t, 0) + dt * v * std::cos(phi);
        positions[a](t + 1, 1) = positions[a](t, 1) + dt * v * std::sin(phi);
      }
    }
  }

  Trial trial;
  trial.agents = config.agents;
  trial.sample_rate_hz = fs;
  trial.positions = std::move(positions);
  trial.formation = config.formation;
  if (!config.formation.empty()) trial.ipd_m = config.ipd_m;
  trial.condition = config.condition;
  trial.sequence_tag = config.sequence_tag;
  return trial;
}

std::vector<std::filesystem::path> write_corpus(
    const std::vector<SimConfig>& configs,
    const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);

  nlohmann::ordered_json manifest;
  manifest["schema_version"] = 1;
  manifest["trials"] = nlohmann::ordered_json::array();

  std::set<std::string> names;
  std::vector<fs::path> written;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto& config = configs[i];
    std::string stem = config.name;
    if (stem.empty()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "trial_%03zu", i);
      stem = buf;
    }
    if (!names.insert(stem).second)
      throw Error(Error::Kind::io, "duplicate corpus output name '" + stem + "'");

    const fs::path file = out_dir / (stem + ".csv");
    const Trial trial = simulate_trial(config);
    std::ofstream out(file);
    if (!out)
      throw Error(Error::Kind::io, "cannot open '" + file.string() + "'");
    serialize(trial, out);
    if (!out.flush())
      throw Error(Error::Kind::io, "write failed for '" + file.string() + "'");
    written.push_back(file);

    nlohmann::ordered_json entry;
    entry["file"] = file.filename().string();
    entry["seed"] = config.seed;
    if (config.condition) entry["condition"] = to_string(*config.condition);
    if (config.sequence_tag) entry["sequence"] = *config.sequence_tag;
    if (!config.formation.empty()) {
      entry["ipd_m"] = config.ipd_m;
      nlohmann::ordered_json pos;
      for (const auto& [id, slot] : config.formation) pos[id] = to_string(slot);
      entry["positions"] = pos;
    }
    entry["coupling"] = nlohmann::ordered_json::array();
    for (const auto& e : config.coupling)
      entry["coupling"].push_back({{"from", e.from},
                                   {"to", e.to},
                                   {"delay_s", e.delay_s},
                                   {"gain", e.gain}});
    entry["script"] = nlohmann::ordered_json::array();
    for (const auto& e : config.script)
      entry["script"].push_back({{"agent", e.agent},
                                 {"t_s", e.t_s},
                                 {"kind", to_string(e.kind)},
                                 {"magnitude", e.magnitude}});
    manifest["trials"].push_back(entry);
  }

  const fs::path manifest_path = out_dir / "manifest.json";
  std::ofstream out(manifest_path);
  if (!out)
    throw Error(Error::Kind::io, "cannot open '" + manifest_path.string() + "'");
  out << manifest.dump(2) << '\n';
  return written;
}

}  // namespace leadwalk
