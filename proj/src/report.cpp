#include "leadwalk/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <set>
#include <sstream>

namespace leadwalk {

std::string format_g9(double value) {
  if (value == 0.0) value = 0.0;  // normalize -0
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, value,
                                 std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

double round9(double value) {
  const std::string s = format_g9(value);
  double out = value;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error(Error::Kind::io, "cannot open '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.flush())
      throw Error(Error::Kind::io, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec)
    throw Error(Error::Kind::io,
                "cannot rename '" + tmp.string() + "' to '" + path.string() +
                    "': " + ec.message());
}

void ParamsEcho::set(const std::string& key, double value) {
  entries[key] = format_g9(value);
}

void ParamsEcho::set(const std::string& key, const std::string& value) {
  entries[key] = value;
}

std::string ParamsEcho::comment_block() const {
  std::string out;
  for (const auto& [k, v] : entries) {
    out += "# ";
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

Json ParamsEcho::json() const {
  Json j;
  for (const auto& [k, v] : entries) {
    // Values that parse fully as numbers are emitted numerically.
    double num = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), num);
    if (res.ec == std::errc() && res.ptr == v.data() + v.size())
      j[k] = num;
    else
      j[k] = v;
  }
  return j;
}

std::string kinematics_csv(const Trial& trial,
                           const std::vector<KinematicSeries>& kinematics,
                           const ParamsEcho& params) {
  std::string out = params.comment_block();
  out += "time,id,heading_x,heading_y,speed,heading_defined\n";
  const double dt = 1.0 / trial.sample_rate_hz;
  for (Eigen::Index t = 0; t < trial.n_samples(); ++t) {
    for (const auto& kin : kinematics) {
      out += format_g9(static_cast<double>(t) * dt);
      out += ',';
      out += kin.agent;
      out += ',';
      if (kin.heading_defined[t]) {
        out += format_g9(kin.heading(t, 0));
        out += ',';
        out += format_g9(kin.heading(t, 1));
      } else {
        out += "0,0";
      }
      out += ',';
      out += format_g9(kin.speed[t]);
      out += ',';
      out += kin.heading_defined[t] ? '1' : '0';
      out += '\n';
    }
  }
  return out;
}

std::string heatmap_csv(const CorrelationMap& map, const ParamsEcho& params) {
  std::string out = params.comment_block();
  out += "t,tau,value\n";
  const double dt = 1.0 / map.sample_rate_hz;
  for (Eigen::Index t = 0; t < map.n_samples(); ++t)
    for (Eigen::Index c = 0; c < map.value.cols(); ++c) {
      if (!map.defined(t, c)) continue;
      out += format_g9(static_cast<double>(t) * dt);
      out += ',';
      out += format_g9(map.tau_of(c) * dt);
      out += ',';
      out += format_g9(map.value(t, c));
      out += '\n';
    }
  return out;
}

HeatmapGrid to_grid(const CorrelationMap& map, const DelayProfile& profile) {
  HeatmapGrid grid;
  grid.from = map.from;
  grid.to = map.to;
  grid.mode = map.mode;
  const double dt = 1.0 / map.sample_rate_hz;
  const Eigen::Index n = map.n_samples();
  const Eigen::Index n_lags = map.value.cols();
  grid.t_seconds.resize(n);
  for (Eigen::Index t = 0; t < n; ++t) grid.t_seconds[t] = t * dt;
  grid.tau_seconds.resize(n_lags);
  for (Eigen::Index c = 0; c < n_lags; ++c)
    grid.tau_seconds[c] = map.tau_of(c) * dt;
  grid.value = map.value.transpose();
  grid.defined = map.defined.transpose();
  grid.tau_star_seconds =
      VecXd::Constant(n, std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index t = 0; t < n; ++t)
    if (profile.defined[t]) grid.tau_star_seconds[t] = profile.tau_star[t] * dt;
  return grid;
}

HeatmapGrid parse_heatmap_csv(std::istream& in, Mode mode) {
  struct Cell {
    double t, tau, v;
  };
  std::vector<Cell> cells;
  std::set<double> ts, taus;
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // "t,tau,value"
      continue;
    }
    Cell cell{};
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (double* field : {&cell.t, &cell.tau, &cell.v}) {
      const auto res = std::from_chars(p, end, *field);
      if (res.ec != std::errc())
        throw Error(Error::Kind::parse,
                    "heatmap line " + std::to_string(line_no) + ": bad number");
      p = res.ptr;
      if (p < end && *p == ',') ++p;
    }
    cells.push_back(cell);
    ts.insert(cell.t);
    taus.insert(cell.tau);
  }
  if (cells.empty())
    throw Error(Error::Kind::parse, "heatmap CSV has no data rows");

  HeatmapGrid grid;
  grid.mode = mode;
  grid.t_seconds.assign(ts.begin(), ts.end());
  grid.tau_seconds.assign(taus.begin(), taus.end());
  std::map<double, Eigen::Index> t_index, tau_index;
  for (std::size_t i = 0; i < grid.t_seconds.size(); ++i)
    t_index[grid.t_seconds[i]] = static_cast<Eigen::Index>(i);
  for (std::size_t i = 0; i < grid.tau_seconds.size(); ++i)
    tau_index[grid.tau_seconds[i]] = static_cast<Eigen::Index>(i);
  const auto rows = static_cast<Eigen::Index>(grid.tau_seconds.size());
  const auto cols = static_cast<Eigen::Index>(grid.t_seconds.size());
  grid.value =
      MatXd::Constant(rows, cols, std::numeric_limits<double>::quiet_NaN());
  grid.defined = BoolGrid::Constant(rows, cols, false);
  for (const auto& cell : cells) {
    const auto r = tau_index.at(cell.tau);
    const auto c = t_index.at(cell.t);
    grid.value(r, c) = cell.v;
    grid.defined(r, c) = true;
  }

  // Recompute tau* columnwise with the standard tie rule.
  const bool maximize = mode == Mode::heading;
  grid.tau_star_seconds =
      VecXd::Constant(cols, std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index c = 0; c < cols; ++c) {
    bool any = false;
    double best = 0.0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (!grid.defined(r, c)) continue;
      const double v = grid.value(r, c);
      if (!any || (maximize ? v > best : v < best)) {
        best = v;
        any = true;
      }
    }
    if (!any) continue;
    double chosen = 0.0;
    bool have = false;
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (!grid.defined(r, c)) continue;
      const double v = grid.value(r, c);
      if (maximize ? v < best - kTieEpsilon : v > best + kTieEpsilon) continue;
      const double tau = grid.tau_seconds[static_cast<std::size_t>(r)];
      if (!have || std::abs(tau) < std::abs(chosen) ||
          (std::abs(tau) == std::abs(chosen) && tau < chosen)) {
        chosen = tau;
        have = true;
      }
    }
    grid.tau_star_seconds[c] = chosen;
  }
  return grid;
}

TrialInfo trial_info(const Trial& trial, const std::string& source) {
  TrialInfo info;
  info.source = source;
  info.sample_rate_hz = trial.sample_rate_hz;
  info.formation = trial.formation;
  info.ipd_m = trial.ipd_m;
  info.condition = trial.condition;
  info.sequence_tag = trial.sequence_tag;
  return info;
}

namespace {

Json info_json(const TrialInfo& info) {
  Json j;
  j["source"] = info.source;
  j["fs_hz"] = round9(info.sample_rate_hz);
  if (!info.formation.empty()) {
    Json pos;
    for (const auto& [id, slot] : info.formation) pos[id] = to_string(slot);
    j["positions"] = pos;
  }
  if (info.ipd_m) j["ipd_m"] = round9(*info.ipd_m);
  if (info.condition) j["condition"] = to_string(*info.condition);
  if (info.sequence_tag) j["sequence"] = *info.sequence_tag;
  return j;
}

}  // namespace

Json leadership_json(const TrialInfo& info, Mode mode,
                     const DelayProfileSet& profiles,
                     const std::vector<LeadershipScore>& scores,
                     const ParamsEcho& params) {
  Json j;
  j["schema_version"] = 1;
  j["kind"] = "leadership";
  j["mode"] = to_string(mode);
  j["trial"] = info_json(info);
  j["params"] = params.json();

  Json pairs = Json::array();
  for (const auto& [key, profile] : profiles) {
    Eigen::Index defined = 0, nonzero = 0, positive = 0;
    for (Eigen::Index t = 0; t < profile.tau_star.size(); ++t) {
      if (!profile.defined[t]) continue;
      ++defined;
      if (profile.tau_star[t] != 0) ++nonzero;
      if (profile.tau_star[t] > 0) ++positive;
    }
    Json p;
    p["from"] = key.first;
    p["to"] = key.second;
    p["defined_samples"] = defined;
    p["nonzero_samples"] = nonzero;
    p["lead_fraction"] =
        nonzero == 0 ? 0.0
                     : round9(static_cast<double>(positive) /
                              static_cast<double>(nonzero));
    pairs.push_back(p);
  }
  j["pairs"] = pairs;

  Json s = Json::array();
  for (const auto& score : scores) {
    Json e;
    e["agent"] = score.agent;
    e["index_percent"] = round9(score.index_percent);
    e["partial"] = score.partial;
    e["defined_samples"] = score.defined_samples;
    Json fractions;
    for (const auto& [other, f] : score.per_pair_fractions)
      fractions[other] = round9(f);
    e["per_pair_fractions"] = fractions;
    s.push_back(e);
  }
  j["scores"] = s;
  return j;
}

namespace {

Json edges_json(const InfluenceNetwork& net, bool include_zero) {
  Json arr = Json::array();
  for (const auto& [key, w] : net.edges) {
    if (!include_zero && w == 0.0) continue;
    Json e;
    e["from"] = key.first;
    e["to"] = key.second;
    e["weight"] = round9(w);
    if (net.undefined_edges.count(key)) e["undefined"] = true;
    arr.push_back(e);
  }
  return arr;
}

}  // namespace

Json network_json(const TrialInfo& info, Mode mode,
                  const std::vector<WindowedNetwork>& windows, double theta,
                  const ParamsEcho& params) {
  Json j;
  j["schema_version"] = 1;
  j["kind"] = "influence_network";
  j["mode"] = to_string(mode);
  j["theta"] = round9(theta);
  j["trial"] = info_json(info);
  j["params"] = params.json();

  Json ws = Json::array();
  for (const auto& w : windows) {
    Json e;
    e["start"] = w.raw.window_start;
    e["end"] = w.raw.window_end;
    Json nodes = Json::array();
    for (const auto& id : w.raw.nodes) nodes.push_back(id);
    e["nodes"] = nodes;
    e["pre_pruning"] = edges_json(w.raw, true);
    e["edges"] = edges_json(w.pruned, false);
    ws.push_back(e);
  }
  j["windows"] = ws;
  return j;
}

std::string network_dot(const InfluenceNetwork& net, const std::string& label) {
  std::string out = "digraph \"" + label + "\" {\n";
  out += "  rankdir=LR;\n";
  for (const auto& id : net.nodes) out += "  \"" + id + "\";\n";
  for (const auto& [key, w] : net.edges) {
    out += "  \"" + key.first + "\" -> \"" + key.second + "\" [label=\"" +
           format_g9(w) + "\", penwidth=" + format_g9(0.5 + 4.0 * w) + "];\n";
  }
  out += "}\n";
  return out;
}

std::string aggregate_csv(const AggregateReport& report,
                          const ParamsEcho& params) {
  std::string out = params.comment_block();
  out += "# grouping=";
  out += report.grouping == Grouping::by_position ? "by_position" : "by_agent";
  out += '\n';
  if (report.skipped > 0)
    out += "# skipped=" + std::to_string(report.skipped) + "\n";
  out += "group,mean,sem,n\n";
  for (const auto& [key, cell] : report.cells) {
    out += key;
    out += ',';
    out += format_g9(cell.mean_percent);
    out += ',';
    out += format_g9(cell.sem_percent);
    out += ',';
    out += std::to_string(cell.n_trials);
    out += '\n';
  }
  return out;
}

}  // namespace leadwalk
