#include "leadwalk/trial.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <string_view>

namespace leadwalk {

namespace {

constexpr double kTimeToleranceS = 1e-6;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view token, int line_no, const char* what) {
  token = trim(token);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw Error(Error::Kind::parse, "line " + std::to_string(line_no) +
                                        ": cannot parse " + what + " '" +
                                        std::string(token) + "'");
  if (!std::isfinite(value))
    throw Error(Error::Kind::parse, "line " + std::to_string(line_no) +
                                        ": non-finite " + what);
  return value;
}

void append_double(std::string& out, double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, res.ptr);
}

void parse_comment(std::string_view body, int line_no, Trial& trial) {
  body = trim(body);
  if (body.rfind("fs=", 0) == 0) {
    trial.sample_rate_hz = parse_double(body.substr(3), line_no, "fs");
  } else if (body.rfind("position:", 0) == 0) {
    const auto rest = body.substr(9);
    const auto eq = rest.find('=');
    if (eq == std::string_view::npos)
      throw Error(Error::Kind::parse,
                  "line " + std::to_string(line_no) + ": malformed position comment");
    const AgentId id{trim(rest.substr(0, eq))};
    const auto slot = formation_slot_from_string(std::string(trim(rest.substr(eq + 1))));
    if (!slot)
      throw Error(Error::Kind::parse, "line " + std::to_string(line_no) +
                                          ": unknown formation slot");
    trial.formation[id] = *slot;
  } else if (body.rfind("ipd=", 0) == 0) {
    trial.ipd_m = parse_double(body.substr(4), line_no, "ipd");
  } else if (body.rfind("condition=", 0) == 0) {
    const auto cond = condition_from_string(std::string(trim(body.substr(10))));
    if (!cond)
      throw Error(Error::Kind::parse,
                  "line " + std::to_string(line_no) + ": unknown condition");
    trial.condition = *cond;
  } else if (body.rfind("sequence=", 0) == 0) {
    trial.sequence_tag = std::string(trim(body.substr(9)));
  }
  // Unrecognized comments are ignored.
}

}  // namespace

std::optional<Eigen::Index> Trial::agent_index(const AgentId& id) const {
  const auto it = std::find(agents.begin(), agents.end(), id);
  if (it == agents.end()) return std::nullopt;
  return static_cast<Eigen::Index>(it - agents.begin());
}

Eigen::Index min_samples(double sample_rate_hz) {
  const auto omega =
      static_cast<Eigen::Index>(std::llround(40.0 * sample_rate_hz / 60.0));
  return 2 * (2 * omega + 1);
}

Trial load_trial(std::istream& in) {
  Trial trial;
  struct Row {
    double t, x, y;
  };
  std::map<AgentId, std::vector<Row>> rows;
  std::vector<AgentId> order;

  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      parse_comment(view.substr(1), line_no, trial);
      continue;
    }
    if (!header_seen) {
      if (view != "time,id,x,y")
        throw Error(Error::Kind::parse,
                    "line " + std::to_string(line_no) +
                        ": expected header 'time,id,x,y', got '" +
                        std::string(view) + "'");
      header_seen = true;
      continue;
    }
    std::array<std::string_view, 4> fields;
    std::size_t start = 0;
    for (int f = 0; f < 3; ++f) {
      const auto comma = view.find(',', start);
      if (comma == std::string_view::npos)
        throw Error(Error::Kind::parse,
                    "line " + std::to_string(line_no) + ": expected 4 fields");
      fields[f] = view.substr(start, comma - start);
      start = comma + 1;
    }
    fields[3] = view.substr(start);
    if (fields[3].find(',') != std::string_view::npos)
      throw Error(Error::Kind::parse,
                  "line " + std::to_string(line_no) + ": expected 4 fields");
    const AgentId id{trim(fields[1])};
    if (id.empty())
      throw Error(Error::Kind::parse,
                  "line " + std::to_string(line_no) + ": empty agent id");
    auto [it, inserted] = rows.try_emplace(id);
    if (inserted) order.push_back(id);
    it->second.push_back({parse_double(fields[0], line_no, "time"),
                          parse_double(fields[2], line_no, "x"),
                          parse_double(fields[3], line_no, "y")});
  }
  if (!header_seen)
    throw Error(Error::Kind::parse, "missing 'time,id,x,y' header");
  if (rows.empty()) throw Error(Error::Kind::structure, "no samples");

  for (auto& [id, agent_rows] : rows)
    std::stable_sort(agent_rows.begin(), agent_rows.end(),
                     [](const Row& a, const Row& b) { return a.t < b.t; });

  const std::size_t n = rows.begin()->second.size();
  for (const auto& [id, agent_rows] : rows)
    if (agent_rows.size() != n)
      throw Error(Error::Kind::structure,
                  "agent '" + id + "' has " + std::to_string(agent_rows.size()) +
                      " samples, expected " + std::to_string(n));

  // Time base: median step across all agents, uniform within tolerance.
  std::vector<double> steps;
  steps.reserve(rows.size() * (n - 1));
  for (const auto& [id, agent_rows] : rows)
    for (std::size_t k = 1; k < agent_rows.size(); ++k)
      steps.push_back(agent_rows[k].t - agent_rows[k - 1].t);
  if (steps.empty())
    throw Error(Error::Kind::structure, "need at least 2 samples per agent");
  std::nth_element(steps.begin(), steps.begin() + steps.size() / 2, steps.end());
  const double dt_median = steps[steps.size() / 2];
  if (!(dt_median > 0))
    throw Error(Error::Kind::timing, "non-increasing time stamps");

  const double dt_expected =
      trial.sample_rate_hz > 0 ? 1.0 / trial.sample_rate_hz : dt_median;
  for (const auto& [id, agent_rows] : rows)
    for (std::size_t k = 1; k < agent_rows.size(); ++k) {
      const double step = agent_rows[k].t - agent_rows[k - 1].t;
      if (std::abs(step - dt_expected) > kTimeToleranceS)
        throw Error(Error::Kind::timing,
                    "agent '" + id + "' sample " + std::to_string(k) +
                        ": time step " + std::to_string(step) +
                        " deviates from expected " + std::to_string(dt_expected));
    }
  if (trial.sample_rate_hz <= 0) trial.sample_rate_hz = 1.0 / dt_median;

  if (static_cast<Eigen::Index>(n) < min_samples(trial.sample_rate_hz))
    throw Error(Error::Kind::structure,
                "trial too short: " + std::to_string(n) + " samples, need " +
                    std::to_string(min_samples(trial.sample_rate_hz)));

  trial.agents = std::move(order);
  trial.positions.reserve(trial.agents.size());
  for (const auto& id : trial.agents) {
    const auto& agent_rows = rows.at(id);
    Path path(static_cast<Eigen::Index>(n), 2);
    for (std::size_t k = 0; k < n; ++k) {
      path(static_cast<Eigen::Index>(k), 0) = agent_rows[k].x;
      path(static_cast<Eigen::Index>(k), 1) = agent_rows[k].y;
    }
    trial.positions.push_back(std::move(path));
  }
  return trial;
}

void serialize(const Trial& trial, std::ostream& out) {
  std::string buf;
  buf.reserve(1 << 16);
  buf += "# fs=";
  append_double(buf, trial.sample_rate_hz);
  buf += '\n';
  for (const auto& [id, slot] : trial.formation) {
    buf += "# position:";
    buf += id;
    buf += '=';
    buf += to_string(slot);
    buf += '\n';
  }
  if (trial.ipd_m) {
    buf += "# ipd=";
    append_double(buf, *trial.ipd_m);
    buf += '\n';
  }
  if (trial.condition) {
    buf += "# condition=";
    buf += to_string(*trial.condition);
    buf += '\n';
  }
  if (trial.sequence_tag) {
    buf += "# sequence=";
    buf += *trial.sequence_tag;
    buf += '\n';
  }
  buf += "time,id,x,y\n";
  const double dt = 1.0 / trial.sample_rate_hz;
  for (Eigen::Index t = 0; t < trial.n_samples(); ++t) {
    for (std::size_t a = 0; a < trial.agents.size(); ++a) {
      append_double(buf, static_cast<double>(t) * dt);
      buf += ',';
      buf += trial.agents[a];
      buf += ',';
      append_double(buf, trial.positions[a](t, 0));
      buf += ',';
      append_double(buf, trial.positions[a](t, 1));
      buf += '\n';
    }
  }
  out << buf;
}

Trial truncate(const Trial& trial, double head_s, double tail_s) {
  if (head_s < 0 || tail_s < 0)
    throw Error(Error::Kind::range, "truncation seconds must be non-negative");
  const auto head =
      static_cast<Eigen::Index>(std::llround(head_s * trial.sample_rate_hz));
  const auto tail =
      static_cast<Eigen::Index>(std::llround(tail_s * trial.sample_rate_hz));
  const Eigen::Index remaining = trial.n_samples() - head - tail;
  if (remaining < min_samples(trial.sample_rate_hz))
    throw Error(Error::Kind::range,
                "over-truncation: " + std::to_string(remaining) +
                    " samples would remain, need " +
                    std::to_string(min_samples(trial.sample_rate_hz)));
  Trial out = trial;
  for (auto& path : out.positions)
    path = Path(path.middleRows(head, remaining));
  return out;
}

std::vector<Diagnostic> validate(const Trial& trial) {
  std::vector<Diagnostic> out;
  const auto error = [&](std::string msg, std::optional<AgentId> agent = {},
                         std::optional<Eigen::Index> sample = {}) {
    out.push_back({Diagnostic::Severity::error, std::move(msg), std::move(agent),
                   sample});
  };

  if (!(trial.sample_rate_hz > 0)) error("sample rate must be positive");
  if (trial.agents.size() != trial.positions.size())
    error("agents and positions lists differ in length");

  for (std::size_t a = 0; a < trial.agents.size(); ++a)
    for (std::size_t b = a + 1; b < trial.agents.size(); ++b)
      if (trial.agents[a] == trial.agents[b])
        error("duplicate agent id '" + trial.agents[a] + "'", trial.agents[a]);

  const Eigen::Index n = trial.n_samples();
  if (trial.sample_rate_hz > 0 && n < min_samples(trial.sample_rate_hz))
    error("trial shorter than minimum of " +
          std::to_string(min_samples(trial.sample_rate_hz)) + " samples");

  for (std::size_t a = 0; a < trial.positions.size() && a < trial.agents.size();
       ++a) {
    const auto& path = trial.positions[a];
    const auto& id = trial.agents[a];
    if (path.rows() != n)
      error("agent '" + id + "' has ragged length " + std::to_string(path.rows()),
            id);
    for (Eigen::Index t = 0; t < path.rows(); ++t)
      if (!std::isfinite(path(t, 0)) || !std::isfinite(path(t, 1))) {
        error("non-finite coordinate", id, t);
        break;
      }
  }

  if (!trial.formation.empty() && trial.agents.size() == 4) {
    bool seen[4] = {false, false, false, false};
    bool ok = trial.formation.size() == 4;
    for (const auto& [id, slot] : trial.formation) {
      if (!trial.agent_index(id)) ok = false;
      const auto k = static_cast<int>(slot);
      if (seen[k]) ok = false;
      seen[k] = true;
    }
    for (bool s : seen) ok = ok && s;
    if (!ok)
      error("formation labels are not a bijection onto {FL, FR, BL, BR}");
  }

  // Plausibility: step-to-step speed above 10 m/s is flagged, not fatal.
  constexpr double kSpeedBurstMps = 10.0;
  for (std::size_t a = 0; a < trial.positions.size() && a < trial.agents.size();
       ++a) {
    const auto& path = trial.positions[a];
    for (Eigen::Index t = 1; t < path.rows(); ++t) {
      const double d = (path.row(t) - path.row(t - 1)).norm();
      if (std::isfinite(d) && d * trial.sample_rate_hz > kSpeedBurstMps) {
        out.push_back({Diagnostic::Severity::warning,
                       "implausible speed burst above 10 m/s", trial.agents[a],
                       t});
        break;
      }
    }
  }
  return out;
}

}  // namespace leadwalk
