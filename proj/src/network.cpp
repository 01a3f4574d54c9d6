#include "leadwalk/network.hpp"

#include <algorithm>

namespace leadwalk {

std::vector<std::pair<int, int>> window_partition(int trial_length,
                                                  int n_windows) {
  if (n_windows < 1)
    throw Error(Error::Kind::range, "need at least one window");
  if (trial_length < n_windows)
    throw Error(Error::Kind::range,
                "trial of length " + std::to_string(trial_length) +
                    " cannot be split into " + std::to_string(n_windows) +
                    " windows");
  std::vector<std::pair<int, int>> out;
  out.reserve(n_windows);
  const int base = trial_length / n_windows;
  const int remainder = trial_length % n_windows;
  int start = 0;
  for (int w = 0; w < n_windows; ++w) {
    const int len = base + (w < remainder ? 1 : 0);
    out.emplace_back(start, start + len);
    start += len;
  }
  return out;
}

InfluenceNetwork edge_weights(const DelayProfileSet& profiles,
                              std::pair<int, int> window) {
  InfluenceNetwork net;
  net.window_start = window.first;
  net.window_end = window.second;

  std::set<AgentId> nodes;
  for (const auto& [key, profile] : profiles) {
    nodes.insert(key.first);
    nodes.insert(key.second);
  }
  net.nodes.assign(nodes.begin(), nodes.end());

  std::set<PairKey> done;
  for (const auto& [key, profile] : profiles) {
    const PairKey canonical{std::min(key.first, key.second),
                            std::max(key.first, key.second)};
    if (done.count(canonical)) continue;
    // Prefer the canonical orientation's profile when present.
    const DelayProfile* p = &profile;
    if (const auto it = profiles.find(canonical); it != profiles.end())
      p = &it->second;
    done.insert(canonical);

    Eigen::Index positive = 0, negative = 0, defined = 0;
    const auto t_lo = std::max<Eigen::Index>(window.first, 0);
    const auto t_hi = std::min<Eigen::Index>(window.second, p->tau_star.size());
    for (Eigen::Index t = t_lo; t < t_hi; ++t) {
      if (!p->defined[t]) continue;
      ++defined;
      if (p->tau_star[t] > 0) ++positive;
      else if (p->tau_star[t] < 0) ++negative;
    }

    const PairKey forward{p->from, p->to};
    const PairKey reverse{p->to, p->from};
    if (defined == 0) {
      net.edges[forward] = 0.0;
      net.edges[reverse] = 0.0;
      net.undefined_edges.insert(forward);
      net.undefined_edges.insert(reverse);
    } else {
      net.edges[forward] =
          static_cast<double>(positive) / static_cast<double>(defined);
      net.edges[reverse] =
          static_cast<double>(negative) / static_cast<double>(defined);
    }
  }
  return net;
}

InfluenceNetwork dpi_prune(const InfluenceNetwork& net) {
  InfluenceNetwork out = net;
  // Null links are discarded up front.
  std::erase_if(out.edges, [](const auto& e) { return e.second == 0.0; });

  const auto weight = [&](const AgentId& i, const AgentId& j) -> const double* {
    const auto it = out.edges.find({i, j});
    return it == out.edges.end() ? nullptr : &it->second;
  };

  // Single pass over the original weights; simultaneous removal.
  std::set<PairKey> marked;
  for (const auto& i : out.nodes)
    for (const auto& j : out.nodes) {
      if (j == i) continue;
      const double* w_ij = weight(i, j);
      if (!w_ij) continue;
      for (const auto& k : out.nodes) {
        if (k == i || k == j) continue;
        const double* w_jk = weight(j, k);
        const double* w_ik = weight(i, k);
        if (!w_jk || !w_ik) continue;
        if (*w_ik < *w_ij && *w_ik < *w_jk) marked.insert({i, k});
      }
    }
  for (const auto& key : marked) out.edges.erase(key);
  return out;
}

InfluenceNetwork threshold(const InfluenceNetwork& net, double theta) {
  if (theta < 0.0 || theta > 1.0)
    throw Error(Error::Kind::range, "theta must lie in [0, 1]");
  InfluenceNetwork out = net;
  std::erase_if(out.edges,
                [theta](const auto& e) { return e.second < theta; });
  return out;
}

}  // namespace leadwalk
