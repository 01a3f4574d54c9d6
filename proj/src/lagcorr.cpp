#include "leadwalk/lagcorr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace leadwalk {

int AnalysisParams::omega_or_default(double sample_rate_hz) const {
  if (omega > 0) return omega;
  const double base = mode == Mode::heading ? 40.0 : 20.0;
  return static_cast<int>(std::llround(base * sample_rate_hz / 60.0));
}

int AnalysisParams::lag_max(double sample_rate_hz) const {
  return static_cast<int>(std::llround(tau_max_s * sample_rate_hz));
}

void AnalysisParams::check(double sample_rate_hz) const {
  if (omega_or_default(sample_rate_hz) < 1)
    throw Error(Error::Kind::config, "omega must be >= 1");
  if (lag_max(sample_rate_hz) < 1)
    throw Error(Error::Kind::config, "tau_max must cover at least one sample");
}

CorrelationMap correlation_map(const KinematicSeries& kin_from,
                               const KinematicSeries& kin_to,
                               const AnalysisParams& params) {
  const Eigen::Index n = kin_from.speed.size();
  if (kin_to.speed.size() != n)
    throw Error(Error::Kind::structure, "kinematic series lengths differ");
  const double fs = kin_from.sample_rate_hz;
  params.check(fs);

  const int omega = params.omega_or_default(fs);
  const int lag_max = params.lag_max(fs);
  const Eigen::Index window = 2 * omega + 1;
  const bool heading_mode = params.mode == Mode::heading;

  CorrelationMap map;
  map.from = kin_from.agent;
  map.to = kin_to.agent;
  map.mode = params.mode;
  map.sample_rate_hz = fs;
  map.lag_max = lag_max;
  map.value = MatXd::Constant(n, 2 * lag_max + 1,
                              std::numeric_limits<double>::quiet_NaN());
  map.defined = BoolGrid::Constant(n, 2 * lag_max + 1, false);

  // Per lag: prefix sums of the pointwise terms (extended precision, so the
  // windowed means stay within ~1e-13 of direct summation) plus a prefix
  // count of defined terms to enforce full windows.
  std::vector<long double> sum;
  std::vector<Eigen::Index> count;
  bool any_defined = false;
  for (int tau = -lag_max; tau <= lag_max; ++tau) {
    const Eigen::Index col = map.col_of(tau);
    const Eigen::Index t_lo = std::max<Eigen::Index>(0, -tau);
    const Eigen::Index t_hi = n - 1 - std::max<Eigen::Index>(0, tau);
    const Eigen::Index m = t_hi - t_lo + 1;
    if (m < window) continue;

    sum.assign(m + 1, 0.0L);
    count.assign(m + 1, 0);
    for (Eigen::Index k = 0; k < m; ++k) {
      const Eigen::Index t = t_lo + k;
      double term = 0.0;
      bool term_defined;
      if (heading_mode) {
        term_defined =
            kin_from.heading_defined[t] && kin_to.heading_defined[t + tau];
        if (term_defined)
          term = directional_alignment(kin_from.heading.row(t),
                                       kin_to.heading.row(t + tau));
      } else {
        term_defined = true;
        term = speed_gap(kin_from.speed[t], kin_to.speed[t + tau]);
      }
      sum[k + 1] = sum[k] + term;
      count[k + 1] = count[k] + (term_defined ? 1 : 0);
    }

    for (Eigen::Index t = t_lo + omega; t + omega <= t_hi; ++t) {
      const Eigen::Index k0 = t - omega - t_lo;
      const Eigen::Index k1 = t + omega - t_lo;
      if (count[k1 + 1] - count[k0] != window) continue;
      double v = static_cast<double>((sum[k1 + 1] - sum[k0]) /
                                     static_cast<long double>(window));
      if (heading_mode) v = std::clamp(v, -1.0, 1.0);
      map.value(t, col) = v;
      map.defined(t, col) = true;
      any_defined = true;
    }
  }
  if (!any_defined)
    throw Error(Error::Kind::empty_map,
                "no fully defined (t, tau) cell for pair " + kin_from.agent +
                    " -> " + kin_to.agent);
  return map;
}

DelayProfile optimal_delay(const CorrelationMap& map) {
  DelayProfile profile;
  profile.from = map.from;
  profile.to = map.to;
  profile.mode = map.mode;

  const Eigen::Index n = map.n_samples();
  const Eigen::Index n_lags = map.value.cols();
  profile.tau_star = Eigen::VectorXi::Zero(n);
  profile.defined = BoolArray::Constant(n, false);

  const bool maximize = map.mode == Mode::heading;
  for (Eigen::Index t = 0; t < n; ++t) {
    bool any = false;
    double best = 0.0;
    for (Eigen::Index c = 0; c < n_lags; ++c) {
      if (!map.defined(t, c)) continue;
      const double v = map.value(t, c);
      if (!any || (maximize ? v > best : v < best)) {
        best = v;
        any = true;
      }
    }
    if (!any) continue;

    // Candidates within the tie tolerance of the extremum; smallest |tau|
    // wins, negative before positive on an exact +/- tie.
    int chosen = 0;
    bool have = false;
    for (Eigen::Index c = 0; c < n_lags; ++c) {
      if (!map.defined(t, c)) continue;
      const double v = map.value(t, c);
      if (maximize ? v < best - kTieEpsilon : v > best + kTieEpsilon) continue;
      const int tau = map.tau_of(c);
      if (!have || std::abs(tau) < std::abs(chosen) ||
          (std::abs(tau) == std::abs(chosen) && tau < chosen)) {
        chosen = tau;
        have = true;
      }
    }
    profile.tau_star[t] = chosen;
    profile.defined[t] = true;
  }
  return profile;
}

}  // namespace leadwalk
