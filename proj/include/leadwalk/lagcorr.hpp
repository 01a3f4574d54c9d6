#pragma once

#include <utility>
#include <vector>

#include "leadwalk/kinematics.hpp"
#include "leadwalk/types.hpp"

namespace leadwalk {

// Windowed delayed-correlation parameters. omega == 0 selects the default
// half-window for the mode, scaled to the sample rate: round(40*fs/60) for
// heading and round(20*fs/60) for speed (so the window duration is kept
// when resampling).
struct AnalysisParams {
  int omega = 0;
  double tau_max_s = 2.0;
  Mode mode = Mode::heading;

  int omega_or_default(double sample_rate_hz) const;
  int lag_max(double sample_rate_hz) const;
  void check(double sample_rate_hz) const;
};

// Correlation grid over (t, tau) for one ordered agent pair (from, to).
// Column c holds lag tau = c - lag_max samples; positive tau means `from`
// leads `to`. Cells whose window touches an out-of-range or undefined
// sample are masked (no partial windows).
struct CorrelationMap {
  AgentId from, to;
  Mode mode;
  double sample_rate_hz = 0.0;
  int lag_max = 0;
  MatXd value;      // n_samples x (2*lag_max + 1)
  BoolGrid defined;

  Eigen::Index n_samples() const { return value.rows(); }
  int tau_of(Eigen::Index col) const { return static_cast<int>(col) - lag_max; }
  Eigen::Index col_of(int tau) const { return tau + lag_max; }
};

// Per-time optimal delay tau*(t) in samples; positive tau* means `from`
// leads `to` at that instant.
struct DelayProfile {
  AgentId from, to;
  Mode mode;
  Eigen::VectorXi tau_star;
  BoolArray defined;
};

// Values closer than this compete as exact ties in optimal_delay. Keeps the
// tie-break rule stable against floating-point noise from the filtering and
// summation pipeline (which is itself only reproducible to ~1e-12).
constexpr double kTieEpsilon = 1e-9;

// Alignment of two heading unit vectors: their scalar product in [-1, 1].
template <class DerivedA, class DerivedB>
typename DerivedA::Scalar directional_alignment(
    const Eigen::MatrixBase<DerivedA>& heading_i,
    const Eigen::MatrixBase<DerivedB>& heading_j) {
  return heading_i.dot(heading_j);
}

// Magnitude of the speed difference, >= 0; 0 is a perfect match.
inline double speed_gap(double speed_i, double speed_j) {
  return std::abs(speed_i - speed_j);
}

// Windowed delayed correlation between kin_from and kin_to:
//   value[t][tau] = mean over k in [-omega, omega] of f(t+k, t+k+tau)
// with f the heading alignment or the speed gap depending on params.mode.
CorrelationMap correlation_map(const KinematicSeries& kin_from,
                               const KinematicSeries& kin_to,
                               const AnalysisParams& params);

// The lag maximising the heading correlation (or minimising the speed
// correlation) at each time. Ties within kTieEpsilon are broken toward the
// smallest |tau|, then negative before positive.
DelayProfile optimal_delay(const CorrelationMap& map);

}  // namespace leadwalk
