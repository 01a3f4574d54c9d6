#pragma once

#include <vector>

#include "leadwalk/filter.hpp"
#include "leadwalk/trial.hpp"
#include "leadwalk/types.hpp"

namespace leadwalk {

// Per-agent heading unit vectors and speeds, same length as the source
// positions. Heading is undefined (flagged, not dropped) where the filtered
// velocity is too small to normalize.
struct KinematicSeries {
  AgentId agent;
  double sample_rate_hz = 0.0;
  Path heading;
  VecXd speed;
  BoolArray heading_defined;
};

// Speeds below this are treated as standing still for heading purposes.
constexpr double kMinHeadingSpeedMps = 0.05;

// Central-difference derivative, one-sided at the two endpoints.
MatXd differentiate(const Eigen::Ref<const MatXd>& series, double sample_rate_hz);

// Two zero-phase 4th-order low-pass copies of each agent's positions (one
// per cutoff) are differentiated into velocities; the speed channel uses the
// higher cutoff, the heading channel the lower one.
std::vector<KinematicSeries> derive_kinematics(const Trial& trial,
                                               double heading_cutoff_hz = 0.6,
                                               double speed_cutoff_hz = 1.0);

}  // namespace leadwalk
