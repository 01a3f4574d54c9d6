#include "leadwalk/kinematics.hpp"

#include <cmath>

namespace leadwalk {

MatXd differentiate(const Eigen::Ref<const MatXd>& series,
                    double sample_rate_hz) {
  const Eigen::Index n = series.rows();
  MatXd out(n, series.cols());
  if (n < 2)
    throw Error(Error::Kind::length, "need at least 2 samples to differentiate");
  out.row(0) = (series.row(1) - series.row(0)) * sample_rate_hz;
  out.row(n - 1) = (series.row(n - 1) - series.row(n - 2)) * sample_rate_hz;
  for (Eigen::Index t = 1; t < n - 1; ++t)
    out.row(t) = (series.row(t + 1) - series.row(t - 1)) * (sample_rate_hz / 2.0);
  return out;
}

std::vector<KinematicSeries> derive_kinematics(const Trial& trial,
                                               double heading_cutoff_hz,
                                               double speed_cutoff_hz) {
  const auto heading_filter =
      design_lowpass({4, heading_cutoff_hz, trial.sample_rate_hz});
  const auto speed_filter =
      design_lowpass({4, speed_cutoff_hz, trial.sample_rate_hz});

  std::vector<KinematicSeries> out;
  out.reserve(trial.agents.size());
  for (std::size_t a = 0; a < trial.agents.size(); ++a) {
    const Path& raw = trial.positions[a];
    const Eigen::Index n = raw.rows();

    Path for_heading(n, 2), for_speed(n, 2);
    for (int c = 0; c < 2; ++c) {
      for_heading.col(c) = filtfilt<double>(heading_filter, raw.col(c));
      for_speed.col(c) = filtfilt<double>(speed_filter, raw.col(c));
    }
    const MatXd v_heading = differentiate(for_heading, trial.sample_rate_hz);
    const MatXd v_speed = differentiate(for_speed, trial.sample_rate_hz);

    KinematicSeries series;
    series.agent = trial.agents[a];
    series.sample_rate_hz = trial.sample_rate_hz;
    series.heading = Path::Zero(n, 2);
    series.speed = v_speed.rowwise().norm();
    series.heading_defined = BoolArray::Constant(n, false);
    for (Eigen::Index t = 0; t < n; ++t) {
      const double norm = v_heading.row(t).norm();
      if (norm >= kMinHeadingSpeedMps) {
        series.heading.row(t) = v_heading.row(t) / norm;
        series.heading_defined[t] = true;
      }
    }
    out.push_back(std::move(series));
  }
  return out;
}

}  // namespace leadwalk
