#include "leadwalk/filter.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"

using namespace leadwalk;

namespace {

// Frequency response of b/a at digital frequency f, evaluated directly from
// the polynomials; independent of the design path.
std::complex<double> response_at(const FilterCoeffsd& c, double f_hz,
                                 double fs_hz) {
  const std::complex<double> zinv =
      std::exp(std::complex<double>(0.0, -2.0 * std::numbers::pi * f_hz / fs_hz));
  std::complex<double> num = 0.0, den = 0.0, zk = 1.0;
  for (Eigen::Index k = 0; k < std::max(c.b.size(), c.a.size()); ++k) {
    if (k < c.b.size()) num += c.b[k] * zk;
    if (k < c.a.size()) den += c.a[k] * zk;
    zk *= zinv;
  }
  return num / den;
}

}  // namespace

TEST_CASE("first-order design matches the hand bilinear transform") {
  // For fc = fs/4: alpha = tan(pi/4)/(1 + tan(pi/4)) = 0.5,
  // b = [alpha, alpha], a = [1, 2*alpha - 1].
  const auto c = design_lowpass({1, 15.0, 60.0});
  REQUIRE(c.b.size() == 2);
  REQUIRE(c.a.size() == 2);
  CHECK(c.b[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c.b[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c.a[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(c.a[1]) < 1e-12);
}

TEST_CASE("fourth-order 1 Hz at 60 Hz matches an independent reference design") {
  // Reference values from scipy.signal.butter(4, 1.0/30.0).
  const auto c = design_lowpass({4, 1.0, 60.0});
  const double b_ref[] = {6.57854320e-06, 2.63141728e-05, 3.94712592e-05,
                          2.63141728e-05, 6.57854320e-06};
  const double a_ref[] = {1.0, -3.7264145, 5.2160482, -3.25001826, 0.76048982};
  REQUIRE(c.b.size() == 5);
  for (int k = 0; k < 5; ++k) {
    CHECK(c.b[k] == doctest::Approx(b_ref[k]).epsilon(1e-7));
    CHECK(c.a[k] == doctest::Approx(a_ref[k]).epsilon(1e-7));
  }
}

TEST_CASE("DC gain is one and cutoff magnitude is 1/sqrt(2)") {
  for (int order : {1, 2, 3, 4, 6}) {
    for (double fc : {0.6, 1.0, 5.0}) {
      const auto c = design_lowpass({order, fc, 60.0});
      CHECK(std::abs(c.b.sum() / c.a.sum() - 1.0) < 1e-12);
      CHECK(std::abs(std::abs(response_at(c, fc, 60.0)) - 1.0 / std::sqrt(2.0)) <
            1e-6);
    }
  }
}

TEST_CASE("designed magnitude follows the analytic Butterworth curve") {
  const FilterSpec spec{4, 1.0, 60.0};
  const auto c = design_lowpass(spec);
  for (double f : {0.05, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    const double mag2 = std::norm(response_at(c, f, 60.0));
    CHECK(mag2 == doctest::Approx(butterworth_magnitude_sq(spec, f)).epsilon(1e-9));
  }
}

TEST_CASE("design rejects invalid specs") {
  CHECK_THROWS_AS(design_lowpass({4, 30.0, 60.0}), Error);   // at Nyquist
  CHECK_THROWS_AS(design_lowpass({4, 31.0, 60.0}), Error);   // above Nyquist
  CHECK_THROWS_AS(design_lowpass({0, 1.0, 60.0}), Error);
  CHECK_THROWS_AS(design_lowpass({4, 1.0, 0.0}), Error);
}

TEST_CASE("filtfilt keeps constants exactly") {
  const auto c = design_lowpass({4, 1.0, 60.0});
  const VecXd x = VecXd::Constant(300, 2.5);
  const VecXd y = filtfilt<double>(c, x);
  REQUIRE(y.size() == x.size());
  CHECK((y.array() - 2.5).abs().maxCoeff() < 1e-12);
}

TEST_CASE("filtfilt keeps ramps exactly") {
  const auto c = design_lowpass({4, 1.0, 60.0});
  VecXd x(600);
  for (int t = 0; t < 600; ++t) x[t] = -3.0 + 1.3 * t / 60.0;
  const VecXd y = filtfilt<double>(c, x);
  CHECK((y - x).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("single forward pass on a ramp is the ramp minus its group delay") {
  const auto c = design_lowpass({4, 1.0, 60.0});
  const double delay = dc_group_delay(c);
  const double slope = 0.7 / 60.0;
  VecXd x(240);
  for (int t = 0; t < 240; ++t) x[t] = 1.0 + slope * t;
  VecXd state = affine_steady_state(c, x[0], slope);
  const VecXd y = filter_forward<double>(c, x, state);
  for (int t = 0; t < 240; ++t)
    CHECK(y[t] == doctest::Approx(x[t] - slope * delay).epsilon(1e-10));
}

TEST_CASE("low-frequency sine passes with zero phase and analytic gain") {
  const FilterSpec spec{4, 1.0, 60.0};
  const auto c = design_lowpass(spec);
  const double f = 0.1, fs = 60.0;
  const int n = 2400;  // 40 s
  VecXd x(n);
  for (int t = 0; t < n; ++t)
    x[t] = std::sin(2.0 * std::numbers::pi * f * t / fs);
  const VecXd y = filtfilt<double>(c, x);

  // Least-squares fit y ~ A sin + B cos over the central 80%.
  double ss = 0, sc = 0, cc = 0, ys = 0, yc = 0;
  for (int t = n / 10; t < n - n / 10; ++t) {
    const double s = std::sin(2.0 * std::numbers::pi * f * t / fs);
    const double co = std::cos(2.0 * std::numbers::pi * f * t / fs);
    ss += s * s;
    sc += s * co;
    cc += co * co;
    ys += y[t] * s;
    yc += y[t] * co;
  }
  const double det = ss * cc - sc * sc;
  const double amp_sin = (ys * cc - yc * sc) / det;
  const double amp_cos = (yc * ss - ys * sc) / det;
  const double amplitude = std::hypot(amp_sin, amp_cos);
  const double phase = std::atan2(amp_cos, amp_sin);

  const double expected = butterworth_magnitude_sq(spec, f);  // two passes
  CHECK(std::abs(phase) < 1e-3);
  CHECK(std::abs(amplitude - expected) < 0.01 * expected);
}

TEST_CASE("impulse response of the composition is symmetric about its peak") {
  const auto c = design_lowpass({4, 1.0, 60.0});
  const int n = 2001, center = 1000;
  VecXd x = VecXd::Zero(n);
  x[center] = 1.0;
  const VecXd y = filtfilt<double>(c, x);
  Eigen::Index peak;
  y.cwiseAbs().maxCoeff(&peak);
  CHECK(peak == center);
  for (int k = 1; k < 400; ++k)
    CHECK(std::abs(y[center + k] - y[center - k]) < 1e-9);
}

TEST_CASE("zero-phase property: band-limited input correlates at lag 0") {
  const auto c = design_lowpass({4, 1.0, 60.0});
  // Rich band-limited input below cutoff/2: many random sines up to 0.45 Hz.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> freq(0.03, 0.45);
  std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
  const int n = 4000;
  VecXd x = VecXd::Zero(n);
  for (int comp = 0; comp < 40; ++comp) {
    const double f = freq(rng), p = phase(rng);
    for (int t = 0; t < n; ++t)
      x[t] += std::sin(2 * std::numbers::pi * f * t / 60.0 + p);
  }
  const VecXd y = filtfilt<double>(c, x);

  auto xcorr = [&](int lag) {
    double acc = 0;
    for (int t = std::max(0, -lag); t < n - std::max(0, lag); ++t)
      acc += x[t] * y[t + lag];
    return acc;
  };
  const double at0 = xcorr(0);
  for (int lag = -60; lag <= 60; ++lag)
    if (lag != 0) CHECK(xcorr(lag) < at0);
}

TEST_CASE("filtfilt rejects series shorter than the padding") {
  const auto c = design_lowpass({4, 1.0, 60.0});
  const VecXd x = VecXd::Zero(12);  // needs > 3*order = 12
  CHECK_THROWS_AS(filtfilt<double>(c, x), Error);
  const VecXd ok = VecXd::LinSpaced(13, 0.0, 1.0);
  CHECK_NOTHROW(filtfilt<double>(c, ok));
}
