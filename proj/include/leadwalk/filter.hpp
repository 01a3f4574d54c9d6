#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <type_traits>
#include <vector>

#include "leadwalk/types.hpp"

namespace leadwalk {

struct FilterSpec {
  int order = 4;
  double cutoff_hz = 0.0;
  double sample_rate_hz = 0.0;
};

// Transfer function b(z^-1)/a(z^-1), a[0] == 1.
template <class Scalar>
struct FilterCoeffs {
  VecX<Scalar> b;
  VecX<Scalar> a;

  int order() const { return static_cast<int>(a.size()) - 1; }
};

using FilterCoeffsd = FilterCoeffs<double>;

namespace detail {

// Multiplies the polynomial `poly` (ascending powers of z^-1) by the real
// quadratic 1 + c1*x + c2*x^2.
template <class Scalar>
VecX<Scalar> multiply_quadratic(const VecX<Scalar>& poly, Scalar c1, Scalar c2) {
  VecX<Scalar> out = VecX<Scalar>::Zero(poly.size() + 2);
  for (Eigen::Index i = 0; i < poly.size(); ++i) {
    out[i] += poly[i];
    out[i + 1] += c1 * poly[i];
    out[i + 2] += c2 * poly[i];
  }
  return out;
}

template <class Scalar>
VecX<Scalar> multiply_linear(const VecX<Scalar>& poly, Scalar c1) {
  VecX<Scalar> out = VecX<Scalar>::Zero(poly.size() + 1);
  for (Eigen::Index i = 0; i < poly.size(); ++i) {
    out[i] += poly[i];
    out[i + 1] += c1 * poly[i];
  }
  return out;
}

}  // namespace detail

// Digital Butterworth low-pass via bilinear transform with frequency
// prewarping. The magnitude response is exactly
//   |H(f)|^2 = 1 / (1 + (tan(pi f/fs) / tan(pi fc/fs))^(2n)),
// so |H(fc)| = 1/sqrt(2) and the DC gain is 1.
template <class Scalar = double>
FilterCoeffs<Scalar> design_lowpass(const FilterSpec& spec) {
  if (spec.order < 1)
    throw Error(Error::Kind::filter_design, "filter order must be >= 1");
  if (!(spec.sample_rate_hz > 0.0))
    throw Error(Error::Kind::filter_design, "sample rate must be positive");
  if (!(spec.cutoff_hz > 0.0) || spec.cutoff_hz >= spec.sample_rate_hz / 2.0)
    throw Error(Error::Kind::filter_design,
                "cutoff must lie in (0, sample_rate/2)");

  const int n = spec.order;
  // Prewarped analog cutoff, in units of 2*fs.
  const Scalar warp =
      std::tan(std::numbers::pi_v<Scalar> * static_cast<Scalar>(spec.cutoff_hz) /
               static_cast<Scalar>(spec.sample_rate_hz));

  // Denominator: analog prototype poles wc*exp(i*theta) on the left unit
  // semicircle, mapped through z = (1 + p/(2fs)) / (1 - p/(2fs)).
  // Conjugate pairs are combined into real quadratics before expansion.
  VecX<Scalar> a(1);
  a[0] = Scalar(1);
  for (int k = 0; k < n / 2; ++k) {
    const Scalar theta = std::numbers::pi_v<Scalar> *
                         (Scalar(2 * k + 1 + n) / Scalar(2 * n));
    const std::complex<Scalar> w = warp * std::polar(Scalar(1), theta);
    const std::complex<Scalar> zp = (Scalar(1) + w) / (Scalar(1) - w);
    // (1 - zp*x)(1 - conj(zp)*x) = 1 - 2 Re(zp) x + |zp|^2 x^2
    a = detail::multiply_quadratic<Scalar>(a, Scalar(-2) * zp.real(),
                                           std::norm(zp));
  }
  if (n % 2 == 1) {
    // Real pole at theta = pi: w = -warp.
    const Scalar zp = (Scalar(1) - warp) / (Scalar(1) + warp);
    a = detail::multiply_linear<Scalar>(a, -zp);
  }

  // Numerator: n zeros at z = -1, scaled for unit DC gain.
  VecX<Scalar> b(1);
  b[0] = Scalar(1);
  for (int k = 0; k < n; ++k) b = detail::multiply_linear<Scalar>(b, Scalar(1));
  b *= a.sum() / b.sum();

  return FilterCoeffs<Scalar>{std::move(b), std::move(a)};
}

namespace detail {

// The clustered near-unit poles of low-cutoff designs amplify state
// perturbations by several orders of magnitude, so all steady-state and
// recurrence arithmetic for double filters runs in long double.
template <class Scalar>
using FilterAcc =
    std::conditional_t<std::is_same_v<Scalar, double>, long double, Scalar>;

template <class Scalar>
struct AccCoeffs {
  using Acc = FilterAcc<Scalar>;
  std::vector<Acc> b, a;

  explicit AccCoeffs(const FilterCoeffs<Scalar>& c)
      : b(c.b.size()), a(c.a.size()) {
    for (Eigen::Index k = 0; k < c.b.size(); ++k) b[k] = c.b[k];
    for (Eigen::Index k = 0; k < c.a.size(); ++k) a[k] = c.a[k];
  }
  int order() const { return static_cast<int>(a.size()) - 1; }
};

template <class Acc>
Acc dc_group_delay_acc(const std::vector<Acc>& b, const std::vector<Acc>& a) {
  Acc bs = 0, bd = 0, as = 0, ad = 0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    bs += b[k];
    bd += Acc(k) * b[k];
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    as += a[k];
    ad += Acc(k) * a[k];
  }
  return bd / bs - ad / as;
}

// Direct-form-II-transposed state reproducing the steady response to the
// affine input u[n] = value + slope*n. Backward recurrences from S_m == 0:
//   p_i = (b_{i+1} - a_{i+1}) + p_{i+1}
//   q_i = a_{i+1}*delay + q_{i+1} - p_i
template <class Acc>
std::vector<Acc> affine_steady_state_acc(const std::vector<Acc>& b,
                                         const std::vector<Acc>& a, Acc value,
                                         Acc slope) {
  const int m = static_cast<int>(a.size()) - 1;
  const Acc delay = dc_group_delay_acc(b, a);
  std::vector<Acc> state(m);
  Acc pn = 0, qn = 0;
  for (int i = m - 1; i >= 0; --i) {
    const Acc p = (b[i + 1] - a[i + 1]) + pn;
    const Acc q = a[i + 1] * delay + qn - p;
    state[i] = p * value + q * slope;
    pn = p;
    qn = q;
  }
  return state;
}

}  // namespace detail

// Group delay at DC, in samples: B'(1)/B(1) - A'(1)/A(1) with polynomials in
// powers of z^-1.
template <class Scalar>
Scalar dc_group_delay(const FilterCoeffs<Scalar>& coeffs) {
  const detail::AccCoeffs<Scalar> acc(coeffs);
  return static_cast<Scalar>(detail::dc_group_delay_acc(acc.b, acc.a));
}

// State of a direct-form-II-transposed realization that reproduces the
// steady response to the affine input u[n] = value + slope*n, so that a
// filter started on such a signal shows no transient at all. With slope 0
// this is the usual step steady state.
template <class Scalar>
VecX<Scalar> affine_steady_state(const FilterCoeffs<Scalar>& coeffs,
                                 Scalar value, Scalar slope) {
  const detail::AccCoeffs<Scalar> acc(coeffs);
  const auto state = detail::affine_steady_state_acc(
      acc.b, acc.a, static_cast<detail::FilterAcc<Scalar>>(value),
      static_cast<detail::FilterAcc<Scalar>>(slope));
  VecX<Scalar> out(static_cast<Eigen::Index>(state.size()));
  for (std::size_t i = 0; i < state.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = static_cast<Scalar>(state[i]);
  return out;
}

// Single-pass IIR filter (direct form II transposed) with explicit initial
// state; `state` is updated in place and can seed a subsequent segment.
// Near-cutoff poles sit close to the unit circle, so the recurrence runs in
// extended precision to keep rounding noise well below the tie tolerances
// used downstream.
template <class Scalar>
VecX<Scalar> filter_forward(const FilterCoeffs<Scalar>& coeffs,
                            const Eigen::Ref<const VecX<Scalar>>& input,
                            VecX<Scalar>& state) {
  using Acc = std::conditional_t<std::is_same_v<Scalar, double>, long double,
                                 Scalar>;
  const int m = coeffs.order();
  std::vector<Acc> b(coeffs.b.size()), a(coeffs.a.size()), s(m);
  for (Eigen::Index k = 0; k < coeffs.b.size(); ++k) b[k] = coeffs.b[k];
  for (Eigen::Index k = 0; k < coeffs.a.size(); ++k) a[k] = coeffs.a[k];
  for (int i = 0; i < m; ++i) s[i] = state[i];

  VecX<Scalar> out(input.size());
  for (Eigen::Index t = 0; t < input.size(); ++t) {
    const Acc x = input[t];
    const Acc y = b[0] * x + s[0];
    for (int i = 0; i < m - 1; ++i) s[i] = b[i + 1] * x - a[i + 1] * y + s[i + 1];
    s[m - 1] = b[m] * x - a[m] * y;
    out[t] = static_cast<Scalar>(y);
  }
  for (int i = 0; i < m; ++i) state[i] = static_cast<Scalar>(s[i]);
  return out;
}

namespace detail {

// Odd reflection of `series` by `pad` samples around each endpoint.
template <class Scalar>
VecX<Scalar> odd_extend(const Eigen::Ref<const VecX<Scalar>>& series,
                        Eigen::Index pad) {
  const Eigen::Index n = series.size();
  VecX<Scalar> ext(n + 2 * pad);
  for (Eigen::Index i = 0; i < pad; ++i)
    ext[i] = Scalar(2) * series[0] - series[pad - i];
  ext.segment(pad, n) = series;
  for (Eigen::Index i = 0; i < pad; ++i)
    ext[pad + n + i] = Scalar(2) * series[n - 1] - series[n - 2 - i];
  return ext;
}

template <class Scalar>
VecX<Scalar> run_pass(const FilterCoeffs<Scalar>& coeffs,
                      const VecX<Scalar>& input) {
  const Scalar slope = input.size() > 1 ? input[1] - input[0] : Scalar(0);
  VecX<Scalar> state = affine_steady_state(coeffs, input[0], slope);
  return filter_forward<Scalar>(coeffs, input, state);
}

}  // namespace detail

// Zero-phase filtering: forward pass, then a second pass over the reversed
// output. The series is first extended by odd reflection (3*order samples at
// each end) and each pass starts from the affine steady state matching the
// local value and slope, which keeps constant and linear signals exactly
// invariant and suppresses endpoint transients on real data.
template <class Scalar>
VecX<Scalar> filtfilt(const FilterCoeffs<Scalar>& coeffs,
                      const Eigen::Ref<const VecX<Scalar>>& series) {
  const Eigen::Index pad = 3 * coeffs.order();
  if (series.size() <= pad)
    throw Error(Error::Kind::length,
                "series too short for zero-phase filtering: need more than " +
                    std::to_string(pad) + " samples, got " +
                    std::to_string(series.size()));

  VecX<Scalar> ext = detail::odd_extend<Scalar>(series, pad);
  VecX<Scalar> fwd = detail::run_pass(coeffs, ext);
  fwd.reverseInPlace();
  VecX<Scalar> bwd = detail::run_pass(coeffs, fwd);
  bwd.reverseInPlace();
  return bwd.segment(pad, series.size());
}

// Analytic squared magnitude of the prewarped Butterworth design at `f_hz`.
inline double butterworth_magnitude_sq(const FilterSpec& spec, double f_hz) {
  const double num = std::tan(std::numbers::pi * f_hz / spec.sample_rate_hz);
  const double den =
      std::tan(std::numbers::pi * spec.cutoff_hz / spec.sample_rate_hz);
  return 1.0 / (1.0 + std::pow(num / den, 2.0 * spec.order));
}

}  // namespace leadwalk
