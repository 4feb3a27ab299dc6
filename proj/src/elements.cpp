// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#include "dmnkit/elements.hpp"

#include <algorithm>
#include <cmath>

#include "dmnkit/errors.hpp"

namespace dmnkit {

namespace {

constexpr double kResonanceTol = 1e-9;  // rad

// Practical microstrip realizability window.
constexpr double kZMin = 5.0;
constexpr double kZMax = 250.0;

double wrap_to_half_pi_distance(double theta) {
  // Distance of theta from the nearest odd multiple of pi/2.
  const double m = std::fmod(std::abs(theta), pi);
  return std::abs(m - pi / 2.0);
}

}  // namespace

Susceptance::Susceptance(double b0_, double f0_)
    : b0(b0_), f0(f0_),
      realization(b0_ >= 0.0 ? Realization::Capacitor : Realization::Inductor) {
  if (!(f0 > 0.0)) throw Error("Susceptance: design frequency must be positive");
}

double susceptance_at(const Susceptance& s, double f) {
  if (!(f > 0.0)) throw Error("susceptance_at: frequency must be positive");
  return s.realization == Realization::Capacitor ? s.b0 * f / s.f0 : s.b0 * s.f0 / f;
}

Complex propagation_times_length(const TransmissionLine& tl, double f) {
  const double theta = tl.theta_at(f);
  const double alpha_l =
      tl.attenuation_db_per_wavelength / db_per_neper * theta / (2.0 * pi);
  return {alpha_l, theta};
}

Complex open_stub_admittance(const TransmissionLine& tl, double f) {
  const double theta = tl.theta_at(f);
  if (tl.lossless()) {
    if (wrap_to_half_pi_distance(theta) < kResonanceTol) {
      throw StubResonance("open stub at quarter-wave resonance");
    }
    return j1 * std::tan(theta) / tl.z_c;
  }
  return std::tanh(propagation_times_length(tl, f)) / tl.z_c;
}

TwoPortAbcd TwoPortAbcd::cascade(const TwoPortAbcd& rhs) const {
  return {a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d,
          c * rhs.a + d * rhs.c, c * rhs.b + d * rhs.d};
}

Complex TwoPortAbcd::input_impedance(Complex z_load) const {
  return (a * z_load + b) / (c * z_load + d);
}

TwoPortAbcd series_element_abcd(Complex z_series) {
  return {1.0, z_series, 0.0, 1.0};
}

TwoPortAbcd shunt_element_abcd(Complex y_shunt) {
  return {1.0, 0.0, y_shunt, 1.0};
}

TwoPortAbcd tl_abcd(const TransmissionLine& tl, double f) {
  const Complex gl = propagation_times_length(tl, f);
  const Complex ch = std::cosh(gl);
  const Complex sh = std::sinh(gl);
  return {ch, tl.z_c * sh, sh / tl.z_c, ch};
}

MultiportNetwork tl_two_port(const TransmissionLine& tl, double f, double z0) {
  const TwoPortAbcd m = tl_abcd(tl, f);
  const Complex det = m.a * m.d - m.b * m.c;
  const Complex den = m.a + m.b / z0 + m.c * z0 + m.d;
  ComplexMatrix s(2, 2);
  s(0, 0) = (m.a + m.b / z0 - m.c * z0 - m.d) / den;
  s(0, 1) = 2.0 * det / den;
  s(1, 0) = 2.0 / den;
  s(1, 1) = (-m.a + m.b / z0 - m.c * z0 + m.d) / den;
  return make_s(f, std::move(s), z0);
}

LineYParams tl_y_params(const TransmissionLine& tl, double f) {
  const Complex gl = propagation_times_length(tl, f);
  const Complex sh = std::sinh(gl);
  if (std::abs(sh) < kResonanceTol) {
    throw StubResonance("transmission line at half-wave resonance; Y form singular");
  }
  const Complex ch = std::cosh(gl);
  return {ch / (tl.z_c * sh), -1.0 / (tl.z_c * sh)};
}

SeriesReactanceLines quarter_wave_equivalent(double x_series, double f0) {
  if (x_series == 0.0) throw Error("quarter_wave_equivalent: zero series reactance");
  // Symmetric line-stub-line sandwich; the series lines of impedance z1 and
  // electrical length t1 with a middle shunt susceptance -2 tan(t1)/z1 have
  // the exact two-port [[1, j 2 z1 tan(t1)],[0, 1]] at f0. Aim for near
  // quarter-wave lines, backing off when the impedance window clips.
  const double target_theta = 0.85 * pi / 2.0;
  double z1 = std::clamp(std::abs(x_series) / (2.0 * std::tan(target_theta)), kZMin, kZMax);
  double theta_mag = std::atan(std::abs(x_series) / (2.0 * z1));
  const double theta1 = x_series > 0.0 ? theta_mag : pi - theta_mag;

  const double b_shunt = -x_series / (z1 * z1);
  TransmissionLine series{z1, theta1, f0, 0.0};
  return {series, shunt_susceptance_stub(b_shunt, f0), series};
}

TwoPortAbcd quarter_wave_equivalent_abcd(const SeriesReactanceLines& lines, double f) {
  return tl_abcd(lines.series_a, f)
      .cascade(shunt_element_abcd(open_stub_admittance(lines.stub, f)))
      .cascade(tl_abcd(lines.series_b, f));
}

TransmissionLine shunt_susceptance_stub(double b, double f0) {
  // Open stub: Y = j tan(theta)/z. Pick z so |b z| ~ 1, keeping theta near
  // pi/4 (capacitive) or 3pi/4 (inductive) and clear of resonance.
  const double z = b == 0.0 ? kZMax : std::clamp(1.0 / std::abs(b), kZMin, kZMax);
  double theta = std::atan(b * z);
  if (theta < 0.0) theta += pi;
  return {z, theta, f0, 0.0};
}

MultiportNetwork star_three_port(double z_s, double theta_s, double freq) {
  if (!(z_s > 0.0)) throw Error("star_three_port: impedance must be positive");
  const double s2 = std::sin(2.0 * theta_s);
  if (std::abs(s2) < kResonanceTol) {
    throw StarResonance("star_three_port: sin(2 theta) = 0");
  }
  const Complex y_s = -j1 / (z_s * std::tan(theta_s));
  const Complex y_s_prime = -2.0 * j1 / (3.0 * z_s * s2);
  ComplexMatrix y(3, 3);
  y.setConstant(-y_s_prime);
  y.diagonal().setConstant(y_s - y_s_prime);
  return make_y(freq, std::move(y));
}

double coax_impedance(double r_inner, double r_outer, double eps_r) {
  if (!(r_outer > r_inner) || !(r_inner > 0.0) || !(eps_r >= 1.0)) {
    throw GeometryInvalid("coax_impedance: need r_outer > r_inner > 0 and eps_r >= 1");
  }
  return eta0 / (2.0 * pi) / std::sqrt(eps_r) * std::log(r_outer / r_inner);
}

}  // namespace dmnkit
