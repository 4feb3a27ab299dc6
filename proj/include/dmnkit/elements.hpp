// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#pragma once

#include "dmnkit/network.hpp"
#include "dmnkit/types.hpp"

namespace dmnkit {

enum class Realization { Capacitor, Inductor };

/// Ideal lumped susceptance pinned at a design frequency. Positive values are
/// capacitors (B proportional to f), negative values inductors (B proportional
/// to 1/f); the sign fixes the realization and thereby the off-design law.
struct Susceptance {
  double b0 = 0.0;  // siemens at f0
  double f0 = 0.0;  // hertz
  Realization realization = Realization::Capacitor;

  Susceptance() = default;
  Susceptance(double b0, double f0);
};

double susceptance_at(const Susceptance& s, double f);

/// TEM, non-dispersive line. Electrical length scales linearly with frequency;
/// the optional attenuation is flat per wavelength.
struct TransmissionLine {
  double z_c = 50.0;                       // ohms
  double electrical_length_at_f0 = 0.0;    // radians
  double f0 = 0.0;                         // hertz
  double attenuation_db_per_wavelength = 0.0;

  double theta_at(double f) const { return electrical_length_at_f0 * f / f0; }
  bool lossless() const { return attenuation_db_per_wavelength == 0.0; }
};

/// gamma*l at frequency f (alpha*l + j theta).
Complex propagation_times_length(const TransmissionLine& tl, double f);

/// Input admittance of the open-circuited line. Raises StubResonance within
/// 1e-9 rad of odd multiples of pi/2 in the lossless case.
Complex open_stub_admittance(const TransmissionLine& tl, double f);

struct TwoPortAbcd {
  Complex a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};

  TwoPortAbcd cascade(const TwoPortAbcd& rhs) const;
  Complex input_impedance(Complex z_load) const;
};

TwoPortAbcd series_element_abcd(Complex z_series);
TwoPortAbcd shunt_element_abcd(Complex y_shunt);
TwoPortAbcd tl_abcd(const TransmissionLine& tl, double f);

/// Two-port of the line in S representation at reference z0 (well-defined at
/// every electrical length, unlike Y/Z).
MultiportNetwork tl_two_port(const TransmissionLine& tl, double f, double z0 = 50.0);

/// Shunt-Y parameters (y11, y12) of the line two-port. Throws StubResonance
/// at half-wave resonances where the Y form does not exist.
struct LineYParams {
  Complex y11, y12;
};
LineYParams tl_y_params(const TransmissionLine& tl, double f);

/// Single-frequency transmission-line replacement of a floating series
/// reactance: two identical series lines around one open stub, exact at f0.
struct SeriesReactanceLines {
  TransmissionLine series_a;
  TransmissionLine stub;
  TransmissionLine series_b;
};

SeriesReactanceLines quarter_wave_equivalent(double x_series, double f0);
TwoPortAbcd quarter_wave_equivalent_abcd(const SeriesReactanceLines& lines, double f);

/// Open stub realizing a given shunt susceptance at f0 (used by the netlist
/// realizations; z_c is chosen inside the realizability window).
TransmissionLine shunt_susceptance_stub(double b, double f0);

/// Three identical lines joined at a floating center node, reduced to the
/// 3-port Y seen at the outer ends:
///   diag  = Y_s - Y_s',   off-diag = -Y_s'
/// with Y_s = -j/(z_s tan theta_s) and Y_s' = -2j/(3 z_s sin 2theta_s).
MultiportNetwork star_three_port(double z_s, double theta_s, double freq = 0.0);

/// Characteristic impedance of a coaxial line from its radii and dielectric.
double coax_impedance(double r_inner, double r_outer, double eps_r);

}  // namespace dmnkit
