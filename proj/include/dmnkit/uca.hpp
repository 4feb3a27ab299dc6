// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#pragma once

#include "dmnkit/network.hpp"
#include "dmnkit/types.hpp"

namespace dmnkit {

/// Uniform circular array of identical elements in the xy-plane.
struct UcaGeometry {
  int n_elements = 1;
  double radius_wavelengths = 0.1;

  UcaGeometry(int n, double radius_wl);

  double element_angle(int n) const { return 2.0 * pi * n / n_elements; }
  Eigen::Vector2d element_position(int n) const;  // in wavelengths
  /// Distance between elements m and n in wavelengths.
  double element_distance(int m, int n) const;
  /// Adjacent-element spacing d = r sqrt(2 - 2 cos(2 pi / N)).
  double element_spacing() const;
};

/// Idealized quarter-wavelength monopole pattern over an infinite ground:
/// cos(pi/2 cos theta)/sin theta on the upper hemisphere, zero below. The
/// theta -> 0 limit is evaluated with a series branch.
double monopole_pattern(double theta);

/// Complex array response sum_n a_n exp(j k0 r sin(theta) cos(phi - phi_n)).
Complex array_factor(const UcaGeometry& geom, const ComplexVector& weights, double theta,
                     double phi);

/// Pattern-overlap (Gram) matrix: A_mn = (1/4pi) integral over the upper
/// hemisphere of C(theta)^2 exp(j k (r_m - r_n) . rhat) dOmega. Real symmetric
/// positive definite; the imaginary part vanishes by symmetry and is checked.
struct OverlapMatrix {
  RealMatrix entries;
  double a_diag() const { return entries(0, 0); }
  int size() const { return static_cast<int>(entries.rows()); }
};

/// Gauss-Legendre in cos(theta) times uniform trapezoid in phi (order and
/// 2*order azimuthal points). Doubling the order must not move any entry by
/// more than 1e-9 relative, else QuadratureNotConverged.
OverlapMatrix overlap_matrix(const UcaGeometry& geom, int quadrature_order = 128);

/// Sine and cosine integrals Si(x), Ci(x); series for small x, complex
/// continued fraction for large x.
struct SinCosIntegrals {
  double si = 0.0;
  double ci = 0.0;
};
SinCosIntegrals sin_cos_integrals(double x);

/// Self impedance of the canonical-minimum-scattering quarter-wave monopole
/// over infinite ground (half the thin half-wave dipole value), about
/// 36.5 + j21.3 ohms.
Complex cms_self_impedance();

/// Mutual impedance of two side-by-side quarter-wave monopoles at the given
/// separation, via the induced-EMF sine/cosine-integral expressions.
Complex cms_mutual_impedance(double separation_wavelengths);

/// Ring-symmetric array description with one coupling value (exact for N <= 3;
/// for larger N use cms_impedance_matrix, which resolves per-pair distances).
struct SymmetricArrayModel {
  int n_elements = 3;
  Complex z_in;
  Complex z_c;
};

/// CMS model of the geometry collapsed to (z_in, z_c); requires all element
/// pairs to share one distance (N <= 3).
SymmetricArrayModel cms_symmetric_model(const UcaGeometry& geom);

/// Z_A = (z_in - z_c) I + z_c J for the ring model.
ComplexMatrix impedance_matrix(const SymmetricArrayModel& model);

/// Distance-aware CMS impedance matrix for any N.
ComplexMatrix cms_impedance_matrix(const UcaGeometry& geom);

/// Y_A by direct numerical inversion of Z_A.
MultiportNetwork admittance_of(const SymmetricArrayModel& model, double freq = 0.0);
MultiportNetwork admittance_of(const ComplexMatrix& z_a, double freq = 0.0);

/// Diagonal/off-diagonal admittance entries of a ring-symmetric Y matrix.
struct RingAdmittance {
  Complex alpha;
  Complex beta;
};
RingAdmittance ring_entries(const ComplexMatrix& y);

/// Max relative deviation between Re{Z_A} and rho * A with
/// rho = Re{z_self}/a11; the scalar tying the impedance model to the pattern
/// model. Small (< 1e-2) whenever the CMS assumption holds.
double cms_consistency_error(const ComplexMatrix& z_a, const OverlapMatrix& overlap);

}  // namespace dmnkit
