// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#pragma once

#include <functional>
#include <vector>

#include "dmnkit/network.hpp"
#include "dmnkit/types.hpp"
#include "dmnkit/uca.hpp"

namespace dmnkit {

/// Per-element response in direction (theta, phi):
/// e_n = C(theta) exp(j 2 pi r sin(theta) cos(phi - phi_n)).
ComplexVector steering_vector(const UcaGeometry& geom, double theta, double phi);

struct GainResult {
  double dbi = 0.0;
  ComplexVector weights;  // optimal up to complex scale
};

/// Maximum directivity D = e^H A^-1 e of the generalized Rayleigh quotient
/// |e^T a|^2 / (a^H A a); equals the ideal power-matched realized gain.
GainResult max_directivity(const UcaGeometry& geom, const OverlapMatrix& overlap, double theta,
                           double phi);

/// Realized gain when sources with internal impedance z0 drive the antenna
/// ports directly: G_max = 4 z0 rho ||(Z_A + z0 I)^-H e||^2, rho =
/// Re{z_in}/a11. Raises CmsInconsistent when the impedance and pattern models
/// disagree by more than 2 %.
GainResult realized_gain_unmatched(const ComplexMatrix& z_a, const UcaGeometry& geom,
                                   const OverlapMatrix& overlap, double z0, double theta,
                                   double phi);

/// Realized gain with a 2N-port network (Y representation, antenna side ports
/// 0..N-1, feed side N..2N-1) between z0 sources and the antenna.
GainResult realized_gain_through_network(const MultiportNetwork& dmn, const ComplexMatrix& z_a,
                                         const UcaGeometry& geom, const OverlapMatrix& overlap,
                                         double z0, double theta, double phi);

enum class GainEngine { Ideal, Unmatched, Network };

struct GainSample {
  double phi0 = 0.0;
  double gain_dbi = 0.0;
  ComplexVector weights;
};

struct GainCurve {
  double theta_cut = 0.0;
  std::vector<GainSample> samples;

  double min_gain() const;
  double max_gain() const;
  double ripple() const { return max_gain() - min_gain(); }
  double mean_gain() const;
};

/// Optimal gain versus azimuth at a fixed polar cut; phi0 sampled uniformly
/// over [0, 2 pi). Requires n_phi >= 36.
GainCurve scan_gain_curve(const std::function<GainResult(double phi0)>& engine, double theta_cut,
                          int n_phi);

GainCurve scan_gain_curve_ideal(const UcaGeometry& geom, const OverlapMatrix& overlap,
                                double theta_cut, int n_phi);
GainCurve scan_gain_curve_unmatched(const ComplexMatrix& z_a, const UcaGeometry& geom,
                                    const OverlapMatrix& overlap, double z0, double theta_cut,
                                    int n_phi);
GainCurve scan_gain_curve_network(const MultiportNetwork& dmn, const ComplexMatrix& z_a,
                                  const UcaGeometry& geom, const OverlapMatrix& overlap,
                                  double z0, double theta_cut, int n_phi);

}  // namespace dmnkit
