// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#pragma once

#include <span>
#include <vector>

#include "dmnkit/types.hpp"

namespace dmnkit {

enum class Repr { S, Z, Y };

/// Frequency-domain n-port network in one of the S/Z/Y representations.
/// S matrices are referenced to a single real impedance on all ports.
struct MultiportNetwork {
  int n_ports = 0;
  Repr repr = Repr::S;
  double ref_impedance = 50.0;  // meaningful for S only
  double freq = 0.0;            // hertz
  ComplexMatrix matrix;

  MultiportNetwork() = default;
  MultiportNetwork(Repr repr, double freq, ComplexMatrix m, double ref_impedance = 50.0);
};

MultiportNetwork make_s(double freq, ComplexMatrix m, double z0 = 50.0);
MultiportNetwork make_z(double freq, ComplexMatrix m);
MultiportNetwork make_y(double freq, ComplexMatrix m);

/// Converts between S, Z and Y. All conversions route through Z; implied
/// matrix inverses with condition number above 1e12 raise SingularConversion.
/// `z0` is the reference impedance of the *target* S representation (ignored
/// for Z/Y targets).
MultiportNetwork convert(const MultiportNetwork& net, Repr target, double z0 = 50.0);

/// Connects a k-port load to k of the ports of a larger network and returns
/// the admittance seen at the remaining ports:
///   Y_red = Y_PP - Y_PA (Y_AA + Y_load)^-1 Y_AP.
/// Both networks must be in Y representation at the same frequency.
MultiportNetwork terminate(const MultiportNetwork& net, const MultiportNetwork& load,
                           std::span<const int> load_port_indices);

/// True iff ||S^H S - I||_max < tol. Requires S representation.
bool is_lossless(const MultiportNetwork& net, double tol);

/// True iff ||M - M^T||_max < tol (any representation).
bool is_reciprocal(const MultiportNetwork& net, double tol);

/// Ordered frequency sweep of same-shape networks.
struct FrequencySweep {
  std::vector<MultiportNetwork> points;

  FrequencySweep() = default;
  explicit FrequencySweep(std::vector<MultiportNetwork> pts);

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
  int n_ports() const { return points.empty() ? 0 : points.front().n_ports; }
  Repr repr() const { return points.empty() ? Repr::S : points.front().repr; }
};

enum class BandEntries { Matching, Coupling, Both };

struct Band {
  double f_lo = 0.0;
  double f_hi = 0.0;
  double width() const { return f_hi - f_lo; }
};

/// Maximal contiguous intervals where max over the selected S entries of
/// 20 log10|S_ij| stays below threshold_db. Interval edges are linearly
/// interpolated (dB vs linear frequency) between sweep samples.
std::vector<Band> band_below_threshold(const FrequencySweep& sweep, double threshold_db,
                                       BandEntries which);

}  // namespace dmnkit
