// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#include "dmnkit/network.hpp"

#include <algorithm>
#include <cmath>

#include "dmnkit/errors.hpp"

namespace dmnkit {

namespace {

constexpr double kMaxCondition = 1e12;

// Inverts via LU with an SVD-based condition estimate; all matrices here are
// at most 8x8, so the SVD cost is irrelevant.
ComplexMatrix checked_inverse(const ComplexMatrix& m, const char* context) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (!(smin > 0.0) || smax / smin > kMaxCondition) {
    throw SingularConversion(std::string(context) + ": matrix inversion is singular");
  }
  return m.inverse();
}

ComplexMatrix s_to_z(const ComplexMatrix& s, double z0) {
  const ComplexMatrix eye = ComplexMatrix::Identity(s.rows(), s.cols());
  return z0 * (eye + s) * checked_inverse(eye - s, "S->Z");
}

ComplexMatrix z_to_s(const ComplexMatrix& z, double z0) {
  const ComplexMatrix eye = ComplexMatrix::Identity(z.rows(), z.cols());
  return (z - z0 * eye) * checked_inverse(z + z0 * eye, "Z->S");
}

}  // namespace

MultiportNetwork::MultiportNetwork(Repr r, double f, ComplexMatrix m, double z0)
    : n_ports(static_cast<int>(m.rows())), repr(r), ref_impedance(z0), freq(f),
      matrix(std::move(m)) {
  if (matrix.rows() != matrix.cols()) {
    throw Error("MultiportNetwork: matrix must be square");
  }
  if (repr == Repr::S && !(ref_impedance > 0.0)) {
    throw Error("MultiportNetwork: S representation needs ref_impedance > 0");
  }
}

MultiportNetwork make_s(double freq, ComplexMatrix m, double z0) {
  return MultiportNetwork(Repr::S, freq, std::move(m), z0);
}

MultiportNetwork make_z(double freq, ComplexMatrix m) {
  return MultiportNetwork(Repr::Z, freq, std::move(m));
}

MultiportNetwork make_y(double freq, ComplexMatrix m) {
  return MultiportNetwork(Repr::Y, freq, std::move(m));
}

MultiportNetwork convert(const MultiportNetwork& net, Repr target, double z0) {
  // Z is the hub: lift the source representation to Z, then project.
  ComplexMatrix z;
  switch (net.repr) {
    case Repr::Z:
      z = net.matrix;
      break;
    case Repr::Y:
      z = checked_inverse(net.matrix, "Y->Z");
      break;
    case Repr::S:
      z = s_to_z(net.matrix, net.ref_impedance);
      break;
  }
  switch (target) {
    case Repr::Z:
      return make_z(net.freq, std::move(z));
    case Repr::Y:
      return make_y(net.freq, checked_inverse(z, "Z->Y"));
    case Repr::S:
      if (!(z0 > 0.0)) throw Error("convert: target reference impedance must be positive");
      return make_s(net.freq, z_to_s(z, z0), z0);
  }
  throw Error("convert: unknown representation");
}

MultiportNetwork terminate(const MultiportNetwork& net, const MultiportNetwork& load,
                           std::span<const int> load_port_indices) {
  if (net.repr != Repr::Y || load.repr != Repr::Y) {
    throw Error("terminate: both networks must be in Y representation");
  }
  if (net.freq != load.freq) {
    throw Error("terminate: networks are at different frequencies");
  }
  const int n = net.n_ports;
  const int k = load.n_ports;
  if (static_cast<int>(load_port_indices.size()) != k) {
    throw Error("terminate: load_port_indices length must match load port count");
  }

  std::vector<int> loaded(load_port_indices.begin(), load_port_indices.end());
  std::vector<bool> is_loaded(n, false);
  for (int idx : loaded) {
    if (idx < 0 || idx >= n || is_loaded[idx]) {
      throw Error("terminate: invalid load port index");
    }
    is_loaded[idx] = true;
  }
  std::vector<int> kept;
  for (int i = 0; i < n; ++i) {
    if (!is_loaded[i]) kept.push_back(i);
  }
  const int m = static_cast<int>(kept.size());

  ComplexMatrix y_pp(m, m), y_pa(m, k), y_ap(k, m), y_aa(k, k);
  for (int i = 0; i < m; ++i) {
    for (int c = 0; c < m; ++c) y_pp(i, c) = net.matrix(kept[i], kept[c]);
    for (int c = 0; c < k; ++c) y_pa(i, c) = net.matrix(kept[i], loaded[c]);
  }
  for (int i = 0; i < k; ++i) {
    for (int c = 0; c < m; ++c) y_ap(i, c) = net.matrix(loaded[i], kept[c]);
    for (int c = 0; c < k; ++c) y_aa(i, c) = net.matrix(loaded[i], loaded[c]);
  }

  const ComplexMatrix inner = y_aa + load.matrix;
  Eigen::JacobiSVD<ComplexMatrix> svd(inner);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (!(smin > 0.0) || smax / smin > kMaxCondition) {
    throw SingularTermination("terminate: Y_AA + Y_load is singular (ideal resonance)");
  }
  ComplexMatrix reduced = y_pp - y_pa * inner.inverse() * y_ap;
  return make_y(net.freq, std::move(reduced));
}

bool is_lossless(const MultiportNetwork& net, double tol) {
  if (net.repr != Repr::S) {
    throw Error("is_lossless: requires S representation");
  }
  const ComplexMatrix eye = ComplexMatrix::Identity(net.n_ports, net.n_ports);
  return (net.matrix.adjoint() * net.matrix - eye).cwiseAbs().maxCoeff() < tol;
}

bool is_reciprocal(const MultiportNetwork& net, double tol) {
  return (net.matrix - net.matrix.transpose()).cwiseAbs().maxCoeff() < tol;
}

FrequencySweep::FrequencySweep(std::vector<MultiportNetwork> pts) : points(std::move(pts)) {
  if (points.empty()) {
    throw EmptySweep("FrequencySweep: no points");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].n_ports != points.front().n_ports || points[i].repr != points.front().repr) {
      throw Error("FrequencySweep: mixed port counts or representations");
    }
    if (i > 0 && !(points[i].freq > points[i - 1].freq)) {
      throw Error("FrequencySweep: frequencies must be strictly increasing");
    }
  }
}

namespace {

double worst_entry_db(const MultiportNetwork& s, BandEntries which) {
  double worst = -1e300;
  for (int r = 0; r < s.n_ports; ++r) {
    for (int c = 0; c < s.n_ports; ++c) {
      const bool diagonal = (r == c);
      if (which == BandEntries::Matching && !diagonal) continue;
      if (which == BandEntries::Coupling && diagonal) continue;
      const double mag = std::abs(s.matrix(r, c));
      worst = std::max(worst, mag > 0.0 ? to_db(mag) : -1e300);
    }
  }
  return worst;
}

}  // namespace

std::vector<Band> band_below_threshold(const FrequencySweep& sweep, double threshold_db,
                                       BandEntries which) {
  if (sweep.empty()) throw EmptySweep("band_below_threshold: empty sweep");
  if (sweep.repr() != Repr::S) throw Error("band_below_threshold: sweep must be in S");

  const std::size_t n = sweep.size();
  std::vector<double> f(n), m(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = sweep.points[i].freq;
    m[i] = worst_entry_db(sweep.points[i], which);
  }

  std::vector<Band> bands;
  bool inside = m[0] < threshold_db;
  double start = inside ? f[0] : 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const bool below = m[i] < threshold_db;
    if (below == inside) continue;
    // Linear crossing between samples i-1 and i.
    const double t = (threshold_db - m[i - 1]) / (m[i] - m[i - 1]);
    const double fx = f[i - 1] + t * (f[i] - f[i - 1]);
    if (below) {
      start = fx;
    } else {
      bands.push_back({start, fx});
    }
    inside = below;
  }
  if (inside) bands.push_back({start, f[n - 1]});
  return bands;
}

}  // namespace dmnkit
