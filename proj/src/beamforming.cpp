// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#include "dmnkit/beamforming.hpp"

#include <cmath>

#include "dmnkit/errors.hpp"

namespace dmnkit {

namespace {

constexpr double kCmsTolerance = 2e-2;

void require_cms_consistent(const ComplexMatrix& z_a, const OverlapMatrix& overlap) {
  const double err = cms_consistency_error(z_a, overlap);
  if (err > kCmsTolerance) {
    throw CmsInconsistent("impedance and pattern models disagree by " + std::to_string(err));
  }
}

double rho_of(const ComplexMatrix& z_a, const OverlapMatrix& overlap) {
  return z_a(0, 0).real() / overlap.a_diag();
}

}  // namespace

ComplexVector steering_vector(const UcaGeometry& geom, double theta, double phi) {
  const double c = monopole_pattern(theta);
  const double k_sin = 2.0 * pi * geom.radius_wavelengths * std::sin(theta);
  ComplexVector e(geom.n_elements);
  for (int n = 0; n < geom.n_elements; ++n) {
    e(n) = c * std::polar(1.0, k_sin * std::cos(phi - geom.element_angle(n)));
  }
  return e;
}

GainResult max_directivity(const UcaGeometry& geom, const OverlapMatrix& overlap, double theta,
                           double phi) {
  Eigen::LLT<RealMatrix> llt(overlap.entries);
  if (llt.info() != Eigen::Success) {
    throw SingularOverlap("max_directivity: overlap matrix is not positive definite");
  }
  const ComplexVector e = steering_vector(geom, theta, phi);
  const ComplexVector weights = llt.solve(e.conjugate().eval().matrix());
  const double d = (e.transpose() * weights).value().real();
  if (!(d > 0.0)) throw SingularOverlap("max_directivity: non-positive directivity");
  return {10.0 * std::log10(d), weights};
}

GainResult realized_gain_unmatched(const ComplexMatrix& z_a, const UcaGeometry& geom,
                                   const OverlapMatrix& overlap, double z0, double theta,
                                   double phi) {
  require_cms_consistent(z_a, overlap);
  const int n = static_cast<int>(z_a.rows());
  const ComplexMatrix m = z_a + z0 * ComplexMatrix::Identity(n, n);
  Eigen::FullPivLU<ComplexMatrix> lu(m);
  if (!lu.isInvertible()) {
    throw SingularComposition("realized_gain_unmatched: Z_A + z0 I singular");
  }
  const ComplexVector e = steering_vector(geom, theta, phi);
  // i = (Z_A + z0 I)^-1 v and G = 4 z0 rho |e^T i|^2 / v^H v, maximized by
  // v = ((Z_A + z0 I)^-1)^H conj(e).
  const ComplexVector v = lu.inverse().adjoint() * e.conjugate();
  const double g = 4.0 * z0 * rho_of(z_a, overlap) * v.squaredNorm();
  return {10.0 * std::log10(g), v};
}

GainResult realized_gain_through_network(const MultiportNetwork& dmn, const ComplexMatrix& z_a,
                                         const UcaGeometry& geom, const OverlapMatrix& overlap,
                                         double z0, double theta, double phi) {
  require_cms_consistent(z_a, overlap);
  if (dmn.repr != Repr::Y) {
    throw Error("realized_gain_through_network: network must be in Y representation");
  }
  const int n = static_cast<int>(z_a.rows());
  if (dmn.n_ports != 2 * n) {
    throw Error("realized_gain_through_network: network must have 2N ports");
  }

  Eigen::FullPivLU<ComplexMatrix> lu_za(z_a);
  if (!lu_za.isInvertible()) {
    throw SingularImpedance("realized_gain_through_network: Z_A singular");
  }
  const ComplexMatrix y_a = lu_za.inverse();

  const ComplexMatrix y_aa = dmn.matrix.topLeftCorner(n, n);
  const ComplexMatrix y_ap = dmn.matrix.topRightCorner(n, n);
  const ComplexMatrix y_pa = dmn.matrix.bottomLeftCorner(n, n);
  const ComplexMatrix y_pp = dmn.matrix.bottomRightCorner(n, n);

  // KCL with sources v behind z0 at the feed side:
  //   (Y_AA + Y_A) u_A + Y_AP u_P = 0
  //   Y_PA u_A + (Y_PP + I/z0) u_P = v / z0
  Eigen::FullPivLU<ComplexMatrix> lu_inner(y_aa + y_a);
  if (!lu_inner.isInvertible()) {
    throw SingularComposition("realized_gain_through_network: antenna-side block singular");
  }
  const ComplexMatrix y_in = y_pp - y_pa * lu_inner.solve(y_ap);
  Eigen::FullPivLU<ComplexMatrix> lu_port(
      y_in + ComplexMatrix::Identity(n, n) / z0);
  if (!lu_port.isInvertible()) {
    throw SingularComposition("realized_gain_through_network: feed-side solve singular");
  }
  // Antenna-port currents i_A = T v.
  const ComplexMatrix t = -y_a * lu_inner.solve(y_ap) * lu_port.inverse() / z0;

  const ComplexVector e = steering_vector(geom, theta, phi);
  const ComplexVector v = t.adjoint() * e.conjugate();
  const double g = 4.0 * z0 * rho_of(z_a, overlap) * v.squaredNorm();
  return {10.0 * std::log10(g), v};
}

double GainCurve::min_gain() const {
  double m = samples.front().gain_dbi;
  for (const GainSample& s : samples) m = std::min(m, s.gain_dbi);
  return m;
}

double GainCurve::max_gain() const {
  double m = samples.front().gain_dbi;
  for (const GainSample& s : samples) m = std::max(m, s.gain_dbi);
  return m;
}

double GainCurve::mean_gain() const {
  double acc = 0.0;
  for (const GainSample& s : samples) acc += s.gain_dbi;
  return acc / static_cast<double>(samples.size());
}

GainCurve scan_gain_curve(const std::function<GainResult(double)>& engine, double theta_cut,
                          int n_phi) {
  if (n_phi < 36) throw Error("scan_gain_curve: need at least 36 azimuth samples");
  GainCurve curve;
  curve.theta_cut = theta_cut;
  curve.samples.reserve(n_phi);
  for (int k = 0; k < n_phi; ++k) {
    const double phi0 = 2.0 * pi * k / n_phi;
    GainResult r = engine(phi0);
    curve.samples.push_back({phi0, r.dbi, std::move(r.weights)});
  }
  return curve;
}

GainCurve scan_gain_curve_ideal(const UcaGeometry& geom, const OverlapMatrix& overlap,
                                double theta_cut, int n_phi) {
  return scan_gain_curve(
      [&](double phi0) { return max_directivity(geom, overlap, theta_cut, phi0); }, theta_cut,
      n_phi);
}

GainCurve scan_gain_curve_unmatched(const ComplexMatrix& z_a, const UcaGeometry& geom,
                                    const OverlapMatrix& overlap, double z0, double theta_cut,
                                    int n_phi) {
  return scan_gain_curve(
      [&](double phi0) {
        return realized_gain_unmatched(z_a, geom, overlap, z0, theta_cut, phi0);
      },
      theta_cut, n_phi);
}

GainCurve scan_gain_curve_network(const MultiportNetwork& dmn, const ComplexMatrix& z_a,
                                  const UcaGeometry& geom, const OverlapMatrix& overlap,
                                  double z0, double theta_cut, int n_phi) {
  return scan_gain_curve(
      [&](double phi0) {
        return realized_gain_through_network(dmn, z_a, geom, overlap, z0, theta_cut, phi0);
      },
      theta_cut, n_phi);
}

}  // namespace dmnkit
