// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#include "dmnkit/uca.hpp"

#include <cmath>
#include <vector>

#include "dmnkit/errors.hpp"

namespace dmnkit {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;

struct GaussLegendre {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;
};

// Nodes and weights by Newton iteration on the Legendre polynomial, then
// mapped from [-1, 1] to [0, 1].
GaussLegendre gauss_legendre_01(int order) {
  GaussLegendre gl;
  gl.nodes.resize(order);
  gl.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    gl.nodes[i] = 0.5 * (x + 1.0);
    gl.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);  // = w/2 on the unit interval
  }
  return gl;
}

ComplexMatrix overlap_raw(const UcaGeometry& geom, int order) {
  const int n = geom.n_elements;
  const GaussLegendre gl = gauss_legendre_01(order);
  const int n_phi = 2 * order;
  const double w_phi = 2.0 * pi / n_phi;

  std::vector<Eigen::Vector2d> pos(n);
  for (int i = 0; i < n; ++i) pos[i] = geom.element_position(i);

  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (int iu = 0; iu < order; ++iu) {
    const double u = gl.nodes[iu];  // cos(theta)
    const double theta = std::acos(u);
    const double c2 = monopole_pattern(theta) * monopole_pattern(theta);
    const double st = std::sin(theta);
    for (int ip = 0; ip < n_phi; ++ip) {
      const double phi = w_phi * ip;
      const Eigen::Vector2d rhat(st * std::cos(phi), st * std::sin(phi));
      const double w = gl.weights[iu] * w_phi * c2;
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c <= r; ++c) {
          const double phase = 2.0 * pi * rhat.dot(pos[r] - pos[c]);
          acc(r, c) += w * std::polar(1.0, phase);
        }
      }
    }
  }
  acc /= 4.0 * pi;
  for (int r = 0; r < n; ++r) {
    for (int c = r + 1; c < n; ++c) acc(r, c) = std::conj(acc(c, r));
  }
  return acc;
}

}  // namespace

UcaGeometry::UcaGeometry(int n, double radius_wl) : n_elements(n), radius_wavelengths(radius_wl) {
  if (n_elements < 1) throw GeometryInvalid("UcaGeometry: need at least one element");
  if (!(radius_wavelengths > 0.0)) throw GeometryInvalid("UcaGeometry: radius must be positive");
}

Eigen::Vector2d UcaGeometry::element_position(int n) const {
  const double a = element_angle(n);
  return radius_wavelengths * Eigen::Vector2d(std::cos(a), std::sin(a));
}

double UcaGeometry::element_distance(int m, int n) const {
  const double dphi = element_angle(m) - element_angle(n);
  return radius_wavelengths * std::sqrt(2.0 - 2.0 * std::cos(dphi));
}

double UcaGeometry::element_spacing() const {
  return n_elements > 1 ? element_distance(0, 1) : 0.0;
}

double monopole_pattern(double theta) {
  if (theta >= pi / 2.0 || theta > pi) return 0.0;
  if (theta < 0.0) throw Error("monopole_pattern: theta out of range");
  if (theta < 1e-3) {
    // cos(pi/2 cos t)/sin t = pi t/4 (1 + t^2/12) + O(t^5)
    return pi * theta / 4.0 * (1.0 + theta * theta / 12.0);
  }
  // cos(pi/2 cos t) rewritten as sin(pi sin^2(t/2)) to stay stable near t = 0.
  const double sh = std::sin(theta / 2.0);
  return std::sin(pi * sh * sh) / std::sin(theta);
}

Complex array_factor(const UcaGeometry& geom, const ComplexVector& weights, double theta,
                     double phi) {
  if (weights.size() != geom.n_elements) {
    throw Error("array_factor: weight count must match element count");
  }
  const double k_sin = 2.0 * pi * geom.radius_wavelengths * std::sin(theta);
  Complex af = 0.0;
  for (int n = 0; n < geom.n_elements; ++n) {
    af += weights(n) * std::polar(1.0, k_sin * std::cos(phi - geom.element_angle(n)));
  }
  return af;
}

OverlapMatrix overlap_matrix(const UcaGeometry& geom, int quadrature_order) {
  if (quadrature_order < 32) throw Error("overlap_matrix: quadrature_order must be >= 32");
  const ComplexMatrix coarse = overlap_raw(geom, quadrature_order);
  const ComplexMatrix fine = overlap_raw(geom, 2 * quadrature_order);
  const double scale = fine.real().diagonal().maxCoeff();
  if ((fine - coarse).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw QuadratureNotConverged("overlap_matrix: entries still moving when order doubles");
  }
  if (fine.imag().cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw QuadratureNotConverged("overlap_matrix: imaginary residue above tolerance");
  }
  return OverlapMatrix{fine.real()};
}

SinCosIntegrals sin_cos_integrals(double x) {
  if (!(x > 0.0)) throw Error("sin_cos_integrals: x must be positive");
  if (x <= 4.0) {
    // Power series for Si and Cin.
    double si = 0.0, cin = 0.0;
    const double x2 = x * x;
    double term_si = x;   // x^(2k+1)/(2k+1)!
    double term_ci = 1.0; // x^(2k)/(2k)!
    double sign = 1.0;
    for (int k = 0; k < 60; ++k) {
      si += sign * term_si / (2 * k + 1);
      if (k > 0) cin += -sign * term_ci / (2 * k);
      const double next_ci = term_ci * x2 / ((2 * k + 1) * (2 * k + 2));
      const double next_si = term_si * x2 / ((2 * k + 2) * (2 * k + 3));
      term_ci = next_ci;
      term_si = next_si;
      sign = -sign;
      if (term_si < 1e-18 && term_ci < 1e-18) break;
    }
    return {si, kEulerGamma + std::log(x) - cin};
  }
  // E1(jx) by modified Lentz continued fraction; Ci = -Re, Si = pi/2 + Im.
  const Complex z(0.0, x);
  const double tiny = 1e-290;
  Complex b = z + 1.0;
  Complex c = 1.0 / tiny;
  Complex d = 1.0 / b;
  Complex h = d;
  for (int i = 1; i <= 300; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const Complex del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  h *= std::exp(-z);
  return {pi / 2.0 + h.imag(), -h.real()};
}

Complex cms_self_impedance() {
  const SinCosIntegrals v = sin_cos_integrals(2.0 * pi);
  const double scale = eta0 / (4.0 * pi) / 2.0;  // monopole: half the dipole value
  return {scale * (kEulerGamma + std::log(2.0 * pi) - v.ci), scale * v.si};
}

Complex cms_mutual_impedance(double separation_wavelengths) {
  const double d = separation_wavelengths;
  if (!(d > 0.0)) throw Error("cms_mutual_impedance: separation must be positive");
  const double k = 2.0 * pi;
  const double half = 0.5;  // dipole half: quarter-wave arm mirrored in ground
  const double u0 = k * d;
  const double root = std::sqrt(d * d + half * half);
  const double u1 = k * (root + half);
  const double u2 = k * (root - half);
  const SinCosIntegrals s0 = sin_cos_integrals(u0);
  const SinCosIntegrals s1 = sin_cos_integrals(u1);
  const SinCosIntegrals s2 = sin_cos_integrals(u2);
  const double scale = eta0 / (4.0 * pi) / 2.0;
  return {scale * (2.0 * s0.ci - s1.ci - s2.ci), -scale * (2.0 * s0.si - s1.si - s2.si)};
}

SymmetricArrayModel cms_symmetric_model(const UcaGeometry& geom) {
  const Complex z_in = cms_self_impedance();
  if (geom.n_elements == 1) return {1, z_in, 0.0};
  const double d = geom.element_spacing();
  for (int m = 0; m < geom.n_elements; ++m) {
    for (int n = m + 1; n < geom.n_elements; ++n) {
      if (std::abs(geom.element_distance(m, n) - d) > 1e-12 * d) {
        throw GeometryInvalid(
            "cms_symmetric_model: element distances are not all equal; "
            "use cms_impedance_matrix");
      }
    }
  }
  return {geom.n_elements, z_in, cms_mutual_impedance(d)};
}

ComplexMatrix impedance_matrix(const SymmetricArrayModel& model) {
  const int n = model.n_elements;
  ComplexMatrix z = ComplexMatrix::Constant(n, n, model.z_c);
  z.diagonal().setConstant(model.z_in);
  return z;
}

ComplexMatrix cms_impedance_matrix(const UcaGeometry& geom) {
  const int n = geom.n_elements;
  ComplexMatrix z(n, n);
  const Complex z_self = cms_self_impedance();
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      z(r, c) = r == c ? z_self : cms_mutual_impedance(geom.element_distance(r, c));
    }
  }
  return z;
}

namespace {

MultiportNetwork invert_impedance(const ComplexMatrix& z_a, double freq) {
  Eigen::JacobiSVD<ComplexMatrix> svd(z_a);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 0.0) || sv(0) / sv(sv.size() - 1) > 1e12) {
    throw SingularImpedance("admittance_of: Z_A is singular");
  }
  return make_y(freq, z_a.inverse());
}

}  // namespace

MultiportNetwork admittance_of(const SymmetricArrayModel& model, double freq) {
  return invert_impedance(impedance_matrix(model), freq);
}

MultiportNetwork admittance_of(const ComplexMatrix& z_a, double freq) {
  return invert_impedance(z_a, freq);
}

RingAdmittance ring_entries(const ComplexMatrix& y) {
  return {y(0, 0), y.rows() > 1 ? y(0, 1) : Complex(0.0)};
}

double cms_consistency_error(const ComplexMatrix& z_a, const OverlapMatrix& overlap) {
  if (z_a.rows() != overlap.entries.rows()) {
    throw Error("cms_consistency_error: dimension mismatch");
  }
  const double r_self = z_a(0, 0).real();
  const double rho = r_self / overlap.a_diag();
  // Deviations are measured against the self resistance: off-diagonal
  // resistances cross zero, so per-entry relative error is ill-posed there.
  return (z_a.real() - rho * overlap.entries).cwiseAbs().maxCoeff() / r_self;
}

}  // namespace dmnkit
