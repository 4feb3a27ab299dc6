#include <cmath>

#include "dmnkit/errors.hpp"
#include "dmnkit/uca.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace dmnkit;

TEST_CASE("geometry: spacing follows d = r sqrt(2 - 2 cos dphi)") {
  const UcaGeometry g3(3, 0.1);
  CHECK(g3.element_spacing() == doctest::Approx(0.1 * std::sqrt(3.0)).epsilon(1e-14));
  const UcaGeometry g4(4, 0.16);
  CHECK(g4.element_spacing() == doctest::Approx(0.16 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(g4.element_distance(0, 2) == doctest::Approx(0.32).epsilon(1e-14));
  CHECK_THROWS_AS(UcaGeometry(0, 0.1), GeometryInvalid);
  CHECK_THROWS_AS(UcaGeometry(3, -1.0), GeometryInvalid);
}

TEST_CASE("monopole pattern branches") {
  CHECK(monopole_pattern(pi / 2.0 - 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(monopole_pattern(2.0 * pi / 3.0) == 0.0);
  CHECK(monopole_pattern(pi / 2.0) == 0.0);
  // Taylor-limit oracle: C -> pi theta / 4 as theta -> 0.
  CHECK(monopole_pattern(1e-6) == doctest::Approx(pi * 1e-6 / 4.0).epsilon(1e-9));
  CHECK(monopole_pattern(1e-6) == doctest::Approx(7.853981634e-7).epsilon(1e-6));
  CHECK(monopole_pattern(0.0) == 0.0);
  // Continuity across the series branch switch at 1e-3 rad.
  CHECK(monopole_pattern(0.999e-3) == doctest::Approx(monopole_pattern(1.001e-3)).epsilon(1e-5));
}

TEST_CASE("monopole pattern bounded on [0, 1], maximal at the horizon") {
  double max_val = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double theta = pi * i / 2000.0;
    const double c = monopole_pattern(theta);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0 + 1e-12);
    max_val = std::max(max_val, c);
  }
  CHECK(max_val == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("array factor basics and extended-precision oracle") {
  const UcaGeometry geom(3, 0.1);
  ComplexVector w(3);
  w << Complex(0.3, 0.1), Complex(-0.2, 0.7), Complex(0.5, -0.4);

  // theta = 0: all exponents vanish, AF = sum of the weights.
  CHECK(std::abs(array_factor(geom, w, 0.0, 1.234) - w.sum()) < 1e-15);

  ComplexVector e0 = ComplexVector::Zero(3);
  e0(0) = 1.0;
  CHECK(std::abs(std::abs(array_factor(geom, e0, 1.0, 0.3)) - 1.0) < 1e-15);

  ComplexVector uniform = ComplexVector::Constant(3, 1.0);
  const Complex got = array_factor(geom, uniform, pi / 2.0, 0.0);
  const Complex want = oracles::array_factor_longdouble(
      3, 0.1, {Complex(1.0), Complex(1.0), Complex(1.0)}, pi / 2.0, 0.0);
  CHECK(std::abs(got - want) < 1e-13);
}

TEST_CASE("overlap matrix: single element against the brute-force oracle") {
  const UcaGeometry geom(1, 0.1);
  const OverlapMatrix a = overlap_matrix(geom, 128);
  const RealMatrix oracle = oracles::brute_force_overlap(1, 0.1, 2000, 16);
  CHECK(std::abs(a.a_diag() - oracle(0, 0)) < 1e-8);
  // Quarter-wave monopole over infinite ground: D = 1/a11 at the horizon.
  const double d_dbi = 10.0 * std::log10(1.0 / a.a_diag());
  CHECK(d_dbi == doctest::Approx(5.1612).epsilon(1e-4));
}

TEST_CASE("overlap matrix: N = 3 against 4x-resolution brute force") {
  const UcaGeometry geom(3, 0.1);
  const OverlapMatrix a = overlap_matrix(geom, 128);
  const RealMatrix oracle = oracles::brute_force_overlap(3, 0.1, 4000, 512);
  CHECK((a.entries - oracle).cwiseAbs().maxCoeff() < 1e-8);
  // Symmetric positive definite with constant diagonal.
  CHECK((a.entries - a.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.entries(0, 0) == doctest::Approx(a.entries(1, 1)).epsilon(1e-14));
  Eigen::LLT<RealMatrix> llt(a.entries);
  CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("overlap matrix: far-separated elements decorrelate") {
  const UcaGeometry geom(2, 100.0);
  const OverlapMatrix a = overlap_matrix(geom, 2048);
  CHECK(std::abs(a.entries(0, 1)) < 1e-3 * a.a_diag());
}

TEST_CASE("overlap matrix: positive definite over the tested geometry range") {
  for (int n : {2, 3, 4, 8}) {
    for (double r : {0.05, 0.1, 0.25, 0.5}) {
      const OverlapMatrix a = overlap_matrix(UcaGeometry(n, r), 128);
      Eigen::LLT<RealMatrix> llt(a.entries);
      CHECK(llt.info() == Eigen::Success);
    }
  }
  CHECK_THROWS_AS(overlap_matrix(UcaGeometry(3, 0.1), 16), Error);
}

TEST_CASE("sine/cosine integrals against the quadrature oracle") {
  for (double x : {0.3, 1.0, 2.0, 3.9, 4.1, 2.0 * pi, 10.0, 25.0, 80.0}) {
    const SinCosIntegrals v = sin_cos_integrals(x);
    CHECK(v.si == doctest::Approx(oracles::si_oracle(x)).epsilon(1e-11));
    CHECK(v.ci == doctest::Approx(oracles::ci_oracle(x)).epsilon(1e-10));
  }
  // Frozen reference values.
  CHECK(sin_cos_integrals(1.0).si == doctest::Approx(0.9460830703671830).epsilon(1e-13));
  CHECK(sin_cos_integrals(1.0).ci == doctest::Approx(0.3374039229009681).epsilon(1e-13));
}

TEST_CASE("cms self impedance is the thin quarter-wave monopole value") {
  const Complex z = cms_self_impedance();
  CHECK(z.real() == doctest::Approx(36.54).epsilon(2e-3));  // "36.5 ohms"
  // Im part from the Si(2 pi) evaluation.
  const double x_expected = eta0 / (4.0 * pi) * oracles::si_oracle(2.0 * pi) / 2.0;
  CHECK(z.imag() == doctest::Approx(x_expected).epsilon(1e-10));
  CHECK(z.imag() == doctest::Approx(21.26).epsilon(1e-3));
}

TEST_CASE("cms mutual impedance decays and joins the self value") {
  CHECK(std::abs(cms_mutual_impedance(50.0)) < 0.5);
  // Continuity of the d -> 0 limit toward the self impedance.
  CHECK(std::abs(cms_mutual_impedance(1e-5) - cms_self_impedance()) < 1e-2);
}

TEST_CASE("cms consistency: Re{Z} tracks rho * overlap") {
  const UcaGeometry geom(3, 0.1);
  const OverlapMatrix a = overlap_matrix(geom, 128);
  const ComplexMatrix z = cms_impedance_matrix(geom);
  CHECK(cms_consistency_error(z, a) < 1e-6);  // identity holds to quadrature accuracy

  // Spec-level bound on each entry relative to the diagonal scale.
  const double rho = z(0, 0).real() / a.a_diag();
  CHECK(std::abs(z(0, 1).real() - rho * a.entries(0, 1)) < 0.01 * std::abs(z(0, 1).real()));
}

TEST_CASE("cms consistency holds over N and radius") {
  for (int n : {2, 4, 6}) {
    for (double r : {0.08, 0.15, 0.3}) {
      const UcaGeometry geom(n, r);
      CHECK(cms_consistency_error(cms_impedance_matrix(geom), overlap_matrix(geom, 128)) <
            1e-6);
    }
  }
}

TEST_CASE("admittance_of inverts the ring model exactly") {
  SUBCASE("uncoupled real") {
    const SymmetricArrayModel m{3, Complex(50.0, 0.0), Complex(0.0, 0.0)};
    const MultiportNetwork y = admittance_of(m);
    CHECK(testing::max_abs_diff(y.matrix, 0.02 * ComplexMatrix::Identity(3, 3)) < 1e-15);
  }
  SUBCASE("uncoupled complex") {
    const SymmetricArrayModel m{3, Complex(36.5, 20.0), Complex(0.0, 0.0)};
    const auto [alpha, beta] = ring_entries(admittance_of(m).matrix);
    CHECK(std::abs(alpha - 1.0 / Complex(36.5, 20.0)) < 1e-15);
    CHECK(std::abs(beta) < 1e-18);
  }
  SUBCASE("cms ring at the two-stage prototype radius") {
    const SymmetricArrayModel m = cms_symmetric_model(UcaGeometry(3, 0.136));
    const ComplexMatrix z = impedance_matrix(m);
    const ComplexMatrix y = admittance_of(m).matrix;
    CHECK(testing::max_abs_diff(z * y, ComplexMatrix::Identity(3, 3)) < 1e-12);
    // Ring structure of the inverse.
    CHECK(std::abs(y(0, 1) - y(1, 2)) < 1e-15);
    CHECK(std::abs(y(0, 0) - y(2, 2)) < 1e-15);
  }
  SUBCASE("singular impedance") {
    // z_in == z_c makes Z_A rank deficient.
    const SymmetricArrayModel m{3, Complex(30.0, 0.0), Complex(30.0, 0.0)};
    CHECK_THROWS_AS(admittance_of(m), SingularImpedance);
  }
}

TEST_CASE("cms_symmetric_model rejects rings with unequal distances") {
  CHECK_THROWS_AS(cms_symmetric_model(UcaGeometry(4, 0.16)), GeometryInvalid);
  CHECK_NOTHROW(cms_symmetric_model(UcaGeometry(3, 0.152)));
}
