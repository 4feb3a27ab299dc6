#include <cmath>

#include "dmnkit/elements.hpp"
#include "dmnkit/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace dmnkit;

TEST_CASE("susceptance frequency laws") {
  const double f0 = 3.6e9;
  const Susceptance cap(0.02, f0);
  CHECK(cap.realization == Realization::Capacitor);
  CHECK(susceptance_at(cap, f0) == 0.02);
  CHECK(susceptance_at(cap, 2.0 * f0) == doctest::Approx(0.04));

  const Susceptance ind(-0.02, f0);
  CHECK(ind.realization == Realization::Inductor);
  CHECK(susceptance_at(ind, 2.0 * f0) == doctest::Approx(-0.01));
}

TEST_CASE("susceptance_at is continuous and monotone in f") {
  const double f0 = 3.6e9;
  const Susceptance cap(0.02, f0);
  const Susceptance ind(-0.02, f0);
  double prev_cap = susceptance_at(cap, 0.5 * f0);
  double prev_ind = susceptance_at(ind, 0.5 * f0);
  for (int i = 1; i <= 100; ++i) {
    const double f = (0.5 + 0.015 * i) * f0;
    const double bc = susceptance_at(cap, f);
    const double bi = susceptance_at(ind, f);
    CHECK(bc > prev_cap);  // capacitor susceptance grows with f
    CHECK(bi > prev_ind);  // inductive (negative) susceptance also grows toward 0
    prev_cap = bc;
    prev_ind = bi;
  }
}

TEST_CASE("open stub admittance") {
  const double f0 = 3.6e9;
  CHECK(std::abs(open_stub_admittance({50.0, pi / 4.0, f0}, f0) - j1 * 0.02) < 1e-15);
  CHECK(std::abs(open_stub_admittance({50.0, 1e-7, f0}, f0)) < 1e-8);
  CHECK_THROWS_AS(open_stub_admittance({50.0, pi / 2.0, f0}, f0), StubResonance);
}

TEST_CASE("open stub against the ABCD open-termination oracle") {
  const double f0 = 3.6e9;
  const TransmissionLine tl{70.0, 1.0, f0};
  const Complex direct = open_stub_admittance(tl, f0);
  CHECK(std::abs(direct - j1 * std::tan(1.0) / 70.0) < 1e-15);
  // Oracle: the same line as a two-port with an open load, Y_in = C/A.
  const TwoPortAbcd m = tl_abcd(tl, f0);
  CHECK(std::abs(direct - m.c / m.a) < 1e-15);
}

TEST_CASE("tl_two_port: full-wave line is the identity up to phase") {
  const double f0 = 3.6e9;
  const MultiportNetwork s = tl_two_port({77.0, 2.0 * pi, f0}, f0, 50.0);
  CHECK(std::abs(std::abs(s.matrix(1, 0)) - 1.0) < 1e-12);
  CHECK(std::abs(s.matrix(1, 0) - Complex(1.0, 0.0)) < 1e-12);  // arg wraps to -2 pi
  CHECK(std::abs(s.matrix(0, 0)) < 1e-12);
}

TEST_CASE("tl_two_port: quarter-wave inverter") {
  const double f0 = 3.6e9;
  const TransmissionLine tl{50.0, pi / 2.0, f0};
  const Complex z_in = tl_abcd(tl, f0).input_impedance(100.0);
  CHECK(std::abs(z_in - Complex(25.0, 0.0)) < 1e-12);
}

TEST_CASE("tl input impedance: ABCD chain vs S composition agree") {
  const double f0 = 3.6e9;
  const TransmissionLine tl{60.0, pi / 3.0, f0};
  const Complex z_load(30.0, 10.0);

  const Complex via_abcd = tl_abcd(tl, f0).input_impedance(z_load);

  const MultiportNetwork s = tl_two_port(tl, f0, 60.0);
  const Complex gamma_load = (z_load - 60.0) / (z_load + 60.0);
  const Complex gamma_in =
      s.matrix(0, 0) +
      s.matrix(0, 1) * gamma_load * s.matrix(1, 0) / (1.0 - s.matrix(1, 1) * gamma_load);
  const Complex via_s = 60.0 * (1.0 + gamma_in) / (1.0 - gamma_in);

  CHECK(std::abs(via_abcd - via_s) < 1e-12 * std::abs(via_abcd));
}

namespace {

double series_equivalence_error(double x_series, double f_ratio) {
  const double f0 = 3.6e9;
  const SeriesReactanceLines lines = quarter_wave_equivalent(x_series, f0);
  const TwoPortAbcd got = quarter_wave_equivalent_abcd(lines, f_ratio * f0);
  const TwoPortAbcd want = series_element_abcd(j1 * x_series);
  return std::max({std::abs(got.a - want.a), std::abs(got.b - want.b),
                   std::abs(got.c - want.c), std::abs(got.d - want.d)});
}

}  // namespace

TEST_CASE("quarter_wave_equivalent is exact at f0 for both signs") {
  CHECK(series_equivalence_error(50.0, 1.0) < 1e-9);
  CHECK(series_equivalence_error(-50.0, 1.0) < 1e-9);
  CHECK(series_equivalence_error(8.0, 1.0) < 1e-9);
  CHECK(series_equivalence_error(-320.0, 1.0) < 1e-9);
}

TEST_CASE("quarter_wave_equivalent holds only at the design frequency") {
  for (double x : {50.0, -50.0}) {
    CHECK(series_equivalence_error(x, 1.05) > 1e-4);
    CHECK(series_equivalence_error(x, 0.95) > 1e-4);
    CHECK(series_equivalence_error(x, 1.10) > 1e-4);
  }
}

TEST_CASE("star_three_port formula values") {
  const MultiportNetwork y = star_three_port(50.0, pi / 4.0);
  const Complex y_s = -j1 / 50.0;                  // tan(pi/4) = 1
  const Complex y_s_prime = -2.0 * j1 / (3.0 * 50.0);
  CHECK(std::abs(y_s_prime - Complex(0.0, -0.0133333333333)) < 1e-10);
  CHECK(std::abs(y.matrix(0, 0) - (y_s - y_s_prime)) < 1e-15);
  CHECK(std::abs(y.matrix(0, 1) - (-y_s_prime)) < 1e-15);
  CHECK(is_reciprocal(y, 1e-15));
}

TEST_CASE("star_three_port excluded angles") {
  CHECK_THROWS_AS(star_three_port(50.0, pi / 2.0), StarResonance);
  CHECK_THROWS_AS(star_three_port(50.0, pi), StarResonance);
}

TEST_CASE("star plus triangle equals the brute-force nodal oracle") {
  const double f0 = 3.6e9;
  const double z_s = 42.0, theta_s = 1.1;
  const double z_t = 95.0, theta_t = 1.4;

  // Library path: closed-form star three-port plus triangle line stamps.
  ComplexMatrix y_tl = star_three_port(z_s, theta_s, f0).matrix;
  const LineYParams t = tl_y_params({z_t, theta_t, f0}, f0);
  for (int i = 0; i < 3; ++i) {
    y_tl(i, i) += 2.0 * t.y11;
    for (int k = 0; k < 3; ++k) {
      if (k != i) y_tl(i, k) += t.y12;
    }
  }

  // Oracle: all six segments stamped and reduced by hand (nodes 0-2 ports,
  // node 3 star center).
  const std::vector<oracles::LineSegment> segments = {
      {z_t, theta_t, 0, 1}, {z_t, theta_t, 1, 2}, {z_t, theta_t, 2, 0},
      {z_s, theta_s, 0, 3}, {z_s, theta_s, 1, 3}, {z_s, theta_s, 2, 3},
  };
  const ComplexMatrix oracle = oracles::nodal_reduce_lines(4, segments, {0, 1, 2});
  CHECK(testing::max_abs_diff(y_tl, oracle) < 1e-10);
}

TEST_CASE("coax impedance") {
  CHECK(coax_impedance(1.5e-3, 2.5e-3, 2.2) == doctest::Approx(20.65).epsilon(1e-3));
  CHECK(coax_impedance(1.0, std::exp(1.0), 1.0) ==
        doctest::Approx(eta0 / (2.0 * pi)).epsilon(1e-12));
  CHECK(coax_impedance(1.0, 1.0 + 1e-12, 1.0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_THROWS_AS(coax_impedance(2.0, 1.0, 1.0), GeometryInvalid);
  CHECK_THROWS_AS(coax_impedance(1.0, 2.0, 0.5), GeometryInvalid);
}

TEST_CASE("lossless elements stay unitary over a sweep") {
  const double f0 = 3.6e9;
  for (double zc : {20.0, 50.0, 120.0}) {
    for (double theta : {0.3, 1.1, 2.6}) {
      const TransmissionLine tl{zc, theta, f0};
      for (int i = 0; i <= 20; ++i) {
        const double f = (0.8 + 0.02 * i) * f0;
        CHECK(is_lossless(tl_two_port(tl, f), 1e-10));
      }
    }
  }
}
