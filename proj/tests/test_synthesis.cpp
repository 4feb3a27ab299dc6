#include <cmath>
#include <random>

#include "dmnkit/elements.hpp"
#include "dmnkit/errors.hpp"
#include "dmnkit/netlist.hpp"
#include "dmnkit/network.hpp"
#include "dmnkit/synthesis.hpp"
#include "dmnkit/uca.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace dmnkit;
using testing::max_abs_diff;

namespace {

constexpr double kF0 = 3.6e9;

ComplexMatrix ring_y(Complex alpha, Complex beta) {
  ComplexMatrix y = ComplexMatrix::Constant(3, 3, beta);
  y.diagonal().setConstant(alpha);
  return y;
}

// Largest relative deviation of the combined feed-port admittance from the
// matched identity (1/z0) I.
double combined_residual(const MultiportNetwork& six_port, const ComplexMatrix& y_a,
                         double z0) {
  const std::array<int, 3> antenna_ports = {0, 1, 2};
  const MultiportNetwork reduced =
      terminate(six_port, make_y(six_port.freq, y_a), antenna_ports);
  return max_abs_diff(reduced.matrix, ComplexMatrix::Identity(3, 3) / z0) * z0;
}

// Eq.-style hand expansion of the reduction, independent of terminate():
// Y = jC + B (Y_A + jA)^-1 B^T with the blocks read off the six-port.
ComplexMatrix reduction_by_hand(const MultiportNetwork& six_port, const ComplexMatrix& y_a) {
  const ComplexMatrix ja = six_port.matrix.topLeftCorner(3, 3);
  const ComplexMatrix jb = six_port.matrix.bottomLeftCorner(3, 3);
  const ComplexMatrix jc = six_port.matrix.bottomRightCorner(3, 3);
  const ComplexMatrix b = (jb / j1).eval();
  return jc + b * (y_a + ja).inverse() * b.transpose();
}

}  // namespace

TEST_CASE("real_part_decomposition structure") {
  const Complex alpha(0.02, 0.004);
  const Complex beta(-0.006, 0.002);
  const RealPartDecomposition rpd = real_part_decomposition(alpha, beta);
  // (Re Y)^-1 must reproduce the ring inverse entrywise.
  const ComplexMatrix inv = ring_y(alpha, beta).real().cast<Complex>().inverse();
  CHECK(rpd.a == doctest::Approx(inv(0, 0).real()).epsilon(1e-14));
  CHECK(rpd.b == doctest::Approx(inv(0, 1).real()).epsilon(1e-14));
  CHECK(rpd.a > 0.0);
}

TEST_CASE("synth_two_stage: uncoupled matched array takes the analytic limit") {
  const Complex alpha(0.02, 0.0);
  const TwoStageDesign d =
      synth_two_stage(alpha, 0.0, 50.0, {SignChoice::Plus, SignChoice::Plus}, kF0);
  CHECK(d.degenerate_coupling);
  CHECK(d.b1 == 0.0);
  CHECK(d.b2 == 0.0);
  // a = 1/Re{alpha} = 50 here, so B3 = -1/sqrt(z0 a) = -0.02.
  CHECK(d.b3 == doctest::Approx(-0.02).epsilon(1e-14));
  CHECK(combined_residual(two_stage_six_port(d), ring_y(alpha, 0.0), 50.0) < 1e-12);
}

TEST_CASE("synth_two_stage: CMS prototype radius, all four branches") {
  const SymmetricArrayModel model = cms_symmetric_model(UcaGeometry(3, 0.136));
  const ComplexMatrix y_a = admittance_of(model).matrix;
  const auto [alpha, beta] = ring_entries(y_a);
  for (const TwoStageBranch& branch : all_two_stage_branches()) {
    const TwoStageDesign d = synth_two_stage(alpha, beta, 50.0, branch, kF0);
    CHECK(combined_residual(two_stage_six_port(d), y_a, 50.0) < 1e-9);
  }
}

TEST_CASE("synth_two_stage: infeasibility detected exactly at the discriminant sign") {
  std::mt19937_64 rng(5);
  int infeasible_seen = 0;
  for (int i = 0; i < 200; ++i) {
    const bool want_infeasible = (i % 2) == 1;
    const testing::RingDraw draw =
        want_infeasible ? testing::random_infeasible_ring(rng) : testing::random_feasible_ring(rng);

    // Independent evaluation of the feasibility condition.
    const double p = draw.alpha.real(), q = draw.beta.real();
    const double den = (p - q) * (p + 2.0 * q);
    const double a = (p + q) / den, b = -q / den;
    const double disc = a * a + 2.0 * a * b - 3.0 * b * b;

    if (disc < 0.0) {
      ++infeasible_seen;
      try {
        synth_two_stage(draw.alpha, draw.beta, 50.0, {}, kF0);
        FAIL("expected Infeasible");
      } catch (const Infeasible& e) {
        CHECK(e.deficit() == doctest::Approx(disc).epsilon(1e-12));
      }
    } else {
      CHECK_NOTHROW(synth_two_stage(draw.alpha, draw.beta, 50.0, {}, kF0));
    }
  }
  CHECK(infeasible_seen == 100);  // every intended-infeasible draw really was
}

TEST_CASE("two_stage_six_port structure") {
  SUBCASE("all susceptances zero give the zero matrix") {
    TwoStageDesign d;
    d.f0 = kF0;
    CHECK(two_stage_six_port(d).matrix.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("sub-block pattern") {
    TwoStageDesign d;
    d.b1 = 0.002;
    d.b2 = 0.01;
    d.b3 = 0.01;  // B2 = B3: coupling block circulant with two equal entries
    d.b4 = -0.004;
    d.b5 = 0.006;
    d.f0 = kF0;
    const ComplexMatrix y = two_stage_six_port(d).matrix;
    const double diag_a = 2 * d.b1 + d.b2 + d.b3 + d.b4;
    CHECK(std::abs(y(0, 0) - j1 * diag_a) < 1e-18);
    CHECK(std::abs(y(0, 1) - j1 * -d.b1) < 1e-18);
    CHECK(std::abs(y(3, 0) - j1 * -d.b2) < 1e-18);  // B(0,0)
    CHECK(std::abs(y(3, 2) - j1 * -d.b3) < 1e-18);  // B(0,2)
    CHECK(std::abs(y(3, 1)) == 0.0);                // B(0,1)
    CHECK(std::abs(y(3, 3) - j1 * (d.b2 + d.b3 + d.b5)) < 1e-18);
    CHECK(std::abs(y(4, 1) - y(3, 0)) == 0.0);      // cyclic
  }
  SUBCASE("synthesized design is lossless and reciprocal") {
    const SymmetricArrayModel model = cms_symmetric_model(UcaGeometry(3, 0.136));
    const auto [alpha, beta] = ring_entries(admittance_of(model).matrix);
    const TwoStageDesign d = synth_two_stage_best(alpha, beta, 50.0, kF0);
    const MultiportNetwork s = convert(two_stage_six_port(d), Repr::S, 50.0);
    CHECK(is_lossless(s, 1e-12));
    CHECK(is_reciprocal(s, 1e-12));
  }
}

TEST_CASE("verify_two_stage_identities") {
  const SymmetricArrayModel model = cms_symmetric_model(UcaGeometry(3, 0.136));
  const auto [alpha, beta] = ring_entries(admittance_of(model).matrix);
  const RealPartDecomposition rpd = real_part_decomposition(alpha, beta);
  const TwoStageDesign d =
      synth_two_stage(alpha, beta, 50.0, {SignChoice::Plus, SignChoice::Plus}, kF0);

  SUBCASE("synthesized design satisfies both identities") {
    const TwoStageIdentityReport r = verify_two_stage_identities(d, rpd.a, rpd.b, 50.0);
    CHECK(std::abs(r.xi) < 1e-12 / 50.0);
    CHECK(std::abs(r.gamma * 50.0 - 1.0) < 1e-12);
  }
  SUBCASE("perturbing B3 breaks decoupling") {
    TwoStageDesign bad = d;
    bad.b3 *= 1.01;
    const TwoStageIdentityReport r = verify_two_stage_identities(bad, rpd.a, rpd.b, 50.0);
    CHECK(std::abs(r.xi) > 1e-8);
  }
  SUBCASE("perturbing B2 with B3 re-solved stays decoupled but mismatched") {
    TwoStageDesign bad = d;
    bad.b2 *= 1.01;
    const double root = std::sqrt(rpd.discriminant());
    bad.b3 = -bad.b2 * (rpd.a + rpd.b + root) / (2.0 * rpd.b);
    const TwoStageIdentityReport r = verify_two_stage_identities(bad, rpd.a, rpd.b, 50.0);
    CHECK(std::abs(r.xi) < 1e-12 / 50.0);
    CHECK(std::abs(r.gamma * 50.0 - 1.0) > 1e-3);
  }
}

TEST_CASE("end-to-end identity: random feasible draws, every branch") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 25; ++i) {
    const testing::RingDraw draw = testing::random_feasible_ring(rng);
    const ComplexMatrix y_a = ring_y(draw.alpha, draw.beta);
    const RealPartDecomposition rpd = real_part_decomposition(draw.alpha, draw.beta);
    for (const TwoStageBranch& branch : all_two_stage_branches()) {
      const TwoStageDesign d = synth_two_stage(draw.alpha, draw.beta, 50.0, branch, kF0);
      CHECK(combined_residual(two_stage_six_port(d), y_a, 50.0) < 1e-9);
      const TwoStageIdentityReport r = verify_two_stage_identities(d, rpd.a, rpd.b, 50.0);
      CHECK(std::abs(r.xi) < 1e-12 / 50.0);
      CHECK(std::abs(r.gamma * 50.0 - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("terminate matches the Eq.-style hand expansion on six-ports") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 20; ++i) {
    const testing::RingDraw draw = testing::random_feasible_ring(rng);
    const TwoStageDesign d = synth_two_stage_best(draw.alpha, draw.beta, 50.0, kF0);
    const MultiportNetwork six = two_stage_six_port(d);
    const ComplexMatrix y_a = ring_y(draw.alpha, draw.beta);
    const std::array<int, 3> idx = {0, 1, 2};
    const ComplexMatrix via_terminate = terminate(six, make_y(kF0, y_a), idx).matrix;
    CHECK(max_abs_diff(via_terminate, reduction_by_hand(six, y_a)) < 1e-12);
  }
}

TEST_CASE("polynomial_roots: factored quartic") {
  // (x^2 - 1)(x^2 + 1) = x^4 - 1.
  const std::array<double, 5> coeffs = {-1.0, 0.0, 0.0, 0.0, 1.0};
  const std::vector<Complex> roots = polynomial_roots(coeffs);
  REQUIRE(roots.size() == 4);
  std::vector<double> reals;
  int complex_count = 0;
  for (Complex r : roots) {
    if (std::abs(r.imag()) < 1e-9 * (1.0 + std::abs(r.real()))) {
      reals.push_back(r.real());
    } else {
      ++complex_count;
    }
  }
  REQUIRE(reals.size() == 2);
  CHECK(complex_count == 2);
  CHECK(reals[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(reals[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("star-triangle quartic: Vieta reconstruction") {
  const SymmetricArrayModel model = cms_symmetric_model(UcaGeometry(3, 0.152));
  const std::array<double, 5> coeffs = star_triangle_quartic(model.z_in, model.z_c);
  const std::vector<Complex> roots = polynomial_roots(coeffs);
  REQUIRE(roots.size() == 4);

  // Re-expand lead * prod (t - root_i) and compare coefficient by coefficient.
  std::vector<Complex> poly = {1.0};
  for (Complex r : roots) {
    std::vector<Complex> next(poly.size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] += poly[i];
      next[i] -= r * poly[i];
    }
    poly = next;
  }
  double scale = 0.0;
  for (double c : coeffs) scale = std::max(scale, std::abs(c));
  for (int k = 0; k <= 4; ++k) {
    CHECK(std::abs(coeffs[4] * poly[k] - coeffs[k]) < 1e-9 * scale);
  }
}

TEST_CASE("synth_star_triangle: uncoupled degenerate path") {
  const SymmetricArrayModel model{3, Complex(40.0, 15.0), Complex(0.0, 0.0)};
  const StarTriangleDesign d = synth_star_triangle(model, 50.0, RootPolicy::min_abs_bc(), kF0);
  CHECK_FALSE(d.b_c.has_value());
  CHECK(d.b_t == 0.0);
  CHECK(d.b_a == doctest::Approx(-d.b_b));
  const ComplexMatrix y_a = impedance_matrix(model).inverse();
  CHECK(combined_residual(star_triangle_augmented_six_port(d, kF0), y_a, 50.0) < 1e-12);
}

TEST_CASE("synth_star_triangle: CMS prototype radius end to end") {
  const SymmetricArrayModel model = cms_symmetric_model(UcaGeometry(3, 0.152));
  const ComplexMatrix y_a = impedance_matrix(model).inverse();
  const StarTriangleDesign d = synth_star_triangle(model, 50.0, RootPolicy::min_abs_bc(), kF0);
  REQUIRE(d.b_c.has_value());
  CHECK(combined_residual(star_triangle_augmented_six_port(d, kF0), y_a, 50.0) < 1e-9);

  // Both admissible roots must work; min-|B_c| must actually minimize.
  const StarTriangleDesign d0 = synth_star_triangle(model, 50.0, RootPolicy::by_index(0), kF0);
  const StarTriangleDesign d1 = synth_star_triangle(model, 50.0, RootPolicy::by_index(1), kF0);
  CHECK(combined_residual(star_triangle_augmented_six_port(d0, kF0), y_a, 50.0) < 1e-9);
  CHECK(combined_residual(star_triangle_augmented_six_port(d1, kF0), y_a, 50.0) < 1e-9);
  CHECK(std::abs(*d.b_c) <=
        std::min(std::abs(*d0.b_c), std::abs(*d1.b_c)) + 1e-18);
  CHECK_THROWS_AS(synth_star_triangle(model, 50.0, RootPolicy::by_index(5), kF0), Error);
}

TEST_CASE("synth_star_triangle: no real root raises") {
  // Unphysical on purpose: strong real coupling with a tiny self resistance
  // pushes both physical roots into the complex plane.
  const SymmetricArrayModel model{3, Complex(1.0, 5.0), Complex(30.0, 0.0)};
  CHECK_THROWS_AS(synth_star_triangle(model, 50.0, RootPolicy::min_abs_bc(), kF0), NoRealRoot);
}

TEST_CASE("synth_star_triangle: degenerate roots are skipped") {
  // Tune Im{z_c} so the unaugmented array already satisfies Re{beta} = 0;
  // t = Im{z_in} is then a quartic root and must be passed over.
  const Complex z_in(36.5, 21.3);
  const double c_r = 10.0;
  auto re_beta_num = [&](double c_i) {
    const Complex c(c_r, c_i);
    const Complex d = (z_in - c) * (z_in + 2.0 * c);
    return (c * std::conj(d)).real();
  };
  double lo = -25.0, hi = -5.0;
  REQUIRE(re_beta_num(lo) * re_beta_num(hi) < 0.0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (re_beta_num(mid) * re_beta_num(lo) > 0.0 ? lo : hi) = mid;
  }
  const SymmetricArrayModel model{3, z_in, Complex(c_r, 0.5 * (lo + hi))};

  const StarTriangleDesign d = synth_star_triangle(model, 50.0, RootPolicy::min_abs_bc(), kF0);
  REQUIRE(d.b_c.has_value());
  CHECK(std::abs(d.chosen_root.real() - z_in.imag()) > 1e-6);
  const ComplexMatrix y_a = impedance_matrix(model).inverse();
  CHECK(combined_residual(star_triangle_augmented_six_port(d, kF0), y_a, 50.0) < 1e-9);
}

TEST_CASE("star_triangle_six_port structure") {
  SUBCASE("all zeros") {
    StarTriangleDesign d;
    d.f0 = kF0;
    CHECK(star_triangle_six_port(d).matrix.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("B_a = -B_b forces C = 0") {
    StarTriangleDesign d;
    d.b_b = 0.013;
    d.b_a = -0.013;
    d.b_t = 0.004;
    d.b_s = -0.02;
    d.f0 = kF0;
    const ComplexMatrix y = star_triangle_six_port(d).matrix;
    CHECK(y.bottomRightCorner(3, 3).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(y(0, 0) - j1 * (2 * d.b_t + d.b_s + d.b_b)) < 1e-18);
    CHECK(std::abs(y(0, 1) + j1 * d.b_t) < 1e-18);
    CHECK(std::abs(y(3, 0) + j1 * d.b_b) < 1e-18);
  }
  SUBCASE("synthesized design is lossless and reciprocal") {
    const SymmetricArrayModel model = cms_symmetric_model(UcaGeometry(3, 0.152));
    const StarTriangleDesign d =
        synth_star_triangle(model, 50.0, RootPolicy::min_abs_bc(), kF0);
    const MultiportNetwork s = convert(star_triangle_six_port(d), Repr::S, 50.0);
    CHECK(is_lossless(s, 1e-12));
    CHECK(is_reciprocal(s, 1e-12));
    const MultiportNetwork s_aug =
        convert(star_triangle_augmented_six_port(d, kF0), Repr::S, 50.0);
    CHECK(is_lossless(s_aug, 1e-12));
    CHECK(is_reciprocal(s_aug, 1e-12));
  }
}

TEST_CASE("star-triangle end-to-end on random feasible draws") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 25; ++i) {
    // Ring impedance model with passive Re part and moderate coupling.
    const double r_in = 20.0 + 40.0 * u(rng);
    const double x_in = -20.0 + 50.0 * u(rng);
    const double r_c = (0.2 + 0.55 * u(rng)) * r_in;
    const double x_c = -20.0 + 30.0 * u(rng);
    const SymmetricArrayModel model{3, Complex(r_in, x_in), Complex(r_c, x_c)};
    const ComplexMatrix z_a = impedance_matrix(model);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(z_a.real());
    if (es.eigenvalues().minCoeff() <= 1e-6) continue;  // keep draws passive

    StarTriangleDesign d;
    try {
      d = synth_star_triangle(model, 50.0, RootPolicy::min_abs_bc(), kF0);
    } catch (const NoRealRoot&) {
      continue;
    }
    CHECK(combined_residual(star_triangle_augmented_six_port(d, kF0), z_a.inverse(), 50.0) <
          1e-9);
  }
}

TEST_CASE("star_triangle_tl_core: plug-back against formulas and nodal oracle") {
  const double b_t = -0.00296;
  const double b_s = -0.0157;
  const double theta = 0.45 * pi;
  const StarTriangleTlCore core = star_triangle_tl_core(b_t, b_s, theta, theta);

  ComplexMatrix target = ComplexMatrix::Constant(3, 3, -j1 * b_t);
  target.diagonal().setConstant(j1 * (2.0 * b_t + b_s));

  const std::vector<oracles::LineSegment> segments = {
      {core.z_t, theta, 0, 1}, {core.z_t, theta, 1, 2}, {core.z_t, theta, 2, 0},
      {core.z_s, theta, 0, 3}, {core.z_s, theta, 1, 3}, {core.z_s, theta, 2, 3},
  };
  const ComplexMatrix assembled = oracles::nodal_reduce_lines(4, segments, {0, 1, 2});
  CHECK(max_abs_diff(assembled, target) < 1e-10);
}

TEST_CASE("star_triangle_tl_core: decoupled target and resonant angles") {
  SUBCASE("B_t = 0 needs an obtuse star angle and kills the off-diagonals") {
    const StarTriangleTlCore core = star_triangle_tl_core(0.0, -0.012, 0.45 * pi, 0.62 * pi);
    const std::vector<oracles::LineSegment> segments = {
        {core.z_t, 0.45 * pi, 0, 1}, {core.z_t, 0.45 * pi, 1, 2}, {core.z_t, 0.45 * pi, 2, 0},
        {core.z_s, 0.62 * pi, 0, 3}, {core.z_s, 0.62 * pi, 1, 3}, {core.z_s, 0.62 * pi, 2, 3},
    };
    const ComplexMatrix y = oracles::nodal_reduce_lines(4, segments, {0, 1, 2});
    CHECK(std::abs(y(0, 1)) < 1e-12);
    CHECK(std::abs(y(0, 0) - j1 * -0.012) < 1e-12);
  }
  SUBCASE("excluded angles raise") {
    CHECK_THROWS_AS(star_triangle_tl_core(0.01, -0.01, 0.45 * pi, pi / 2.0), ResonantAngle);
    CHECK_THROWS_AS(star_triangle_tl_core(0.0, -0.012, 0.45 * pi, 0.45 * pi),
                    UnrealizableImpedance);
  }
}

TEST_CASE("two_stage_tl_realization: 33 segments, exact at f0 only") {
  TwoStageDesign d;
  d.b1 = d.b2 = d.b3 = d.b4 = d.b5 = 0.01;
  d.f0 = kF0;
  const Netlist nl = two_stage_tl_realization(d, kF0);
  CHECK(nl.n_segments() == 33);

  const ComplexMatrix lumped = two_stage_six_port(d).matrix;
  CHECK(max_abs_diff(netlist_n_port(nl, kF0).matrix, lumped) < 1e-8);
  CHECK(max_abs_diff(netlist_n_port(nl, 0.95 * kF0).matrix,
                     two_stage_six_port(d, 0.95 * kF0).matrix) > 1e-4);
  CHECK(max_abs_diff(netlist_n_port(nl, 1.05 * kF0).matrix,
                     two_stage_six_port(d, 1.05 * kF0).matrix) > 1e-4);
}

TEST_CASE("two_stage_tl_realization: synthesized design stays matched") {
  const SymmetricArrayModel model = cms_symmetric_model(UcaGeometry(3, 0.136));
  const ComplexMatrix y_a = admittance_of(model).matrix;
  const auto [alpha, beta] = ring_entries(y_a);
  const TwoStageDesign d = synth_two_stage_best(alpha, beta, 50.0, kF0);
  const Netlist nl = two_stage_tl_realization(d, kF0);
  CHECK(nl.n_segments() == 33);
  CHECK(max_abs_diff(netlist_n_port(nl, kF0).matrix, two_stage_six_port(d).matrix) < 1e-8);
  CHECK(combined_residual(netlist_n_port(nl, kF0), y_a, 50.0) < 1e-7);
}

TEST_CASE("shunt stub realizes its susceptance") {
  const TransmissionLine stub = shunt_susceptance_stub(0.02, kF0);
  CHECK(std::abs(open_stub_admittance(stub, kF0) - j1 * 0.02) < 1e-15);
  const TransmissionLine neg = shunt_susceptance_stub(-0.013, kF0);
  CHECK(std::abs(open_stub_admittance(neg, kF0) - (-j1 * 0.013)) < 1e-15);
}

TEST_CASE("star_triangle_tl_realization matches the augmented six-port at f0") {
  const SymmetricArrayModel model = cms_symmetric_model(UcaGeometry(3, 0.152));
  const StarTriangleDesign d = synth_star_triangle(model, 50.0, RootPolicy::min_abs_bc(), kF0);
  const Netlist nl = star_triangle_tl_realization(d, kF0);
  const ComplexMatrix want = star_triangle_augmented_six_port(d, kF0).matrix;
  CHECK(max_abs_diff(netlist_n_port(nl, kF0).matrix, want) < 1e-8);

  const ComplexMatrix y_a = impedance_matrix(model).inverse();
  CHECK(combined_residual(netlist_n_port(nl, kF0), y_a, 50.0) < 1e-7);
}
