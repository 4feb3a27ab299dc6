// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "dmnkit/netlist.hpp"
#include "dmnkit/network.hpp"
#include "dmnkit/types.hpp"
#include "dmnkit/uca.hpp"

namespace dmnkit {

enum class SignChoice { Plus, Minus };

inline double sign_of(SignChoice s) { return s == SignChoice::Plus ? 1.0 : -1.0; }

/// The two independent signs of the closed-form two-stage solution: the
/// square-root branch shared by the B2/B3 expressions, and the overall sign
/// of B2.
struct TwoStageBranch {
  SignChoice sqrt_sign = SignChoice::Plus;
  SignChoice b2_sign = SignChoice::Plus;
};

inline constexpr std::array<TwoStageBranch, 4> all_two_stage_branches() {
  return {TwoStageBranch{SignChoice::Plus, SignChoice::Plus},
          TwoStageBranch{SignChoice::Plus, SignChoice::Minus},
          TwoStageBranch{SignChoice::Minus, SignChoice::Plus},
          TwoStageBranch{SignChoice::Minus, SignChoice::Minus}};
}

/// Susceptance set of the rotationally symmetric 15-reactance two-stage DMN.
struct TwoStageDesign {
  double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0, b5 = 0.0;  // siemens at f0
  TwoStageBranch branch;
  double f0 = 0.0;
  /// Set when the array is uncoupled (b = 0) and the analytic limit was taken.
  bool degenerate_coupling = false;

  std::array<double, 5> susceptances() const { return {b1, b2, b3, b4, b5}; }
  double max_abs_susceptance() const;
};

/// Diagonal/off-diagonal entries a, b of (Re{Y_A})^-1 for a ring-symmetric
/// admittance with entries alpha (diag) and beta (off-diag).
struct RealPartDecomposition {
  double a = 0.0;
  double b = 0.0;
  /// Feasibility discriminant a^2 + 2ab - 3b^2 of the decoupling condition.
  double discriminant() const { return a * a + 2.0 * a * b - 3.0 * b * b; }
};

RealPartDecomposition real_part_decomposition(Complex alpha, Complex beta);

/// Closed-form two-stage synthesis for a symmetric three-port with admittance
/// entries (alpha, beta). Throws Infeasible (carrying the discriminant) when
/// a^2 + 2ab - 3b^2 < 0; the uncoupled b = 0 case takes the analytic limit
/// and flags the design.
TwoStageDesign synth_two_stage(Complex alpha, Complex beta, double z0, TwoStageBranch branch,
                               double f0);

/// Runs all four sign branches and keeps the one minimizing max_k |B_k|.
TwoStageDesign synth_two_stage_best(Complex alpha, Complex beta, double z0, double f0);

/// Six-port admittance matrix j [[A, B^T], [B, C]] of the design. Ports 0-2
/// are the antenna side, ports 3-5 the decoupled feed side. The second form
/// evaluates the susceptances off-design with their capacitor/inductor laws.
MultiportNetwork two_stage_six_port(const TwoStageDesign& design);
MultiportNetwork two_stage_six_port(const TwoStageDesign& design, double f);

struct TwoStageIdentityReport {
  double xi = 0.0;     // decoupling residual, siemens
  double gamma = 0.0;  // matched-port conductance, siemens
};

/// Recomputes the decoupling invariant xi = B2 B3 a + (B2^2 + B2 B3 + B3^2) b
/// and the port conductance gamma from the closed-form branch expression.
TwoStageIdentityReport verify_two_stage_identities(const TwoStageDesign& design, double a,
                                                   double b, double z0);

/// Root selection for the star-triangle quartic: either the admissible real
/// root minimizing |B_c| or an explicit index into the ascending real roots.
struct RootPolicy {
  enum class Kind { MinAbsBc, Index } kind = Kind::MinAbsBc;
  int index = 0;

  static RootPolicy min_abs_bc() { return {}; }
  static RootPolicy by_index(int i) { return {Kind::Index, i}; }
};

/// Susceptance set of the 12-susceptance star-triangle DMN plus the series
/// augmentation susceptance B_c at each antenna port (absent only in the
/// uncoupled degenerate case).
struct StarTriangleDesign {
  double b_a = 0.0, b_b = 0.0, b_s = 0.0, b_t = 0.0;  // siemens at f0
  std::optional<double> b_c;
  Complex chosen_root;                 // selected quartic root (Im{e})
  std::vector<Complex> quartic_roots;  // all roots, for inspection
  double f0 = 0.0;
};

/// Coefficients (ascending) of the quartic in Im{e} whose real roots make
/// Re{beta} of the augmented array vanish.
std::array<double, 5> star_triangle_quartic(Complex z_in, Complex z_c);

/// Roots of a real-coefficient polynomial (ascending coefficients) via the
/// companion-matrix eigenvalues. Near-zero leading coefficients reduce the
/// degree.
std::vector<Complex> polynomial_roots(std::span<const double> ascending_coeffs);

StarTriangleDesign synth_star_triangle(const SymmetricArrayModel& model, double z0,
                                       RootPolicy policy, double f0);

/// Twelve-susceptance core: A diag 2B_t + B_s + B_b, off-diag -B_t;
/// B = -B_b I; C = (B_a + B_b) I. Ports 0-2 antenna side, 3-5 feed side.
MultiportNetwork star_triangle_six_port(const StarTriangleDesign& design);
MultiportNetwork star_triangle_six_port(const StarTriangleDesign& design, double f);

/// Core six-port with the series B_c elements folded in at the antenna ports;
/// terminating this in the original Z_A yields the matched identity.
MultiportNetwork star_triangle_augmented_six_port(const StarTriangleDesign& design, double f);

struct StarTriangleTlCore {
  double z_t = 0.0;
  double z_s = 0.0;
};

/// Solves the star/triangle line impedances so the six interconnected
/// segments reproduce the core matrix j A (A diag 2B_t + B_s, off-diag -B_t)
/// at the given electrical angles. Throws ResonantAngle at excluded angles
/// and UnrealizableImpedance when a solved impedance leaves [5, 250] ohms.
StarTriangleTlCore star_triangle_tl_core(double b_t, double b_s, double theta_t, double theta_s);

/// Transmission-line realization of the two-stage DMN: every floating
/// susceptance becomes a series-line/stub/series-line sandwich, every
/// grounded susceptance an open stub; 33 pieces, exact at f0.
Netlist two_stage_tl_realization(const TwoStageDesign& design, double f0);

/// Transmission-line realization of the star-triangle DMN: star + triangle
/// core lines, sandwich replacements for B_b (and B_c when present), stubs
/// for B_a. Exact at f0.
Netlist star_triangle_tl_realization(const StarTriangleDesign& design, double f0);

}  // namespace dmnkit
