// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#include "dmnkit/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dmnkit/elements.hpp"
#include "dmnkit/errors.hpp"
#include "dmnkit/nodal.hpp"

namespace dmnkit {

namespace {

// Susceptances below this are treated as absent wires in TL realizations.
constexpr double kNullSusceptance = 1e-12;

// Relative |b/a| below which the uncoupled analytic limit is taken.
constexpr double kDegenerateCoupling = 1e-13;

ComplexMatrix ring_matrix(int n, Complex diag, Complex off) {
  ComplexMatrix m = ComplexMatrix::Constant(n, n, off);
  m.diagonal().setConstant(diag);
  return m;
}

}  // namespace

double TwoStageDesign::max_abs_susceptance() const {
  double m = 0.0;
  for (double b : susceptances()) m = std::max(m, std::abs(b));
  return m;
}

RealPartDecomposition real_part_decomposition(Complex alpha, Complex beta) {
  const double p = alpha.real();
  const double q = beta.real();
  const double den = (p - q) * (p + 2.0 * q);
  if (!(p - q > 0.0) || !(p + 2.0 * q > 0.0)) {
    throw Error("real_part_decomposition: Re{Y_A} is not positive definite");
  }
  return {(p + q) / den, -q / den};
}

TwoStageDesign synth_two_stage(Complex alpha, Complex beta, double z0, TwoStageBranch branch,
                               double f0) {
  if (!(z0 > 0.0)) throw Error("synth_two_stage: z0 must be positive");
  const RealPartDecomposition rpd = real_part_decomposition(alpha, beta);
  const double a = rpd.a;
  const double b = rpd.b;
  const double disc = rpd.discriminant();
  if (disc < 0.0) {
    std::ostringstream msg;
    msg << "synth_two_stage: decoupling condition a^2 + 2ab - 3b^2 >= 0 violated (deficit "
        << disc << ")";
    throw Infeasible(msg.str(), disc);
  }

  TwoStageDesign design;
  design.branch = branch;
  design.f0 = f0;
  design.b1 = beta.imag();
  const double sum_b234 = -(alpha.imag() + 2.0 * beta.imag());
  const double s1 = sign_of(branch.sqrt_sign);
  const double s2 = sign_of(branch.b2_sign);

  if (std::abs(b) < kDegenerateCoupling * a) {
    // Uncoupled array: the b -> 0 limit leaves a single matching susceptance
    // on one side of the branch pair.
    design.degenerate_coupling = true;
    const double match = 1.0 / std::sqrt(a * z0);
    if (branch.sqrt_sign == SignChoice::Plus) {
      design.b2 = 0.0;
      design.b3 = -s2 * match;
    } else {
      design.b2 = s2 * match;
      design.b3 = 0.0;
    }
  } else {
    const double root = std::sqrt(disc);
    const double inner = a + b + s1 * root;
    const double factor = a * a + a * b - 2.0 * b * b;
    if (!(inner > 0.0) || !(factor > 0.0)) {
      throw Error("synth_two_stage: branch expression not positive; array not passive");
    }
    design.b2 = s2 * std::sqrt(2.0 * b * b / (z0 * factor * inner));
    design.b3 = -design.b2 * inner / (2.0 * b);
  }
  design.b4 = sum_b234 - design.b2 - design.b3;
  design.b5 = -design.b2 - design.b3;
  return design;
}

TwoStageDesign synth_two_stage_best(Complex alpha, Complex beta, double z0, double f0) {
  TwoStageDesign best;
  bool have = false;
  for (const TwoStageBranch& branch : all_two_stage_branches()) {
    const TwoStageDesign candidate = synth_two_stage(alpha, beta, z0, branch, f0);
    if (!have || candidate.max_abs_susceptance() < best.max_abs_susceptance()) {
      best = candidate;
      have = true;
    }
  }
  return best;
}

MultiportNetwork two_stage_six_port(const TwoStageDesign& design) {
  return two_stage_six_port(design, design.f0);
}

MultiportNetwork two_stage_six_port(const TwoStageDesign& design, double f) {
  const double b1 = susceptance_at(Susceptance(design.b1, design.f0), f);
  const double b2 = susceptance_at(Susceptance(design.b2, design.f0), f);
  const double b3 = susceptance_at(Susceptance(design.b3, design.f0), f);
  const double b4 = susceptance_at(Susceptance(design.b4, design.f0), f);
  const double b5 = susceptance_at(Susceptance(design.b5, design.f0), f);

  RealMatrix a = ring_matrix(3, 2.0 * b1 + b2 + b3 + b4, -b1).real();
  RealMatrix bm(3, 3);
  bm << -b2, 0.0, -b3,
        -b3, -b2, 0.0,
        0.0, -b3, -b2;
  RealMatrix c = RealMatrix::Identity(3, 3) * (b2 + b3 + b5);

  ComplexMatrix y = ComplexMatrix::Zero(6, 6);
  y.topLeftCorner(3, 3) = j1 * a;
  y.topRightCorner(3, 3) = j1 * bm.transpose();
  y.bottomLeftCorner(3, 3) = j1 * bm;
  y.bottomRightCorner(3, 3) = j1 * c;
  return make_y(f, std::move(y));
}

TwoStageIdentityReport verify_two_stage_identities(const TwoStageDesign& design, double a,
                                                   double b, double z0) {
  TwoStageIdentityReport report;
  const double b2 = design.b2;
  const double b3 = design.b3;
  report.xi = b2 * b3 * a + (b2 * b2 + b2 * b3 + b3 * b3) * b;
  if (std::abs(b) < kDegenerateCoupling * a) {
    report.gamma = a * (b2 * b2 + b3 * b3) + 2.0 * b * b2 * b3;
  } else {
    const double s1 = sign_of(design.branch.sqrt_sign);
    const double disc = a * a + 2.0 * a * b - 3.0 * b * b;
    report.gamma = b2 * b2 * (a * a + a * b - 2.0 * b * b) *
                   (a + b + s1 * std::sqrt(std::max(disc, 0.0))) / (2.0 * b * b);
  }
  return report;
}

std::array<double, 5> star_triangle_quartic(Complex z_in, Complex z_c) {
  // Re{beta} = 0 with beta = c(c - e)/(e^3 + 2c^3 - 3c^2 e), e = Re{z_in} + jt.
  // The numerator is linear and the denominator cubic in t, so clearing the
  // modulus gives a real quartic; the cancelled |e - c|^2 factor contributes
  // the complex-conjugate root pair.
  const double er = z_in.real();
  const Complex c = z_c;
  const std::array<Complex, 2> num = {c * c - c * er, -j1 * c};
  const std::array<Complex, 4> den = {er * er * er - 3.0 * c * c * er + 2.0 * c * c * c,
                                      j1 * (3.0 * er * er - 3.0 * c * c), Complex(-3.0 * er),
                                      -j1};
  std::array<double, 5> coeffs{};
  for (std::size_t i = 0; i < num.size(); ++i) {
    for (std::size_t m = 0; m < den.size(); ++m) {
      coeffs[i + m] += (num[i] * std::conj(den[m])).real();
    }
  }
  return coeffs;
}

std::vector<Complex> polynomial_roots(std::span<const double> ascending_coeffs) {
  std::vector<double> c(ascending_coeffs.begin(), ascending_coeffs.end());
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) throw Error("polynomial_roots: zero polynomial");
  while (c.size() > 1 && std::abs(c.back()) < 1e-12 * scale) c.pop_back();
  const int degree = static_cast<int>(c.size()) - 1;
  if (degree < 1) return {};

  RealMatrix companion = RealMatrix::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -c[i] / c[degree];
  Eigen::EigenSolver<RealMatrix> solver(companion);
  std::vector<Complex> roots(degree);
  for (int i = 0; i < degree; ++i) roots[i] = solver.eigenvalues()(i);
  std::sort(roots.begin(), roots.end(), [](Complex l, Complex r) {
    return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
  });
  return roots;
}

StarTriangleDesign synth_star_triangle(const SymmetricArrayModel& model, double z0,
                                       RootPolicy policy, double f0) {
  if (model.n_elements != 3) {
    throw Error("synth_star_triangle: the star-triangle DMN is a three-port design");
  }
  if (!(z0 > 0.0)) throw Error("synth_star_triangle: z0 must be positive");

  StarTriangleDesign design;
  design.f0 = f0;

  Complex alpha, beta;
  if (std::abs(model.z_c) < 1e-15 * std::abs(model.z_in)) {
    // Uncoupled array: Re{beta} vanishes for every B_c, so no series element
    // is needed and the network collapses to a matching ladder.
    design.b_c.reset();
    design.chosen_root = Complex(model.z_in.imag(), 0.0);
    alpha = 1.0 / model.z_in;
    beta = 0.0;
  } else {
    const std::array<double, 5> quartic = star_triangle_quartic(model.z_in, model.z_c);
    design.quartic_roots = polynomial_roots(quartic);

    std::vector<double> real_roots;
    for (Complex r : design.quartic_roots) {
      if (std::abs(r.imag()) < 1e-9 * (1.0 + std::abs(r.real()))) {
        real_roots.push_back(r.real());
      }
    }
    std::sort(real_roots.begin(), real_roots.end());
    if (real_roots.empty()) {
      std::ostringstream msg;
      msg << "synth_star_triangle: quartic has no real root; roots:";
      for (Complex r : design.quartic_roots) msg << " (" << r.real() << "," << r.imag() << ")";
      throw NoRealRoot(msg.str());
    }

    std::vector<double> admissible;
    for (double t : real_roots) {
      if (std::abs(model.z_in.imag() - t) > 1e-12 * (1.0 + std::abs(model.z_in.imag()))) {
        admissible.push_back(t);
      }
    }
    if (admissible.empty()) {
      std::ostringstream msg;
      msg << "synth_star_triangle: every real root makes B_c infinite; roots:";
      for (double t : real_roots) msg << " " << t;
      throw AllRootsDegenerate(msg.str());
    }

    double chosen = admissible.front();
    if (policy.kind == RootPolicy::Kind::Index) {
      if (policy.index < 0 || policy.index >= static_cast<int>(admissible.size())) {
        throw Error("synth_star_triangle: root index out of range");
      }
      chosen = admissible[policy.index];
    } else {
      double best_bc = std::numeric_limits<double>::infinity();
      for (double t : admissible) {
        const double bc = std::abs(1.0 / (model.z_in.imag() - t));
        if (bc < best_bc) {
          best_bc = bc;
          chosen = t;
        }
      }
    }

    design.chosen_root = Complex(chosen, 0.0);
    design.b_c = 1.0 / (model.z_in.imag() - chosen);
    const Complex e(model.z_in.real(), chosen);
    const Complex c = model.z_c;
    const Complex den = (e - c) * (e + 2.0 * c);
    alpha = (e + c) / den;
    beta = -c / den;
  }

  if (!(alpha.real() > 0.0)) {
    throw Error("synth_star_triangle: augmented array has non-positive port conductance");
  }
  design.b_t = beta.imag();
  design.b_b = std::sqrt(alpha.real() / z0);
  design.b_s = -(alpha.imag() + 2.0 * beta.imag()) - design.b_b;
  design.b_a = -design.b_b;
  return design;
}

MultiportNetwork star_triangle_six_port(const StarTriangleDesign& design) {
  return star_triangle_six_port(design, design.f0);
}

MultiportNetwork star_triangle_six_port(const StarTriangleDesign& design, double f) {
  const double bt = susceptance_at(Susceptance(design.b_t, design.f0), f);
  const double bs = susceptance_at(Susceptance(design.b_s, design.f0), f);
  const double bb = susceptance_at(Susceptance(design.b_b, design.f0), f);
  const double ba = susceptance_at(Susceptance(design.b_a, design.f0), f);

  ComplexMatrix y = ComplexMatrix::Zero(6, 6);
  y.topLeftCorner(3, 3) = j1 * ring_matrix(3, 2.0 * bt + bs + bb, -bt).real();
  y.topRightCorner(3, 3) = -j1 * bb * RealMatrix::Identity(3, 3);
  y.bottomLeftCorner(3, 3) = -j1 * bb * RealMatrix::Identity(3, 3);
  y.bottomRightCorner(3, 3) = j1 * (ba + bb) * RealMatrix::Identity(3, 3);
  return make_y(f, std::move(y));
}

MultiportNetwork star_triangle_augmented_six_port(const StarTriangleDesign& design, double f) {
  const MultiportNetwork core = star_triangle_six_port(design, f);
  if (!design.b_c) return core;

  const double bc = susceptance_at(Susceptance(*design.b_c, design.f0), f);
  NodalNetwork nodes(9);  // 0-2 antenna terminals, 3-5 feed ports, 6-8 core side
  const std::array<int, 6> core_nodes = {6, 7, 8, 3, 4, 5};
  nodes.add_network(core, core_nodes);
  for (int i = 0; i < 3; ++i) nodes.add_branch(i, 6 + i, j1 * bc);
  const std::array<int, 6> external = {0, 1, 2, 3, 4, 5};
  return nodes.reduce(external, f);
}

StarTriangleTlCore star_triangle_tl_core(double b_t, double b_s, double theta_t,
                                         double theta_s) {
  const double st = std::sin(theta_t);
  const double s2s = std::sin(2.0 * theta_s);
  const double ss = std::sin(theta_s);
  if (std::abs(st) < 1e-9 || std::abs(s2s) < 1e-9 || std::abs(ss) < 1e-9) {
    throw ResonantAngle("star_triangle_tl_core: line at resonance angle");
  }
  // Matching j A_core against the nodal admittance of the six segments gives
  // two linear equations in u = 1/z_s and v = 1/z_t:
  //   off-diagonal: -B_t = v/sin(theta_t) + 2u/(3 sin 2theta_s)
  //   diagonal:     2B_t + B_s = -2v cot(theta_t) - u cot(theta_s)
  //                              + 2u/(3 sin 2theta_s)
  const double ct = std::cos(theta_t);
  const double denom = (4.0 * ct + 2.0) / (3.0 * s2s) - std::cos(theta_s) / ss;
  if (std::abs(denom) < 1e-12) {
    throw UnrealizableImpedance("star_triangle_tl_core: degenerate angle combination");
  }
  const double u = (2.0 * b_t * (1.0 - ct) + b_s) / denom;
  const double v = -st * (b_t + 2.0 * u / (3.0 * s2s));
  if (!(u > 0.0) || !(v > 0.0)) {
    throw UnrealizableImpedance("star_triangle_tl_core: negative line impedance at these angles");
  }
  const StarTriangleTlCore core{1.0 / v, 1.0 / u};
  if (core.z_t < 5.0 || core.z_t > 250.0 || core.z_s < 5.0 || core.z_s > 250.0) {
    std::ostringstream msg;
    msg << "star_triangle_tl_core: impedance outside [5, 250] ohm window (z_t=" << core.z_t
        << ", z_s=" << core.z_s << ")";
    throw UnrealizableImpedance(msg.str());
  }
  return core;
}

namespace {

struct SandwichGroups {
  int series = -1;
  int stub = -1;
};

SandwichGroups make_sandwich_groups(Netlist& netlist, double b, double f0) {
  const SeriesReactanceLines lines = quarter_wave_equivalent(-1.0 / b, f0);
  netlist.groups.push_back({lines.series_a.z_c, lines.series_a.electrical_length_at_f0});
  netlist.groups.push_back({lines.stub.z_c, lines.stub.electrical_length_at_f0});
  return {static_cast<int>(netlist.groups.size()) - 2,
          static_cast<int>(netlist.groups.size()) - 1};
}

void add_sandwich(Netlist& netlist, int node_u, int node_v, const SandwichGroups& groups) {
  const int mid = netlist.add_node();
  const int open_end = netlist.add_node();
  netlist.segments.push_back({groups.series, node_u, mid});
  netlist.segments.push_back({groups.stub, mid, open_end});
  netlist.segments.push_back({groups.series, mid, node_v});
}

int make_stub_group(Netlist& netlist, double b, double f0) {
  const TransmissionLine stub = shunt_susceptance_stub(b, f0);
  netlist.groups.push_back({stub.z_c, stub.electrical_length_at_f0});
  return static_cast<int>(netlist.groups.size()) - 1;
}

void add_stub(Netlist& netlist, int node, int group) {
  const int open_end = netlist.add_node();
  netlist.segments.push_back({group, node, open_end});
}

}  // namespace

Netlist two_stage_tl_realization(const TwoStageDesign& design, double f0) {
  Netlist netlist;
  netlist.name = "two-stage DMN";
  netlist.f0 = f0;
  netlist.n_nodes = 6;
  netlist.ports = {0, 1, 2, 3, 4, 5};  // A1-A3, P1-P3

  // Floating susceptances: B1 between antenna nodes, B2/B3 in the cyclic
  // feed-to-antenna pattern of the B sub-block.
  const std::array<std::pair<int, int>, 3> b1_pairs = {{{0, 1}, {1, 2}, {2, 0}}};
  const std::array<std::pair<int, int>, 3> b2_pairs = {{{3, 0}, {4, 1}, {5, 2}}};
  const std::array<std::pair<int, int>, 3> b3_pairs = {{{3, 2}, {4, 0}, {5, 1}}};

  struct FloatingRole {
    double b;
    const std::array<std::pair<int, int>, 3>& pairs;
  };
  const std::array<FloatingRole, 3> floating = {
      FloatingRole{design.b1, b1_pairs},
      FloatingRole{design.b2, b2_pairs},
      FloatingRole{design.b3, b3_pairs},
  };
  for (const FloatingRole& role : floating) {
    if (std::abs(role.b) < kNullSusceptance) continue;
    const SandwichGroups groups = make_sandwich_groups(netlist, role.b, f0);
    for (const auto& [u, v] : role.pairs) add_sandwich(netlist, u, v, groups);
  }

  if (std::abs(design.b4) >= kNullSusceptance) {
    const int group = make_stub_group(netlist, design.b4, f0);
    for (int i = 0; i < 3; ++i) add_stub(netlist, i, group);
  }
  if (std::abs(design.b5) >= kNullSusceptance) {
    const int group = make_stub_group(netlist, design.b5, f0);
    for (int i = 3; i < 6; ++i) add_stub(netlist, i, group);
  }
  return netlist;
}

Netlist star_triangle_tl_realization(const StarTriangleDesign& design, double f0) {
  Netlist netlist;
  netlist.name = "star-triangle DMN";
  netlist.f0 = f0;
  netlist.n_nodes = 6;
  netlist.ports = {0, 1, 2, 3, 4, 5};  // A1-A3, P1-P3

  // Core antenna nodes sit behind the B_c series elements when present.
  std::array<int, 3> core = {0, 1, 2};
  if (design.b_c && std::abs(*design.b_c) >= kNullSusceptance) {
    core = {netlist.add_node(), netlist.add_node(), netlist.add_node()};
    const SandwichGroups groups = make_sandwich_groups(netlist, *design.b_c, f0);
    for (int i = 0; i < 3; ++i) add_sandwich(netlist, i, core[i], groups);
  }

  // Star-triangle line core for {B_t, B_s}; fall back over a deterministic
  // angle list until the impedances land inside the realizability window.
  if (std::abs(design.b_t) >= kNullSusceptance || std::abs(design.b_s) >= kNullSusceptance) {
    const std::array<std::pair<double, double>, 6> angle_candidates = {{
        {0.45 * pi, 0.45 * pi},
        {0.45 * pi, 0.55 * pi},
        {0.55 * pi, 0.45 * pi},
        {0.55 * pi, 0.55 * pi},
        {0.40 * pi, 0.60 * pi},
        {0.60 * pi, 0.40 * pi},
    }};
    StarTriangleTlCore solved{};
    double theta_t = 0.0, theta_s = 0.0;
    bool ok = false;
    for (const auto& [tt, ts] : angle_candidates) {
      try {
        solved = star_triangle_tl_core(design.b_t, design.b_s, tt, ts);
        theta_t = tt;
        theta_s = ts;
        ok = true;
        break;
      } catch (const UnrealizableImpedance&) {
      }
    }
    if (!ok) {
      throw UnrealizableImpedance(
          "star_triangle_tl_realization: no candidate angle pair is realizable");
    }
    netlist.groups.push_back({solved.z_t, theta_t});
    const int triangle_group = static_cast<int>(netlist.groups.size()) - 1;
    netlist.groups.push_back({solved.z_s, theta_s});
    const int star_group = static_cast<int>(netlist.groups.size()) - 1;
    const int center = netlist.add_node();
    netlist.segments.push_back({triangle_group, core[0], core[1]});
    netlist.segments.push_back({triangle_group, core[1], core[2]});
    netlist.segments.push_back({triangle_group, core[2], core[0]});
    for (int i = 0; i < 3; ++i) netlist.segments.push_back({star_group, core[i], center});
  }

  if (std::abs(design.b_b) >= kNullSusceptance) {
    const SandwichGroups groups = make_sandwich_groups(netlist, design.b_b, f0);
    for (int i = 0; i < 3; ++i) add_sandwich(netlist, core[i], 3 + i, groups);
  }
  if (std::abs(design.b_a) >= kNullSusceptance) {
    const int group = make_stub_group(netlist, design.b_a, f0);
    for (int i = 3; i < 6; ++i) add_stub(netlist, i, group);
  }
  return netlist;
}

}  // namespace dmnkit
