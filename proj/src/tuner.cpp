// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#include "dmnkit/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dmnkit/errors.hpp"
#include "dmnkit/nodal.hpp"

namespace dmnkit {

namespace {

constexpr double kFailurePenalty = 1e30;

// Optimizer box from the design decisions: microstrip-feasible impedances and
// line lengths.
constexpr double kZLo = 5.0;
constexpr double kZHi = 250.0;
constexpr double kThetaLo = 0.05 * 2.0 * pi;
constexpr double kThetaHi = 0.75 * 2.0 * pi;

}  // namespace

std::vector<double> ObjectiveSpec::frequencies() const {
  if (!(f_lo <= f_hi) || target_db >= 0.0) {
    throw Error("ObjectiveSpec: need f_lo <= f_hi and target_db < 0");
  }
  if (n_freq < 1) throw Error("ObjectiveSpec: n_freq must be positive");
  if (n_freq == 1 || f_lo == f_hi) return {0.5 * (f_lo + f_hi)};
  std::vector<double> f(n_freq);
  for (int i = 0; i < n_freq; ++i) {
    f[i] = f_lo + (f_hi - f_lo) * i / (n_freq - 1);
  }
  return f;
}

namespace {

struct BandWorst {
  double matching_db = -1e300;
  double coupling_db = -1e300;
};

BandWorst band_worst(const std::function<MultiportNetwork(double)>& s_at,
                     const ObjectiveSpec& spec) {
  BandWorst worst;
  for (double f : spec.frequencies()) {
    const MultiportNetwork s = s_at(f);
    for (int r = 0; r < s.n_ports; ++r) {
      for (int c = 0; c < s.n_ports; ++c) {
        const double mag = std::abs(s.matrix(r, c));
        const double db = mag > 0.0 ? to_db(mag) : -1e300;
        (r == c ? worst.matching_db : worst.coupling_db) =
            std::max(r == c ? worst.matching_db : worst.coupling_db, db);
      }
    }
  }
  return worst;
}

}  // namespace

double evaluate_objective(const std::function<MultiportNetwork(double)>& s_at,
                          const ObjectiveSpec& spec) {
  BandWorst worst;
  try {
    worst = band_worst(s_at, spec);
  } catch (const Error&) {
    return kFailurePenalty;
  }
  return spec.weight_matching * std::max(0.0, worst.matching_db - spec.target_db) +
         spec.weight_coupling * std::max(0.0, worst.coupling_db - spec.target_db);
}

double worst_entry_db_over_band(const std::function<MultiportNetwork(double)>& s_at,
                                const ObjectiveSpec& spec) {
  const BandWorst worst = band_worst(s_at, spec);
  return std::max(worst.matching_db, worst.coupling_db);
}

ComplexMatrix antenna_y_at(const FrequencySweep& antenna, double f) {
  if (antenna.empty()) throw EmptySweep("antenna_y_at: empty sweep");
  if (antenna.size() == 1) {
    return convert(antenna.points.front(), Repr::Y).matrix;
  }
  const double f_first = antenna.points.front().freq;
  const double f_last = antenna.points.back().freq;
  const double slack = 1e-9 * (f_last - f_first);
  if (f < f_first - slack || f > f_last + slack) {
    throw Error("antenna_y_at: frequency outside the antenna sweep");
  }
  std::size_t hi = 1;
  while (hi + 1 < antenna.size() && antenna.points[hi].freq < f) ++hi;
  const MultiportNetwork& a = antenna.points[hi - 1];
  const MultiportNetwork& b = antenna.points[hi];
  const double t = std::clamp((f - a.freq) / (b.freq - a.freq), 0.0, 1.0);
  const ComplexMatrix ya = convert(a, Repr::Y).matrix;
  const ComplexMatrix yb = convert(b, Repr::Y).matrix;
  return ya + t * (yb - ya);
}

MultiportNetwork neutralization_two_n_port(const NeutralizationDesign& design, double f) {
  const int n = design.n_elements;
  if (n < 3) throw Error("neutralization_two_n_port: ring needs at least 3 elements");
  // Nodes: 0..n-1 antenna ports, n..2n-1 feed ports, 2n..3n-1 inner ring.
  NodalNetwork nodes(3 * n);
  for (int i = 0; i < n; ++i) {
    nodes.add_line(i, 2 * n + i, design.tl_ant, f);
    nodes.add_line(2 * n + i, n + i, design.tl_port, f);
    nodes.add_line(2 * n + i, 2 * n + (i + 1) % n, design.tl_dec, f);
  }
  std::vector<int> external(2 * n);
  for (int i = 0; i < 2 * n; ++i) external[i] = i;
  return nodes.reduce(external, f);
}

namespace {

MultiportNetwork terminate_in_antenna(const MultiportNetwork& two_n_port,
                                      const FrequencySweep& antenna, double f, double z0) {
  const int n = two_n_port.n_ports / 2;
  const MultiportNetwork y_a = make_y(f, antenna_y_at(antenna, f));
  std::vector<int> antenna_ports(n);
  for (int i = 0; i < n; ++i) antenna_ports[i] = i;
  const MultiportNetwork reduced = terminate(two_n_port, y_a, antenna_ports);
  return convert(reduced, Repr::S, z0);
}

}  // namespace

MultiportNetwork combined_s(const NeutralizationDesign& design, const FrequencySweep& antenna,
                            double f, double z0) {
  return terminate_in_antenna(neutralization_two_n_port(design, f), antenna, f, z0);
}

MultiportNetwork combined_s(const Netlist& dmn, const FrequencySweep& antenna, double f,
                            double z0) {
  return terminate_in_antenna(netlist_n_port(dmn, f), antenna, f, z0);
}

double evaluate_objective(const NeutralizationDesign& design, const FrequencySweep& antenna,
                          const ObjectiveSpec& spec, double z0) {
  return evaluate_objective(
      [&](double f) { return combined_s(design, antenna, f, z0); }, spec);
}

double evaluate_objective(const Netlist& dmn, const FrequencySweep& antenna,
                          const ObjectiveSpec& spec, double z0) {
  return evaluate_objective([&](double f) { return combined_s(dmn, antenna, f, z0); }, spec);
}

namespace {

// Reflects a point into the box; a candidate far outside folds back in.
void reflect_into_box(RealVector& x, const RealVector& lo, const RealVector& hi) {
  for (int i = 0; i < x.size(); ++i) {
    double v = x(i);
    for (int guard = 0; guard < 64 && (v < lo(i) || v > hi(i)); ++guard) {
      if (v < lo(i)) v = 2.0 * lo(i) - v;
      if (v > hi(i)) v = 2.0 * hi(i) - v;
    }
    x(i) = std::clamp(v, lo(i), hi(i));
  }
}

struct SimplexState {
  std::vector<RealVector> pts;
  std::vector<double> vals;

  void sort() {
    std::vector<int> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return vals[a] < vals[b]; });
    std::vector<RealVector> p(pts.size());
    std::vector<double> v(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      p[i] = pts[order[i]];
      v[i] = vals[order[i]];
    }
    pts.swap(p);
    vals.swap(v);
  }

  double spread() const { return vals.back() - vals.front(); }

  double size() const {
    double m = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) m = std::max(m, (pts[i] - pts[0]).norm());
    return m;
  }
};

}  // namespace

SimplexResult minimize_simplex(const std::function<double(const RealVector&)>& objective,
                               std::span<const RealVector> initial_points,
                               const RealVector& lower, const RealVector& upper,
                               const SimplexOptions& options) {
  const int dim = static_cast<int>(lower.size());
  SimplexResult result;
  result.objective = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  int evals = 0;
  auto eval = [&](const RealVector& x) {
    const double v = objective(x);
    ++evals;
    if (v < result.objective) {
      result.objective = v;
      result.x = x;
      result.log.push_back({evals, v, x});
    }
    return v;
  };

  const int per_start = options.evals_per_start > 0 ? options.evals_per_start
                                                    : std::max(options.budget / 8, 50);
  std::size_t start_index = 0;
  auto next_start = [&]() {
    RealVector x0(dim);
    if (start_index < initial_points.size()) {
      x0 = initial_points[start_index];
      reflect_into_box(x0, lower, upper);
    } else {
      for (int i = 0; i < dim; ++i) x0(i) = lower(i) + (upper(i) - lower(i)) * uniform(rng);
    }
    ++start_index;
    return x0;
  };

  while (evals < options.budget && result.objective > options.stop_at) {
    const RealVector x0 = next_start();
    const int start_budget = std::min(per_start, options.budget - evals);
    if (start_budget < dim + 2) break;

    SimplexState s;
    s.pts.push_back(x0);
    s.vals.push_back(eval(x0));
    for (int i = 0; i < dim; ++i) {
      RealVector p = x0;
      const double step = 0.10 * (upper(i) - lower(i));
      p(i) += (p(i) + step <= upper(i)) ? step : -step;
      reflect_into_box(p, lower, upper);
      s.pts.push_back(p);
      s.vals.push_back(eval(p));
      if (evals >= options.budget) break;
    }
    if (static_cast<int>(s.pts.size()) < dim + 1) break;

    const int local_cap = evals - (dim + 1) + start_budget;
    while (evals < options.budget && evals < local_cap &&
           result.objective > options.stop_at) {
      s.sort();
      if (s.spread() < options.f_tol || s.size() < options.x_tol) break;

      RealVector centroid = RealVector::Zero(dim);
      for (int i = 0; i < dim; ++i) {
        for (std::size_t p = 0; p + 1 < s.pts.size(); ++p) centroid(i) += s.pts[p](i);
      }
      centroid /= static_cast<double>(dim);

      auto propose = [&](double coeff) {
        RealVector p = centroid + coeff * (centroid - s.pts.back());
        reflect_into_box(p, lower, upper);
        return p;
      };

      const RealVector reflected = propose(1.0);
      const double fr = eval(reflected);
      if (fr < s.vals.front()) {
        const RealVector expanded = propose(2.0);
        const double fe = eval(expanded);
        if (fe < fr) {
          s.pts.back() = expanded;
          s.vals.back() = fe;
        } else {
          s.pts.back() = reflected;
          s.vals.back() = fr;
        }
      } else if (fr < s.vals[s.vals.size() - 2]) {
        s.pts.back() = reflected;
        s.vals.back() = fr;
      } else {
        const RealVector contracted = propose(fr < s.vals.back() ? 0.5 : -0.5);
        const double fc = eval(contracted);
        if (fc < std::min(fr, s.vals.back())) {
          s.pts.back() = contracted;
          s.vals.back() = fc;
        } else {
          // Shrink toward the best vertex.
          for (std::size_t p = 1; p < s.pts.size(); ++p) {
            s.pts[p] = s.pts[0] + 0.5 * (s.pts[p] - s.pts[0]);
            s.vals[p] = eval(s.pts[p]);
            if (evals >= options.budget) break;
          }
        }
      }
    }
  }

  result.evaluations = evals;
  return result;
}

namespace {

NeutralizationDesign design_from_vector(const RealVector& x, int n, double f0) {
  return {TransmissionLine{x(0), x(1), f0},
          TransmissionLine{x(2), x(3), f0},
          TransmissionLine{x(4), x(5), f0},
          n};
}

// Analytic warm starts: rotate the coupling to purely imaginary with the
// antenna line, cancel it with the ring line, then single-line match the
// remaining scalar admittance.
std::vector<RealVector> neutralization_seeds(const ComplexMatrix& y_a, double z0) {
  const int n = static_cast<int>(y_a.rows());
  std::vector<RealVector> seeds;
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);

  for (double za : {30.0, 50.0, 75.0}) {
    auto transformed = [&](double ta) -> ComplexMatrix {
      const Complex a = std::cos(ta);
      const Complex b = j1 * za * std::sin(ta);
      const Complex c = j1 * std::sin(ta) / za;
      return (c * eye + a * y_a).eval() * (a * eye + b * y_a).inverse();
    };

    const int grid = 720;
    double prev_re = transformed(0.05)(0, 1).real();
    for (int k = 1; k <= grid; ++k) {
      const double ta = 0.05 + (pi - 0.1) * k / grid;
      const double re = transformed(ta)(0, 1).real();
      if (prev_re * re < 0.0) {
        double lo = 0.05 + (pi - 0.1) * (k - 1) / grid;
        double hi = ta;
        const double sign_lo = prev_re;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          (transformed(mid)(0, 1).real() * sign_lo > 0.0 ? lo : hi) = mid;
        }
        const double ta_root = 0.5 * (lo + hi);
        const ComplexMatrix y1 = transformed(ta_root);
        const double b1 = y1(0, 1).imag();
        if (std::abs(b1) > 1e-12) {
          const double zd = std::clamp(1.2 / std::abs(b1), 10.0, 240.0);
          const double s = -1.0 / (zd * b1);
          if (std::abs(s) <= 1.0) {
            double td = std::asin(std::abs(s));
            if (s < 0.0) td += pi;
            // Ring diagonal loading: two neutralization lines per node.
            const Complex yd =
                y1(0, 0) - 2.0 * j1 * std::cos(td) / (zd * std::sin(td));
            const double g = 1.0 / z0;
            const double gd = yd.real();
            const double bd = yd.imag();
            double zp = std::sqrt(z0 / std::max(gd, 1e-4));
            double tp = pi / 2.0;
            if (std::abs(bd) > 1e-12 && std::abs(g - gd) > 1e-12) {
              const double y0sq = g * (gd * (g - gd) - bd * bd) / (g - gd);
              if (y0sq > 0.0) {
                const double y0 = std::sqrt(y0sq);
                tp = std::atan(y0 * (g - gd) / (g * bd));
                if (tp < 0.0) tp += pi;
                zp = 1.0 / y0;
              }
            }
            RealVector x(6);
            x << zd, td, za, ta_root, std::clamp(zp, kZLo, kZHi), tp;
            seeds.push_back(x);
          }
        }
      }
      prev_re = re;
    }
  }
  return seeds;
}

}  // namespace

NeutralizationResult optimize_neutralization(const UcaGeometry& geom,
                                             const FrequencySweep& antenna,
                                             const ObjectiveSpec& spec, std::uint64_t seed,
                                             int budget, double z0) {
  if (budget < 1000) throw Error("optimize_neutralization: budget must be at least 1000");
  const int n = geom.n_elements;

  RealVector lo(6), hi(6);
  lo << kZLo, kThetaLo, kZLo, kThetaLo, kZLo, kThetaLo;
  hi << kZHi, kThetaHi, kZHi, kThetaHi, kZHi, kThetaHi;

  const double f_center = 0.5 * (spec.f_lo + spec.f_hi);
  auto objective = [&](const RealVector& x) {
    return evaluate_objective(design_from_vector(x, n, f_center), antenna, spec, z0);
  };

  std::vector<RealVector> seeds = neutralization_seeds(antenna_y_at(antenna, f_center), z0);
  RealVector center = 0.5 * (lo + hi);
  seeds.push_back(center);

  SimplexOptions options;
  options.budget = budget;
  options.seed = seed;
  options.evals_per_start = std::max(600, budget / 10);
  const SimplexResult sr = minimize_simplex(objective, seeds, lo, hi, options);

  NeutralizationResult result;
  result.design = design_from_vector(sr.x, n, f_center);
  result.objective = sr.objective;
  result.evaluations = sr.evaluations;
  result.log = sr.log;
  result.feasible = sr.objective <= 0.0;
  result.budget_exhausted_no_feasible = !result.feasible;
  result.worst_db = worst_entry_db_over_band(
      [&](double f) { return combined_s(result.design, antenna, f, z0); }, spec);
  return result;
}

TuneResult broadband_tune(const Netlist& start, const FrequencySweep& antenna,
                          const ObjectiveSpec& spec, int budget, std::uint64_t seed,
                          double z0) {
  TuneResult result;
  result.netlist = start;
  result.objective_before = evaluate_objective(start, antenna, spec, z0);
  result.objective_after = result.objective_before;

  const int n_groups = static_cast<int>(start.groups.size());
  const int dim = 2 * n_groups;
  auto apply = [&](const RealVector& x) {
    Netlist tuned = start;
    for (int g = 0; g < n_groups; ++g) {
      tuned.groups[g].z_c = start.groups[g].z_c * x(2 * g);
      tuned.groups[g].theta = start.groups[g].theta * x(2 * g + 1);
    }
    return tuned;
  };

  if (budget > 0 && result.objective_before > 0.0) {
    RealVector lo = RealVector::Constant(dim, 0.8);
    RealVector hi = RealVector::Constant(dim, 1.2);
    RealVector ones = RealVector::Constant(dim, 1.0);
    auto objective = [&](const RealVector& x) {
      return evaluate_objective(apply(x), antenna, spec, z0);
    };
    SimplexOptions options;
    options.budget = budget;
    options.seed = seed;
    const std::array<RealVector, 1> starts = {ones};
    const SimplexResult sr = minimize_simplex(objective, starts, lo, hi, options);
    result.evaluations = sr.evaluations;
    result.log = sr.log;
    if (sr.objective < result.objective_before) {
      result.netlist = apply(sr.x);
      result.objective_after = sr.objective;
    }
  }

  result.feasible = result.objective_after <= 0.0;
  result.budget_exhausted_no_feasible = !result.feasible;
  result.worst_db = worst_entry_db_over_band(
      [&](double f) { return combined_s(result.netlist, antenna, f, z0); }, spec);
  return result;
}

}  // namespace dmnkit
