// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dmnkit/elements.hpp"
#include "dmnkit/netlist.hpp"
#include "dmnkit/network.hpp"
#include "dmnkit/types.hpp"
#include "dmnkit/uca.hpp"

namespace dmnkit {

/// Broadband matching/decoupling goal: all selected |S_ij| below target_db
/// over [f_lo, f_hi].
struct ObjectiveSpec {
  double f_lo = 0.0;
  double f_hi = 0.0;
  double target_db = -16.0;
  double weight_matching = 1.0;
  double weight_coupling = 1.0;
  int n_freq = 21;

  std::vector<double> frequencies() const;
};

/// Hinge penalty: weight_matching * (worst diagonal dB - target)+ +
/// weight_coupling * (worst off-diagonal dB - target)+, worst taken over the
/// band. Zero exactly when the spec is met everywhere; composition failures
/// (resonances) count as a huge penalty.
double evaluate_objective(const std::function<MultiportNetwork(double)>& s_at,
                          const ObjectiveSpec& spec);

/// True minimax metric: max over band and all entries of 20 log10|S_ij|.
double worst_entry_db_over_band(const std::function<MultiportNetwork(double)>& s_at,
                                const ObjectiveSpec& spec);

/// Antenna admittance at f, linearly interpolated entrywise from the sweep
/// (converted to Y); a single-point sweep is held constant.
ComplexMatrix antenna_y_at(const FrequencySweep& antenna, double f);

/// Ring DMN from Fig-10(b)-style neutralization lines: per element one line
/// to the feed side and one to the antenna side, plus one neutralization line
/// per adjacent element pair.
struct NeutralizationDesign {
  TransmissionLine tl_dec;
  TransmissionLine tl_ant;
  TransmissionLine tl_port;
  int n_elements = 3;
};

/// 2N-port Y of the neutralization DMN (antenna side ports 0..N-1, feed side
/// N..2N-1) at frequency f.
MultiportNetwork neutralization_two_n_port(const NeutralizationDesign& design, double f);

/// S at the feed ports with the antenna connected.
MultiportNetwork combined_s(const NeutralizationDesign& design, const FrequencySweep& antenna,
                            double f, double z0 = 50.0);
MultiportNetwork combined_s(const Netlist& dmn, const FrequencySweep& antenna, double f,
                            double z0 = 50.0);

double evaluate_objective(const NeutralizationDesign& design, const FrequencySweep& antenna,
                          const ObjectiveSpec& spec, double z0 = 50.0);
double evaluate_objective(const Netlist& dmn, const FrequencySweep& antenna,
                          const ObjectiveSpec& spec, double z0 = 50.0);

struct SimplexLogEntry {
  int evaluations = 0;
  double best_objective = 0.0;
  RealVector x;
};

struct SimplexOptions {
  int budget = 10000;
  std::uint64_t seed = 1;
  double stop_at = 0.0;      // stop once the objective reaches this value
  int evals_per_start = 0;   // 0: budget / 8
  double f_tol = 1e-14;
  double x_tol = 1e-12;
};

struct SimplexResult {
  RealVector x;
  double objective = 0.0;
  int evaluations = 0;
  std::vector<SimplexLogEntry> log;  // best-so-far trace, non-increasing
};

/// Restarted Nelder-Mead with box constraints enforced by reflecting
/// candidates back into the box. Starts from the supplied points first, then
/// from seeded random draws, until the budget is spent or stop_at is reached.
SimplexResult minimize_simplex(const std::function<double(const RealVector&)>& objective,
                               std::span<const RealVector> initial_points,
                               const RealVector& lower, const RealVector& upper,
                               const SimplexOptions& options);

struct NeutralizationResult {
  NeutralizationDesign design;
  double objective = 0.0;
  double worst_db = 0.0;  // true minimax over the band
  bool feasible = false;
  bool budget_exhausted_no_feasible = false;
  int evaluations = 0;
  std::vector<SimplexLogEntry> log;
};

/// Optimizes {z, theta} of the three line roles against the objective.
/// Deterministic for a fixed seed; requires budget >= 1000.
NeutralizationResult optimize_neutralization(const UcaGeometry& geom,
                                             const FrequencySweep& antenna,
                                             const ObjectiveSpec& spec, std::uint64_t seed,
                                             int budget, double z0 = 50.0);

struct TuneResult {
  Netlist netlist;
  double objective_before = 0.0;
  double objective_after = 0.0;
  double worst_db = 0.0;
  bool feasible = false;
  bool budget_exhausted_no_feasible = false;
  int evaluations = 0;
  std::vector<SimplexLogEntry> log;
};

/// Perturbs netlist group impedances/lengths within +-20 % of the analytic
/// start. Topology is untouched and the result never scores worse than the
/// start; budget 0 returns the start unchanged (flagged when infeasible).
TuneResult broadband_tune(const Netlist& start, const FrequencySweep& antenna,
                          const ObjectiveSpec& spec, int budget, std::uint64_t seed,
                          double z0 = 50.0);

}  // namespace dmnkit
