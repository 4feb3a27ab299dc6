// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dmnkit/beamforming.hpp"
#include "dmnkit/network.hpp"
#include "dmnkit/tuner.hpp"

namespace dmnkit {

/// S-parameter sweep as `freq_hz,s11_db,s11_deg,...,sNN_deg` (row-major).
std::string sweep_to_csv(const FrequencySweep& sweep);
void write_sweep_csv(const FrequencySweep& sweep, const std::filesystem::path& path);

/// Gain curve as `phi0_deg,gain_dbi,re_w1,im_w1,...`.
std::string gain_curve_to_csv(const GainCurve& curve);
void write_gain_curve_csv(const GainCurve& curve, const std::filesystem::path& path);

/// Optimizer trace as `iter,objective_db,params...`.
std::string optimizer_log_to_csv(const std::vector<SimplexLogEntry>& log);
void write_optimizer_log_csv(const std::vector<SimplexLogEntry>& log,
                             const std::filesystem::path& path);

}  // namespace dmnkit
