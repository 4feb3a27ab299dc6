// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dmnkit/network.hpp"

namespace dmnkit {

enum class TouchstoneFormat { RI, MA, DB };

struct TouchstoneData {
  FrequencySweep sweep;
  std::vector<std::string> comments;  // '!' lines, without the marker
};

/// Touchstone v1 reader. Port count comes from the .sNp extension; the option
/// line defaults to "# GHz S MA R 50". Y and Z data are stored normalized to
/// the reference resistance, as v1 prescribes, and are denormalized here.
/// Version-2 keywords raise ParseError; malformed lines carry line numbers.
TouchstoneData read_touchstone_file(const std::filesystem::path& path);
FrequencySweep read_touchstone(const std::filesystem::path& path);

/// Deterministic v1 writer (12 significant digits, Hz option line). Comments
/// are re-emitted ahead of the option line.
void write_touchstone(const FrequencySweep& sweep, const std::filesystem::path& path,
                      TouchstoneFormat format = TouchstoneFormat::RI,
                      const std::vector<std::string>& comments = {});

std::string touchstone_to_string(const FrequencySweep& sweep,
                                 TouchstoneFormat format = TouchstoneFormat::RI,
                                 const std::vector<std::string>& comments = {});
TouchstoneData touchstone_from_string(const std::string& text, int n_ports);

}  // namespace dmnkit
