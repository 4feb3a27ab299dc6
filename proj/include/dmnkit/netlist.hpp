// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dmnkit/network.hpp"
#include "dmnkit/types.hpp"

namespace dmnkit {

/// Tunable (z_c, theta) pair shared by all segments realizing the same
/// circuit role; broadband tuning perturbs groups, never single segments,
/// so the array symmetry survives.
struct NetlistGroup {
  double z_c = 50.0;    // ohms
  double theta = 0.0;   // radians at f0
};

/// One transmission-line piece. Open stubs are lines ending at a dangling
/// node, so every piece serializes the same way.
struct NetlistSegment {
  int group = 0;
  int node_a = 0;
  int node_b = 0;
};

struct Netlist {
  std::string name;
  double f0 = 0.0;
  int n_nodes = 0;
  std::vector<int> ports;  // external node ids in port order
  std::vector<NetlistGroup> groups;
  std::vector<NetlistSegment> segments;

  int n_segments() const { return static_cast<int>(segments.size()); }
  int add_node() { return n_nodes++; }
};

/// Y-matrix at the netlist ports, all lines evaluated at frequency f.
MultiportNetwork netlist_n_port(const Netlist& netlist, double f);

/// Line-oriented text form; one element per line as
///   TL <z_ohms> <theta_rad> <node_a> <node_b>
/// preceded by F0 / NODES / PORTS / GROUP header lines.
std::string netlist_to_string(const Netlist& netlist);
Netlist netlist_from_string(const std::string& text);

void write_netlist(const Netlist& netlist, const std::filesystem::path& path);
Netlist read_netlist(const std::filesystem::path& path);

}  // namespace dmnkit
