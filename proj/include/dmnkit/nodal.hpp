// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#pragma once

#include <span>

#include "dmnkit/elements.hpp"
#include "dmnkit/network.hpp"
#include "dmnkit/types.hpp"

namespace dmnkit {

/// Small dense nodal admittance assembler. Nodes are indexed 0..n-1 against
/// an implicit ground; internal nodes are eliminated by Kron reduction.
class NodalNetwork {
 public:
  explicit NodalNetwork(int n_nodes);

  int n_nodes() const { return static_cast<int>(y_.rows()); }

  void add_branch(int a, int b, Complex y);
  void add_shunt(int node, Complex y);
  void add_line(int a, int b, const TransmissionLine& tl, double f);
  void add_open_stub(int node, const TransmissionLine& tl, double f);
  /// Stamps a whole Y-matrix sub-network; nodes[i] receives its port i.
  void add_network(const MultiportNetwork& y, std::span<const int> nodes);

  /// Admittance matrix seen at the listed nodes after eliminating all others.
  MultiportNetwork reduce(std::span<const int> external_nodes, double freq) const;

 private:
  ComplexMatrix y_;
};

}  // namespace dmnkit
