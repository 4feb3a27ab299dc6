// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#include "dmnkit/nodal.hpp"

#include <vector>

#include "dmnkit/errors.hpp"

namespace dmnkit {

NodalNetwork::NodalNetwork(int n_nodes) {
  if (n_nodes <= 0) throw Error("NodalNetwork: need at least one node");
  y_ = ComplexMatrix::Zero(n_nodes, n_nodes);
}

void NodalNetwork::add_branch(int a, int b, Complex y) {
  y_(a, a) += y;
  y_(b, b) += y;
  y_(a, b) -= y;
  y_(b, a) -= y;
}

void NodalNetwork::add_shunt(int node, Complex y) { y_(node, node) += y; }

void NodalNetwork::add_line(int a, int b, const TransmissionLine& tl, double f) {
  const LineYParams p = tl_y_params(tl, f);
  y_(a, a) += p.y11;
  y_(b, b) += p.y11;
  y_(a, b) += p.y12;
  y_(b, a) += p.y12;
}

void NodalNetwork::add_open_stub(int node, const TransmissionLine& tl, double f) {
  add_shunt(node, open_stub_admittance(tl, f));
}

void NodalNetwork::add_network(const MultiportNetwork& net, std::span<const int> nodes) {
  if (net.repr != Repr::Y) throw Error("NodalNetwork::add_network: need Y representation");
  if (static_cast<int>(nodes.size()) != net.n_ports) {
    throw Error("NodalNetwork::add_network: node count must match port count");
  }
  for (int r = 0; r < net.n_ports; ++r) {
    for (int c = 0; c < net.n_ports; ++c) y_(nodes[r], nodes[c]) += net.matrix(r, c);
  }
}

MultiportNetwork NodalNetwork::reduce(std::span<const int> external_nodes, double freq) const {
  const int n = n_nodes();
  const int m = static_cast<int>(external_nodes.size());
  std::vector<bool> is_external(n, false);
  for (int node : external_nodes) {
    if (node < 0 || node >= n || is_external[node]) {
      throw Error("NodalNetwork::reduce: invalid external node list");
    }
    is_external[node] = true;
  }
  std::vector<int> internal;
  for (int i = 0; i < n; ++i) {
    if (!is_external[i]) internal.push_back(i);
  }
  const int k = static_cast<int>(internal.size());

  ComplexMatrix y_ee(m, m), y_ei(m, k), y_ie(k, m), y_ii(k, k);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) y_ee(r, c) = y_(external_nodes[r], external_nodes[c]);
    for (int c = 0; c < k; ++c) y_ei(r, c) = y_(external_nodes[r], internal[c]);
  }
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < m; ++c) y_ie(r, c) = y_(internal[r], external_nodes[c]);
    for (int c = 0; c < k; ++c) y_ii(r, c) = y_(internal[r], internal[c]);
  }

  if (k == 0) return make_y(freq, std::move(y_ee));

  Eigen::FullPivLU<ComplexMatrix> lu(y_ii);
  if (!lu.isInvertible()) {
    throw SingularComposition("NodalNetwork::reduce: internal node block singular");
  }
  ComplexMatrix reduced = y_ee - y_ei * lu.solve(y_ie);
  return make_y(freq, std::move(reduced));
}

}  // namespace dmnkit
