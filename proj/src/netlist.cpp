// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#include "dmnkit/netlist.hpp"

#include <fstream>
#include <sstream>

#include "dmnkit/errors.hpp"
#include "dmnkit/nodal.hpp"
#include "textio.hpp"

namespace dmnkit {

namespace textio {

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out << content;
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed: " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace textio

MultiportNetwork netlist_n_port(const Netlist& netlist, double f) {
  if (netlist.n_nodes <= 0 || netlist.ports.empty()) {
    throw Error("netlist_n_port: netlist has no nodes or ports");
  }
  NodalNetwork nodes(netlist.n_nodes);
  for (const NetlistSegment& seg : netlist.segments) {
    const NetlistGroup& g = netlist.groups.at(seg.group);
    nodes.add_line(seg.node_a, seg.node_b, TransmissionLine{g.z_c, g.theta, netlist.f0}, f);
  }
  return nodes.reduce(netlist.ports, f);
}

std::string netlist_to_string(const Netlist& netlist) {
  std::ostringstream out;
  if (!netlist.name.empty()) out << "! " << netlist.name << "\n";
  out << "F0 " << textio::format_number(netlist.f0) << "\n";
  out << "NODES " << netlist.n_nodes << "\n";
  out << "PORTS";
  for (int p : netlist.ports) out << " " << p;
  out << "\n";
  for (const NetlistGroup& g : netlist.groups) {
    out << "GROUP " << textio::format_number(g.z_c) << " " << textio::format_number(g.theta)
        << "\n";
  }
  for (const NetlistSegment& seg : netlist.segments) {
    const NetlistGroup& g = netlist.groups.at(seg.group);
    out << "TL " << textio::format_number(g.z_c) << " " << textio::format_number(g.theta) << " "
        << seg.node_a << " " << seg.node_b << "\n";
  }
  return out.str();
}

Netlist netlist_from_string(const std::string& text) {
  Netlist netlist;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_f0 = false;
  auto need_number = [&](std::string_view tok) {
    auto v = textio::parse_number(tok);
    if (!v) throw ParseError("netlist: bad number '" + std::string(tok) + "'", line_no);
    return *v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = textio::split_tokens(line);
    if (tokens.empty() || tokens[0].front() == '!') continue;
    const std::string_view kw = tokens[0];
    if (kw == "F0") {
      if (tokens.size() != 2) throw ParseError("netlist: F0 takes one value", line_no);
      netlist.f0 = need_number(tokens[1]);
      have_f0 = true;
    } else if (kw == "NODES") {
      if (tokens.size() != 2) throw ParseError("netlist: NODES takes one value", line_no);
      netlist.n_nodes = static_cast<int>(need_number(tokens[1]));
    } else if (kw == "PORTS") {
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        netlist.ports.push_back(static_cast<int>(need_number(tokens[i])));
      }
    } else if (kw == "GROUP") {
      if (tokens.size() != 3) throw ParseError("netlist: GROUP takes z and theta", line_no);
      netlist.groups.push_back({need_number(tokens[1]), need_number(tokens[2])});
    } else if (kw == "TL") {
      if (tokens.size() != 5) {
        throw ParseError("netlist: TL takes z theta node_a node_b", line_no);
      }
      const double z = need_number(tokens[1]);
      const double theta = need_number(tokens[2]);
      const int a = static_cast<int>(need_number(tokens[3]));
      const int b = static_cast<int>(need_number(tokens[4]));
      int group = -1;
      for (std::size_t g = 0; g < netlist.groups.size(); ++g) {
        if (netlist.groups[g].z_c == z && netlist.groups[g].theta == theta) {
          group = static_cast<int>(g);
          break;
        }
      }
      if (group < 0) {
        netlist.groups.push_back({z, theta});
        group = static_cast<int>(netlist.groups.size()) - 1;
      }
      netlist.segments.push_back({group, a, b});
    } else {
      throw ParseError("netlist: unknown keyword '" + std::string(kw) + "'", line_no);
    }
  }
  if (!have_f0 || netlist.n_nodes <= 0 || netlist.ports.empty()) {
    throw ParseError("netlist: missing F0, NODES or PORTS header", line_no);
  }
  for (const NetlistSegment& seg : netlist.segments) {
    if (seg.node_a < 0 || seg.node_a >= netlist.n_nodes || seg.node_b < 0 ||
        seg.node_b >= netlist.n_nodes) {
      throw ParseError("netlist: segment references unknown node");
    }
  }
  return netlist;
}

void write_netlist(const Netlist& netlist, const std::filesystem::path& path) {
  textio::atomic_write(path, netlist_to_string(netlist));
}

Netlist read_netlist(const std::filesystem::path& path) {
  return netlist_from_string(textio::read_file(path));
}

}  // namespace dmnkit
