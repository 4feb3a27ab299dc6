// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

// Command-line surface. Numeric results go to stdout or files; diagnostics go
// to stderr. Exit codes: 0 success, 2 infeasible synthesis, 3 parse errors.

#include <charconv>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "textio.hpp"
#include "dmnkit/beamforming.hpp"
#include "dmnkit/csv.hpp"
#include "dmnkit/elements.hpp"
#include "dmnkit/errors.hpp"
#include "dmnkit/netlist.hpp"
#include "dmnkit/network.hpp"
#include "dmnkit/synthesis.hpp"
#include "dmnkit/touchstone.hpp"
#include "dmnkit/tuner.hpp"
#include "dmnkit/uca.hpp"

namespace {

using namespace dmnkit;

// Complex literals in RE+IMj form, e.g. "36.5+21.3j" or "-12-3.4j" or "50".
Complex parse_complex(const std::string& text) {
  if (text.empty()) throw ParseError("empty complex literal");
  std::string s = text;
  double imag = 0.0;
  if (s.back() == 'j' || s.back() == 'J') {
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
      if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
        split = i;
        break;
      }
    }
    if (split == std::string::npos) throw ParseError("bad complex literal: " + text);
    const std::string imag_str = s.substr(split);
    s = s.substr(0, split);
    try {
      imag = std::stod(imag_str);
    } catch (const std::exception&) {
      throw ParseError("bad complex literal: " + text);
    }
  }
  try {
    return {s.empty() ? 0.0 : std::stod(s), imag};
  } catch (const std::exception&) {
    throw ParseError("bad complex literal: " + text);
  }
}

void emit(std::ostream& out, const std::string& text) { out << text; }

void write_text_or_stdout(const std::string& text, const std::string& path) {
  if (path == "-" || path.empty()) {
    emit(std::cout, text);
  } else {
    textio::atomic_write(path, text);
  }
}

TouchstoneFormat parse_format(const std::string& s) {
  if (s == "ri" || s == "RI") return TouchstoneFormat::RI;
  if (s == "ma" || s == "MA") return TouchstoneFormat::MA;
  if (s == "db" || s == "DB") return TouchstoneFormat::DB;
  throw ParseError("unknown touchstone format: " + s);
}

std::string design_csv(const TwoStageDesign& d) {
  std::string out = "name,value_s\n";
  const char* names[5] = {"B1", "B2", "B3", "B4", "B5"};
  const auto b = d.susceptances();
  for (int i = 0; i < 5; ++i) {
    out += std::string(names[i]) + "," + textio::format_number(b[i]) + "\n";
  }
  return out;
}

std::string design_csv(const StarTriangleDesign& d) {
  std::string out = "name,value_s\n";
  out += "Ba," + textio::format_number(d.b_a) + "\n";
  out += "Bb," + textio::format_number(d.b_b) + "\n";
  out += "Bs," + textio::format_number(d.b_s) + "\n";
  out += "Bt," + textio::format_number(d.b_t) + "\n";
  out += "Bc," + (d.b_c ? textio::format_number(*d.b_c) : std::string("none")) + "\n";
  return out;
}

FrequencySweep constant_antenna_sweep(const ComplexMatrix& z_a, double f_lo, double f_hi,
                                      int points) {
  std::vector<MultiportNetwork> pts;
  if (points <= 1 || f_lo == f_hi) {
    pts.push_back(make_z(0.5 * (f_lo + f_hi), z_a));
  } else {
    for (int i = 0; i < points; ++i) {
      pts.push_back(make_z(f_lo + (f_hi - f_lo) * i / (points - 1), z_a));
    }
  }
  return FrequencySweep(std::move(pts));
}

struct SynthCommon {
  std::string zin;
  std::string zc;
  double z0 = 50.0;
  double f0 = 3.6e9;
  std::string emit_netlist;
};

int run_synth_two_stage(const SynthCommon& common, const std::string& branch) {
  const Complex z_in = parse_complex(common.zin);
  const Complex z_c = parse_complex(common.zc);
  const SymmetricArrayModel model{3, z_in, z_c};
  const auto [alpha, beta] = ring_entries(admittance_of(model).matrix);

  TwoStageDesign design;
  if (branch.empty()) {
    design = synth_two_stage_best(alpha, beta, common.z0, common.f0);
  } else {
    if (branch.size() != 2 || (branch[0] != 'p' && branch[0] != 'm') ||
        (branch[1] != 'p' && branch[1] != 'm')) {
      throw ParseError("branch must be one of pp, pm, mp, mm");
    }
    const TwoStageBranch b{branch[0] == 'p' ? SignChoice::Plus : SignChoice::Minus,
                           branch[1] == 'p' ? SignChoice::Plus : SignChoice::Minus};
    design = synth_two_stage(alpha, beta, common.z0, b, common.f0);
  }
  emit(std::cout, design_csv(design));
  if (!common.emit_netlist.empty()) {
    write_netlist(two_stage_tl_realization(design, common.f0), common.emit_netlist);
    std::cerr << "netlist written to " << common.emit_netlist << "\n";
  }
  return 0;
}

int run_synth_star_triangle(const SynthCommon& common, const std::string& root_policy) {
  const Complex z_in = parse_complex(common.zin);
  const Complex z_c = parse_complex(common.zc);
  const SymmetricArrayModel model{3, z_in, z_c};

  RootPolicy policy = RootPolicy::min_abs_bc();
  if (!root_policy.empty() && root_policy != "min-bc") {
    if (root_policy.rfind("index=", 0) == 0) {
      policy = RootPolicy::by_index(std::stoi(root_policy.substr(6)));
    } else {
      throw ParseError("root policy must be min-bc or index=K");
    }
  }
  const StarTriangleDesign design = synth_star_triangle(model, common.z0, policy, common.f0);
  emit(std::cout, design_csv(design));
  if (!common.emit_netlist.empty()) {
    write_netlist(star_triangle_tl_realization(design, common.f0), common.emit_netlist);
    std::cerr << "netlist written to " << common.emit_netlist << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DMN synthesis and analysis toolkit for compact UCAs"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "closed-form DMN synthesis");
  synth->require_subcommand(1);
  SynthCommon sc;
  std::string branch, root_policy;

  auto* two_stage = synth->add_subcommand("two-stage", "two-stage DMN (B1..B5)");
  two_stage->add_option("--zin", sc.zin, "self impedance, RE+IMj ohms")->required();
  two_stage->add_option("--zc", sc.zc, "coupling impedance, RE+IMj ohms")->required();
  two_stage->add_option("--z0", sc.z0, "port reference impedance");
  two_stage->add_option("--f0", sc.f0, "design frequency in Hz");
  two_stage->add_option("--branch", branch, "sign branch: pp, pm, mp or mm");
  two_stage->add_option("--emit-netlist", sc.emit_netlist, "write the TL realization here");

  auto* star = synth->add_subcommand("star-triangle", "star-triangle DMN (Ba..Bt, Bc)");
  star->add_option("--zin", sc.zin, "self impedance, RE+IMj ohms")->required();
  star->add_option("--zc", sc.zc, "coupling impedance, RE+IMj ohms")->required();
  star->add_option("--z0", sc.z0, "port reference impedance");
  star->add_option("--f0", sc.f0, "design frequency in Hz");
  star->add_option("--root-policy", root_policy, "min-bc or index=K");
  star->add_option("--emit-netlist", sc.emit_netlist, "write the TL realization here");

  // model
  auto* model_cmd = app.add_subcommand("model", "antenna model export");
  model_cmd->require_subcommand(1);
  auto* uca_cmd = model_cmd->add_subcommand("uca", "CMS impedance model of a UCA");
  int uca_n = 3;
  double uca_radius = 0.1, uca_f0 = 3.6e9, uca_from = 0.0, uca_to = 0.0;
  int uca_points = 1;
  std::string emit_z;
  uca_cmd->add_option("--n", uca_n, "element count");
  uca_cmd->add_option("--radius-wl", uca_radius, "ring radius in wavelengths");
  uca_cmd->add_option("--f0", uca_f0, "design frequency in Hz");
  uca_cmd->add_option("--from", uca_from, "sweep start in Hz (default: single point at f0)");
  uca_cmd->add_option("--to", uca_to, "sweep stop in Hz");
  uca_cmd->add_option("--points", uca_points, "sweep point count");
  uca_cmd->add_option("--emit-z", emit_z, "write impedance matrix as Touchstone .sNp");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep a DMN netlist against an antenna");
  std::string sweep_dmn, sweep_antenna, sweep_out;
  double sweep_from = 3.4e9, sweep_to = 3.8e9, sweep_threshold = -16.0, sweep_z0 = 50.0;
  int sweep_points = 401;
  sweep_cmd->add_option("--dmn", sweep_dmn, "DMN netlist path")->required();
  sweep_cmd->add_option("--antenna", sweep_antenna, "antenna Touchstone path")->required();
  sweep_cmd->add_option("--from", sweep_from, "start frequency in Hz");
  sweep_cmd->add_option("--to", sweep_to, "stop frequency in Hz");
  sweep_cmd->add_option("--points", sweep_points, "number of samples");
  sweep_cmd->add_option("--out", sweep_out, "output path (.sNp or .csv)")->required();
  sweep_cmd->add_option("--threshold-db", sweep_threshold, "band report threshold");
  sweep_cmd->add_option("--z0", sweep_z0, "port reference impedance");

  // scan-gain
  auto* scan_cmd = app.add_subcommand("scan-gain", "azimuthal scan-gain curve");
  std::string scan_engine = "ideal", scan_out = "-", scan_dmn;
  double scan_theta_deg = 70.0, scan_radius = 0.1, scan_z0 = 50.0, scan_f = 0.0;
  int scan_n = 3, scan_n_phi = 360;
  scan_cmd->add_option("--engine", scan_engine, "ideal | unmatched | network")->required();
  scan_cmd->add_option("--theta-deg", scan_theta_deg, "polar cut in degrees");
  scan_cmd->add_option("--n", scan_n, "element count");
  scan_cmd->add_option("--radius-wl", scan_radius, "ring radius in wavelengths");
  scan_cmd->add_option("--n-phi", scan_n_phi, "azimuth sample count");
  scan_cmd->add_option("--z0", scan_z0, "source impedance");
  scan_cmd->add_option("--dmn", scan_dmn, "DMN netlist (network engine)");
  scan_cmd->add_option("--f", scan_f, "evaluation frequency (network engine; default f0)");
  scan_cmd->add_option("--out", scan_out, "CSV output path or - for stdout");

  // optimize
  auto* opt_cmd = app.add_subcommand("optimize", "numerical DMN optimization");
  opt_cmd->require_subcommand(1);
  auto* neut_cmd = opt_cmd->add_subcommand("neutralization", "neutralization-lines DMN");
  int neut_n = 3, neut_budget = 10000;
  double neut_radius = 0.1, neut_f0 = 3.6e9, neut_band_pct = 1.0, neut_target = -16.0;
  double neut_z0 = 50.0;
  std::uint64_t neut_seed = 1;
  std::string neut_out, neut_log;
  neut_cmd->add_option("--n", neut_n, "element count (3 or 4)");
  neut_cmd->add_option("--radius-wl", neut_radius, "ring radius in wavelengths");
  neut_cmd->add_option("--f0", neut_f0, "center frequency in Hz");
  neut_cmd->add_option("--band-pct", neut_band_pct, "half band width in percent of f0");
  neut_cmd->add_option("--target-db", neut_target, "matching/decoupling goal");
  neut_cmd->add_option("--budget", neut_budget, "objective evaluation budget");
  neut_cmd->add_option("--seed", neut_seed, "optimizer seed");
  neut_cmd->add_option("--out", neut_out, "write the optimized netlist-style design");
  neut_cmd->add_option("--log", neut_log, "write the optimizer trace CSV");

  // convert
  auto* conv_cmd = app.add_subcommand("convert", "touchstone representation conversion");
  std::string conv_in, conv_out, conv_to = "s", conv_format = "ri";
  double conv_z0 = 50.0;
  conv_cmd->add_option("--in", conv_in, "input Touchstone path")->required();
  conv_cmd->add_option("--to", conv_to, "target representation: s | y | z")->required();
  conv_cmd->add_option("--z0", conv_z0, "reference impedance for S");
  conv_cmd->add_option("--out", conv_out, "output Touchstone path")->required();
  conv_cmd->add_option("--format", conv_format, "ri | ma | db");

  CLI11_PARSE(app, argc, argv);

  try {
    if (two_stage->parsed()) return run_synth_two_stage(sc, branch);
    if (star->parsed()) return run_synth_star_triangle(sc, root_policy);

    if (uca_cmd->parsed()) {
      const UcaGeometry geom(uca_n, uca_radius);
      const ComplexMatrix z_a = cms_impedance_matrix(geom);
      const double f_lo = uca_from > 0.0 ? uca_from : uca_f0;
      const double f_hi = uca_to > 0.0 ? uca_to : uca_f0;
      const FrequencySweep sweep = constant_antenna_sweep(z_a, f_lo, f_hi, uca_points);
      if (!emit_z.empty()) {
        write_touchstone(sweep, emit_z, TouchstoneFormat::RI,
                         {" dmnkit CMS impedance model (ohms, normalized per Touchstone v1)"});
        std::cerr << "model written to " << emit_z << "\n";
      } else {
        std::string out = "entry,re_ohm,im_ohm\n";
        for (int r = 0; r < geom.n_elements; ++r) {
          for (int c = 0; c < geom.n_elements; ++c) {
            out += "z" + std::to_string(r + 1) + std::to_string(c + 1) + "," +
                   textio::format_number(z_a(r, c).real()) + "," +
                   textio::format_number(z_a(r, c).imag()) + "\n";
          }
        }
        emit(std::cout, out);
      }
      return 0;
    }

    if (sweep_cmd->parsed()) {
      const Netlist dmn = read_netlist(sweep_dmn);
      const FrequencySweep antenna = read_touchstone(sweep_antenna);
      std::vector<MultiportNetwork> pts;
      for (int i = 0; i < sweep_points; ++i) {
        const double f = sweep_points > 1
                             ? sweep_from + (sweep_to - sweep_from) * i / (sweep_points - 1)
                             : sweep_from;
        pts.push_back(combined_s(dmn, antenna, f, sweep_z0));
      }
      const FrequencySweep result(std::move(pts));
      if (sweep_out.size() > 4 && sweep_out.substr(sweep_out.size() - 4) == ".csv") {
        write_sweep_csv(result, sweep_out);
      } else {
        write_touchstone(result, sweep_out, TouchstoneFormat::RI);
      }
      std::string bands_csv = "f_lo_hz,f_hi_hz\n";
      for (const Band& band :
           band_below_threshold(result, sweep_threshold, BandEntries::Both)) {
        bands_csv += textio::format_number(band.f_lo) + "," +
                     textio::format_number(band.f_hi) + "\n";
      }
      emit(std::cout, bands_csv);
      return 0;
    }

    if (scan_cmd->parsed()) {
      const UcaGeometry geom(scan_n, scan_radius);
      const OverlapMatrix overlap = overlap_matrix(geom);
      const double theta = deg_to_rad(scan_theta_deg);
      GainCurve curve;
      if (scan_engine == "ideal") {
        curve = scan_gain_curve_ideal(geom, overlap, theta, scan_n_phi);
      } else if (scan_engine == "unmatched") {
        curve = scan_gain_curve_unmatched(cms_impedance_matrix(geom), geom, overlap, scan_z0,
                                          theta, scan_n_phi);
      } else if (scan_engine == "network") {
        if (scan_dmn.empty()) throw Error("scan-gain: network engine needs --dmn");
        const Netlist dmn = read_netlist(scan_dmn);
        const double f = scan_f > 0.0 ? scan_f : dmn.f0;
        curve = scan_gain_curve_network(netlist_n_port(dmn, f), cms_impedance_matrix(geom),
                                        geom, overlap, scan_z0, theta, scan_n_phi);
      } else {
        throw ParseError("scan-gain: engine must be ideal, unmatched or network");
      }
      write_text_or_stdout(gain_curve_to_csv(curve), scan_out);
      return 0;
    }

    if (neut_cmd->parsed()) {
      const UcaGeometry geom(neut_n, neut_radius);
      const ComplexMatrix z_a = cms_impedance_matrix(geom);
      const FrequencySweep antenna = constant_antenna_sweep(z_a, neut_f0, neut_f0, 1);
      ObjectiveSpec spec;
      spec.f_lo = neut_f0 * (1.0 - neut_band_pct / 100.0);
      spec.f_hi = neut_f0 * (1.0 + neut_band_pct / 100.0);
      spec.target_db = neut_target;
      const NeutralizationResult result =
          optimize_neutralization(geom, antenna, spec, neut_seed, neut_budget, neut_z0);
      std::string out = "name,value\n";
      out += "objective," + textio::format_number(result.objective) + "\n";
      out += "worst_db," + textio::format_number(result.worst_db) + "\n";
      out += "feasible," + std::string(result.feasible ? "1" : "0") + "\n";
      out += "evaluations," + std::to_string(result.evaluations) + "\n";
      out += "dec_z," + textio::format_number(result.design.tl_dec.z_c) + "\n";
      out += "dec_theta," + textio::format_number(result.design.tl_dec.electrical_length_at_f0) +
             "\n";
      out += "ant_z," + textio::format_number(result.design.tl_ant.z_c) + "\n";
      out += "ant_theta," + textio::format_number(result.design.tl_ant.electrical_length_at_f0) +
             "\n";
      out += "port_z," + textio::format_number(result.design.tl_port.z_c) + "\n";
      out +=
          "port_theta," + textio::format_number(result.design.tl_port.electrical_length_at_f0) +
          "\n";
      emit(std::cout, out);
      if (!neut_log.empty()) write_optimizer_log_csv(result.log, neut_log);
      if (!neut_out.empty()) {
        // Persist as a netlist with the ring topology spelled out.
        Netlist nl;
        nl.name = "neutralization DMN";
        nl.f0 = neut_f0;
        nl.n_nodes = 2 * neut_n;
        for (int i = 0; i < 2 * neut_n; ++i) nl.ports.push_back(i);
        nl.groups = {{result.design.tl_ant.z_c, result.design.tl_ant.electrical_length_at_f0},
                     {result.design.tl_port.z_c, result.design.tl_port.electrical_length_at_f0},
                     {result.design.tl_dec.z_c, result.design.tl_dec.electrical_length_at_f0}};
        for (int i = 0; i < neut_n; ++i) {
          const int inner = nl.add_node();
          nl.segments.push_back({0, i, inner});
          nl.segments.push_back({1, inner, neut_n + i});
        }
        for (int i = 0; i < neut_n; ++i) {
          nl.segments.push_back({2, 2 * neut_n + i, 2 * neut_n + (i + 1) % neut_n});
        }
        write_netlist(nl, neut_out);
        std::cerr << "design written to " << neut_out << "\n";
      }
      if (!result.feasible) std::cerr << "goal not met within budget\n";
      return 0;
    }

    if (conv_cmd->parsed()) {
      const TouchstoneData data = read_touchstone_file(conv_in);
      Repr target = Repr::S;
      if (conv_to == "s" || conv_to == "S") target = Repr::S;
      else if (conv_to == "y" || conv_to == "Y") target = Repr::Y;
      else if (conv_to == "z" || conv_to == "Z") target = Repr::Z;
      else throw ParseError("convert: --to must be s, y or z");
      std::vector<MultiportNetwork> pts;
      for (const MultiportNetwork& p : data.sweep.points) {
        pts.push_back(convert(p, target, conv_z0));
      }
      write_touchstone(FrequencySweep(std::move(pts)), conv_out, parse_format(conv_format),
                       data.comments);
      return 0;
    }
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const NoRealRoot& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const AllRootsDegenerate& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what();
    if (e.line() > 0) std::cerr << " (line " << e.line() << ")";
    std::cerr << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
