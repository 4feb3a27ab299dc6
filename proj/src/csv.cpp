// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#include "dmnkit/csv.hpp"

#include <sstream>

#include "dmnkit/errors.hpp"
#include "textio.hpp"

namespace dmnkit {

std::string sweep_to_csv(const FrequencySweep& sweep) {
  if (sweep.empty()) throw EmptySweep("sweep_to_csv: empty sweep");
  if (sweep.repr() != Repr::S) throw Error("sweep_to_csv: sweep must be in S representation");
  const int n = sweep.n_ports();

  std::ostringstream out;
  out << "freq_hz";
  for (int r = 1; r <= n; ++r) {
    for (int c = 1; c <= n; ++c) {
      out << ",s" << r << c << "_db,s" << r << c << "_deg";
    }
  }
  out << "\n";
  for (const MultiportNetwork& p : sweep.points) {
    out << textio::format_number(p.freq);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        const Complex v = p.matrix(r, c);
        out << "," << textio::format_number(to_db(std::abs(v))) << ","
            << textio::format_number(rad_to_deg(std::arg(v)));
      }
    }
    out << "\n";
  }
  return out.str();
}

void write_sweep_csv(const FrequencySweep& sweep, const std::filesystem::path& path) {
  textio::atomic_write(path, sweep_to_csv(sweep));
}

std::string gain_curve_to_csv(const GainCurve& curve) {
  if (curve.samples.empty()) throw Error("gain_curve_to_csv: empty curve");
  const int n = static_cast<int>(curve.samples.front().weights.size());

  std::ostringstream out;
  out << "phi0_deg,gain_dbi";
  for (int i = 1; i <= n; ++i) out << ",re_w" << i << ",im_w" << i;
  out << "\n";
  for (const GainSample& s : curve.samples) {
    out << textio::format_number(rad_to_deg(s.phi0)) << ","
        << textio::format_number(s.gain_dbi);
    for (int i = 0; i < n; ++i) {
      out << "," << textio::format_number(s.weights(i).real()) << ","
          << textio::format_number(s.weights(i).imag());
    }
    out << "\n";
  }
  return out.str();
}

void write_gain_curve_csv(const GainCurve& curve, const std::filesystem::path& path) {
  textio::atomic_write(path, gain_curve_to_csv(curve));
}

std::string optimizer_log_to_csv(const std::vector<SimplexLogEntry>& log) {
  std::ostringstream out;
  const int n = log.empty() ? 0 : static_cast<int>(log.front().x.size());
  out << "iter,objective_db";
  for (int i = 1; i <= n; ++i) out << ",param" << i;
  out << "\n";
  for (const SimplexLogEntry& e : log) {
    out << e.evaluations << "," << textio::format_number(e.best_objective);
    for (int i = 0; i < e.x.size(); ++i) out << "," << textio::format_number(e.x(i));
    out << "\n";
  }
  return out.str();
}

void write_optimizer_log_csv(const std::vector<SimplexLogEntry>& log,
                             const std::filesystem::path& path) {
  textio::atomic_write(path, optimizer_log_to_csv(log));
}

}  // namespace dmnkit
