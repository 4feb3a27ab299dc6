// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#include "dmnkit/touchstone.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "dmnkit/errors.hpp"
#include "textio.hpp"

namespace dmnkit {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

int ports_from_extension(const std::filesystem::path& path) {
  const std::string ext = upper(path.extension().string());
  if (ext.size() >= 3 && ext.front() == '.' && ext[1] == 'S' && ext.back() == 'P') {
    const std::string digits = ext.substr(2, ext.size() - 3);
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(),
                                       [](unsigned char c) { return std::isdigit(c); })) {
      return std::stoi(digits);
    }
  }
  throw ParseError("touchstone: cannot determine port count from extension of " +
                   path.string());
}

struct OptionLine {
  double unit_scale = 1e9;  // GHz default
  Repr repr = Repr::S;
  TouchstoneFormat format = TouchstoneFormat::MA;
  double resistance = 50.0;
};

OptionLine parse_option_line(const std::vector<std::string_view>& tokens, int line_no) {
  OptionLine opt;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const std::string t = upper(tokens[i]);
    if (t == "HZ") opt.unit_scale = 1.0;
    else if (t == "KHZ") opt.unit_scale = 1e3;
    else if (t == "MHZ") opt.unit_scale = 1e6;
    else if (t == "GHZ") opt.unit_scale = 1e9;
    else if (t == "S") opt.repr = Repr::S;
    else if (t == "Y") opt.repr = Repr::Y;
    else if (t == "Z") opt.repr = Repr::Z;
    else if (t == "H" || t == "G")
      throw ParseError("touchstone: H/G parameters unsupported", line_no);
    else if (t == "RI") opt.format = TouchstoneFormat::RI;
    else if (t == "MA") opt.format = TouchstoneFormat::MA;
    else if (t == "DB") opt.format = TouchstoneFormat::DB;
    else if (t == "R") {
      if (i + 1 >= tokens.size()) throw ParseError("touchstone: R without value", line_no);
      const auto r = textio::parse_number(tokens[++i]);
      if (!r || !(*r > 0.0)) throw ParseError("touchstone: bad reference resistance", line_no);
      opt.resistance = *r;
    } else {
      throw ParseError("touchstone: unknown option token '" + t + "'", line_no);
    }
  }
  return opt;
}

Complex decode_value(double first, double second, TouchstoneFormat format) {
  switch (format) {
    case TouchstoneFormat::RI:
      return {first, second};
    case TouchstoneFormat::MA:
      return std::polar(first, deg_to_rad(second));
    case TouchstoneFormat::DB:
      return std::polar(from_db(first), deg_to_rad(second));
  }
  throw Error("touchstone: unknown format");
}

void encode_value(Complex v, TouchstoneFormat format, double& first, double& second) {
  switch (format) {
    case TouchstoneFormat::RI:
      first = v.real();
      second = v.imag();
      return;
    case TouchstoneFormat::MA:
      first = std::abs(v);
      second = rad_to_deg(std::arg(v));
      return;
    case TouchstoneFormat::DB:
      first = to_db(std::abs(v));
      second = rad_to_deg(std::arg(v));
      return;
  }
  throw Error("touchstone: unknown format");
}

// Matrix slot for the k-th complex value of a row. Two-port files use the
// transposed S11 S21 S12 S22 order; everything else is row-major.
std::pair<int, int> value_slot(int k, int n) {
  if (n == 2) {
    constexpr std::pair<int, int> order[4] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    return order[k];
  }
  return {k / n, k % n};
}

}  // namespace

TouchstoneData touchstone_from_string(const std::string& text, int n_ports) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_option = false;
  OptionLine opt;
  TouchstoneData data;

  struct Token {
    double value;
    int line;
  };
  std::vector<Token> numbers;

  while (std::getline(in, line)) {
    ++line_no;
    // Strip trailing '!' comments.
    if (const auto bang = line.find('!'); bang != std::string::npos) {
      if (bang == 0 || textio::split_tokens(line.substr(0, bang)).empty()) {
        data.comments.push_back(line.substr(bang + 1));
        continue;
      }
      line = line.substr(0, bang);
    }
    const auto tokens = textio::split_tokens(line);
    if (tokens.empty()) continue;
    if (tokens[0].front() == '[') {
      throw ParseError("touchstone: version 2 keyword '" + std::string(tokens[0]) +
                           "' unsupported (this reader is Touchstone v1 only)",
                       line_no);
    }
    if (tokens[0].front() == '#') {
      if (have_option) throw ParseError("touchstone: repeated option line", line_no);
      // Allow both "#GHz" and "# GHz" spellings.
      std::vector<std::string_view> opt_tokens = tokens;
      if (tokens[0].size() > 1) opt_tokens.insert(opt_tokens.begin() + 1, tokens[0].substr(1));
      opt = parse_option_line(opt_tokens, line_no);
      have_option = true;
      continue;
    }
    for (const auto& t : tokens) {
      const auto v = textio::parse_number(t);
      if (!v) throw ParseError("touchstone: bad number '" + std::string(t) + "'", line_no);
      numbers.push_back({*v, line_no});
    }
  }

  const int row_len = 1 + 2 * n_ports * n_ports;
  if (numbers.empty()) throw ParseError("touchstone: no data rows", line_no);
  if (numbers.size() % row_len != 0) {
    const int row_start = static_cast<int>(numbers.size()) / row_len * row_len;
    throw ArityError("touchstone: data row has wrong value count (need " +
                         std::to_string(row_len) + " per row)",
                     numbers[row_start].line);
  }

  std::vector<MultiportNetwork> points;
  for (std::size_t base = 0; base < numbers.size(); base += row_len) {
    const double freq = numbers[base].value * opt.unit_scale;
    ComplexMatrix m(n_ports, n_ports);
    for (int k = 0; k < n_ports * n_ports; ++k) {
      const auto [r, c] = value_slot(k, n_ports);
      m(r, c) = decode_value(numbers[base + 1 + 2 * k].value, numbers[base + 2 + 2 * k].value,
                             opt.format);
    }
    switch (opt.repr) {
      case Repr::S:
        points.push_back(make_s(freq, std::move(m), opt.resistance));
        break;
      case Repr::Z:
        points.push_back(make_z(freq, m * opt.resistance));
        break;
      case Repr::Y:
        points.push_back(make_y(freq, m / opt.resistance));
        break;
    }
  }
  try {
    data.sweep = FrequencySweep(std::move(points));
  } catch (const Error& e) {
    throw ParseError(std::string("touchstone: ") + e.what());
  }
  return data;
}

TouchstoneData read_touchstone_file(const std::filesystem::path& path) {
  return touchstone_from_string(textio::read_file(path), ports_from_extension(path));
}

FrequencySweep read_touchstone(const std::filesystem::path& path) {
  return read_touchstone_file(path).sweep;
}

std::string touchstone_to_string(const FrequencySweep& sweep, TouchstoneFormat format,
                                 const std::vector<std::string>& comments) {
  if (sweep.empty()) throw EmptySweep("write_touchstone: empty sweep");
  const int n = sweep.n_ports();
  const Repr repr = sweep.repr();
  double resistance = 50.0;
  if (repr == Repr::S) {
    resistance = sweep.points.front().ref_impedance;
    for (const MultiportNetwork& p : sweep.points) {
      if (p.ref_impedance != resistance) {
        throw Error("write_touchstone: mixed reference impedances");
      }
    }
  }

  std::ostringstream out;
  for (const std::string& c : comments) out << "!" << c << "\n";
  out << "# Hz " << (repr == Repr::S ? "S" : repr == Repr::Z ? "Z" : "Y") << " "
      << (format == TouchstoneFormat::RI ? "RI" : format == TouchstoneFormat::MA ? "MA" : "DB")
      << " R " << textio::format_number(resistance) << "\n";

  for (const MultiportNetwork& p : sweep.points) {
    out << textio::format_number(p.freq);
    int on_line = 0;
    for (int k = 0; k < n * n; ++k) {
      const auto [r, c] = value_slot(k, n);
      Complex value = p.matrix(r, c);
      if (repr == Repr::Z) value /= resistance;
      if (repr == Repr::Y) value *= resistance;
      double first = 0.0, second = 0.0;
      encode_value(value, format, first, second);
      // v1 layout: up to four complex pairs per line, and for n >= 3 each
      // matrix row starts a fresh continuation line.
      const bool new_row = n >= 3 && c == 0 && k > 0;
      if (new_row || on_line == 4) {
        out << "\n ";
        on_line = 0;
      }
      out << " " << textio::format_number(first) << " " << textio::format_number(second);
      ++on_line;
    }
    out << "\n";
  }
  return out.str();
}

void write_touchstone(const FrequencySweep& sweep, const std::filesystem::path& path,
                      TouchstoneFormat format, const std::vector<std::string>& comments) {
  const int n_ext = ports_from_extension(path);
  if (n_ext != sweep.n_ports()) {
    throw Error("write_touchstone: extension port count does not match sweep");
  }
  textio::atomic_write(path, touchstone_to_string(sweep, format, comments));
}

}  // namespace dmnkit
