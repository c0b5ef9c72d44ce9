// Touchstone v1 reader/writer for one- and two-port S-parameter data.
#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bfmatch/constants.hpp"

namespace bfmatch {

enum class TouchstoneFormat { ri, ma, db };

struct TouchstoneData {
  double resistance = 50.0;
  TouchstoneFormat format = TouchstoneFormat::ri;  // storage is always RI
  int ports = 1;
  std::vector<double> frequencies;       // Hz, strictly increasing
  std::vector<std::vector<cplx>> data;   // per frequency: S11 or S11 S21 S12 S22
};

class TouchstoneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string ts_diag(const std::string& name, size_t line, const std::string& msg) {
  std::ostringstream os;
  os << name << ":" << line << ": " << msg;
  return os.str();
}

inline std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

}  // namespace detail

inline TouchstoneData parse_touchstone(std::istream& in, const std::string& name = "<stream>") {
  TouchstoneData out;
  bool saw_options = false;
  double unit_scale = 1e9;  // Touchstone default unit is GHz
  TouchstoneFormat fmt = TouchstoneFormat::ma;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto bang = line.find('!'); bang != std::string::npos) line.erase(bang);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;  // blank or comment-only
    if (first == "#") {
      if (saw_options)
        throw TouchstoneError(detail::ts_diag(name, line_no, "duplicate option line"));
      if (!out.frequencies.empty())
        throw TouchstoneError(detail::ts_diag(name, line_no, "option line after data"));
      saw_options = true;
      std::string tok;
      while (ls >> tok) {
        const std::string t = detail::upper(tok);
        if (t == "HZ")
          unit_scale = 1.0;
        else if (t == "KHZ")
          unit_scale = 1e3;
        else if (t == "MHZ")
          unit_scale = 1e6;
        else if (t == "GHZ")
          unit_scale = 1e9;
        else if (t == "S") {
          // scattering parameters, the only supported type
        } else if (t == "Y" || t == "Z" || t == "H" || t == "G") {
          throw TouchstoneError(
              detail::ts_diag(name, line_no, "unsupported parameter type '" + tok + "'"));
        } else if (t == "RI")
          fmt = TouchstoneFormat::ri;
        else if (t == "MA")
          fmt = TouchstoneFormat::ma;
        else if (t == "DB")
          fmt = TouchstoneFormat::db;
        else if (t == "R") {
          if (!(ls >> out.resistance))
            throw TouchstoneError(detail::ts_diag(name, line_no, "missing resistance after R"));
        } else {
          throw TouchstoneError(
              detail::ts_diag(name, line_no, "unrecognized option token '" + tok + "'"));
        }
      }
      continue;
    }
    // Data row: frequency followed by 2 (one-port) or 8 (two-port) reals.
    std::vector<double> nums;
    {
      std::istringstream ds(line);
      double v;
      while (ds >> v) nums.push_back(v);
      std::string trailing;
      if (ds.clear(), ds >> trailing)
        throw TouchstoneError(detail::ts_diag(name, line_no, "non-numeric data token"));
    }
    if (nums.size() != 3 && nums.size() != 9)
      throw TouchstoneError(detail::ts_diag(
          name, line_no, "expected 3 (one-port) or 9 (two-port) values per row, got " +
                             std::to_string(nums.size())));
    const int row_ports = nums.size() == 3 ? 1 : 2;
    if (out.frequencies.empty())
      out.ports = row_ports;
    else if (row_ports != out.ports)
      throw TouchstoneError(detail::ts_diag(name, line_no, "inconsistent port count"));
    const double f = nums[0] * unit_scale;
    if (!out.frequencies.empty() && f <= out.frequencies.back())
      throw TouchstoneError(detail::ts_diag(name, line_no, "non-monotone frequency"));
    std::vector<cplx> row;
    for (size_t i = 1; i + 1 < nums.size(); i += 2) {
      const double a = nums[i], b = nums[i + 1];
      switch (fmt) {
        case TouchstoneFormat::ri:
          row.emplace_back(a, b);
          break;
        case TouchstoneFormat::ma:
          row.push_back(a * std::exp(kJ * (b * kPi / 180.0)));
          break;
        case TouchstoneFormat::db:
          row.push_back(std::pow(10.0, a / 20.0) * std::exp(kJ * (b * kPi / 180.0)));
          break;
      }
    }
    out.frequencies.push_back(f);
    out.data.push_back(std::move(row));
  }
  if (out.frequencies.empty())
    throw TouchstoneError(detail::ts_diag(name, line_no, "no data rows"));
  out.format = TouchstoneFormat::ri;  // normalized storage
  return out;
}

inline TouchstoneData ingest_touchstone(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TouchstoneError(path + ": cannot open file");
  return parse_touchstone(in, path);
}

// Writes normalized form: Hz, RI, full double precision. Round-trips exactly.
inline void write_touchstone(const TouchstoneData& ts, std::ostream& out) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", ts.resistance);
  out << "! " << (ts.ports == 2 ? "two" : "one") << "-port S-parameter data\n";
  out << "# Hz S RI R " << buf << "\n";
  for (size_t i = 0; i < ts.frequencies.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", ts.frequencies[i]);
    out << buf;
    for (const cplx& v : ts.data[i]) {
      std::snprintf(buf, sizeof buf, " %.17g %.17g", v.real(), v.imag());
      out << buf;
    }
    out << "\n";
  }
}

inline void write_touchstone(const TouchstoneData& ts, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw TouchstoneError(path + ": cannot open for writing");
  write_touchstone(ts, out);
}

}  // namespace bfmatch
