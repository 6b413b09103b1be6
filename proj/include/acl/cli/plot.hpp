#pragma once

#include "acl/cli/table.hpp"

#include <algorithm>
#include <fstream>
#include <string>

namespace acl::cli {

/// "M" entry of a key=value;... params cell, or empty.
inline std::string param_value(const std::string& params, const std::string& key) {
  std::size_t pos = 0;
  while (pos <= params.size()) {
    const auto end = std::min(params.find(';', pos), params.size());
    const std::string item = params.substr(pos, end - pos);
    if (item.rfind(key + "=", 0) == 0) return item.substr(key.size() + 1);
    pos = end + 1;
  }
  return {};
}

/// Picks x from M or m (or M inside params) and y from the first ratio-like column
/// (observed/predicted for count tables).
inline bool plot_columns(const Table& t, std::size_t& x, std::size_t& y, bool& divide) {
  x = t.column("M");
  if (x == t.header.size()) x = t.column("m");
  if (x == t.header.size()) x = t.column("params");
  divide = false;
  for (const char* name : {"ratio", "ratio_or_dev", "ratio_error"}) {
    y = t.column(name);
    if (y != t.header.size()) break;
  }
  if (y == t.header.size() && t.column("observed") != t.header.size()) {
    y = t.column("observed");
    divide = true;
  }
  return x != t.header.size() && y != t.header.size();
}

/// Writes PREFIX.dat (two columns) and PREFIX.gp (a gnuplot script reading it).
inline bool write_plot(const std::string& prefix, const Table& t, const std::string& title) {
  std::size_t x = 0, y = 0;
  bool divide = false;
  if (!plot_columns(t, x, y, divide)) return false;
  const std::size_t pred = t.column("predicted");
  std::ofstream dat(prefix + ".dat", std::ios::binary);
  const std::string xname = t.header[x] == "params" ? "M" : t.header[x];
  dat << "# " << xname << ' ' << (divide ? "observed/predicted" : t.header[y]) << '\n';
  for (const auto& row : t.rows) {
    std::string value = row[y].text;
    if (divide) {
      const Rational p = parse_rational(row[pred].text);
      if (p == 0) continue;
      value = to_string(to_real(parse_rational(row[y].text) / p), 12);
    }
    const std::string xv = t.header[x] == "params" ? param_value(row[x].text, "M") : row[x].text;
    if (xv.empty() || value.empty()) continue;
    dat << xv << ' ' << value << '\n';
  }
  const std::string dat_name = prefix.substr(prefix.find_last_of('/') + 1) + ".dat";
  std::ofstream gp(prefix + ".gp", std::ios::binary);
  gp << "set title '" << title << "'\n"
     << "set logscale x\n"
     << "set xlabel '" << xname << "'\n"
     << "set ylabel '" << (divide ? "observed/predicted" : t.header[y]) << "'\n"
     << "set grid\n"
     << "plot '" << dat_name << "' using 1:2 with linespoints title '" << title << "'\n";
  return static_cast<bool>(dat) && static_cast<bool>(gp);
}

}  // namespace acl::cli
