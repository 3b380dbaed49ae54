#pragma once

// Endmember CSV and per-pixel map export (CSV / plain-P2 PGM). All text output
// uses '.' decimals and "%.17g" precision so files are byte-stable across runs.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "unmix/envi.hpp"  // detail::trim, parse_double_strict
#include "unmix/mathutil.hpp"
#include "unmix/types.hpp"

namespace unmix {

enum class MapFormat { csv, pgm };

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace detail

inline EndmemberSet read_endmembers_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open endmember CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) throw io_error("endmember CSV is empty: " + path);
  EndmemberSet e;
  e.names = detail::split_csv(line);
  if (e.names.size() < 2) throw io_error("endmember CSV needs M >= 2 columns");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split_csv(line);
    if (cells.size() != e.names.size())
      throw io_error("endmember CSV has a ragged row (expected " +
                     std::to_string(e.names.size()) + " cells, got " + std::to_string(cells.size()) + ")");
    std::vector<double> row;
    for (auto& c : cells) row.push_back(detail::parse_double_strict(c, "endmember CSV"));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw io_error("endmember CSV has no band rows");

  e.bands = static_cast<int>(rows.size());
  e.spectra.resize(static_cast<std::size_t>(e.bands) * e.count());
  for (int b = 0; b < e.bands; ++b)
    for (int m = 0; m < e.count(); ++m) e.at(b, m) = rows[b][m];
  e.validate();
  return e;
}

inline void write_endmembers_csv(const EndmemberSet& e, const std::string& path) {
  e.validate();
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path);
  for (int m = 0; m < e.count(); ++m) out << (m ? "," : "") << e.names[m];
  out << "\n";
  for (int b = 0; b < e.bands; ++b) {
    for (int m = 0; m < e.count(); ++m) out << (m ? "," : "") << format_full(e.at(b, m));
    out << "\n";
  }
  if (!out) throw io_error("failed writing endmember CSV: " + path);
}

inline std::string map_to_csv(const MapF64& map) {
  std::string out;
  for (int r = 0; r < map.rows; ++r) {
    for (int c = 0; c < map.cols; ++c) {
      if (c) out += ",";
      out += format_full(map.at(r, c));
    }
    out += "\n";
  }
  return out;
}

// Plain P2 PGM, min-max scaled to 0..255; a constant map renders as all 0.
// The comment line records the scaling so values are recoverable.
inline std::string map_to_pgm(const MapF64& map) {
  double lo = map.values[0], hi = map.values[0];
  for (double v : map.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::string out = "P2\n# min=" + format_full(lo) + " max=" + format_full(hi) + "\n" +
                    std::to_string(map.cols) + " " + std::to_string(map.rows) + "\n255\n";
  for (int r = 0; r < map.rows; ++r) {
    for (int c = 0; c < map.cols; ++c) {
      long px = 0;
      if (hi > lo) px = std::lround((map.at(r, c) - lo) / (hi - lo) * 255.0);
      if (c) out += " ";
      out += std::to_string(px);
    }
    out += "\n";
  }
  return out;
}

inline void write_map(const MapF64& map, const std::string& path, MapFormat format) {
  map.validate();
  std::string body = (format == MapFormat::csv) ? map_to_csv(map) : map_to_pgm(map);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw io_error("failed writing map: " + path);
}

}  // namespace unmix
