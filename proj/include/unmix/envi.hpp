#pragma once

// ENVI raster I/O: text header (`key = value`, brace lists may span lines) plus a
// companion raw file. Reading accepts data types 4 (float32) and 12 (uint16,
// scaled by `reflectance scale factor`, default 10000) in bsq/bil/bip interleave;
// the in-memory cube is always band-sequential. Writing emits bsq float32,
// little-endian, to the path obtained by stripping the header's ".hdr" suffix.

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "unmix/mathutil.hpp"
#include "unmix/types.hpp"

static_assert(std::endian::native == std::endian::little,
              "ENVI I/O assumes a little-endian host");

namespace unmix {
namespace detail {

inline std::string trim(std::string s) {
  const char* ws = " \t\r\n\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

inline long parse_long(const std::string& s, const std::string& key) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (...) {
    throw io_error("ENVI header: cannot parse '" + key + "' value '" + s + "'");
  }
  if (trim(s.substr(pos)) != "") throw io_error("ENVI header: cannot parse '" + key + "' value '" + s + "'");
  return v;
}

inline double parse_double_strict(const std::string& s, const std::string& context) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (...) {
    throw io_error(context + ": cannot parse number '" + s + "'");
  }
  if (trim(s.substr(pos)) != "") throw io_error(context + ": cannot parse number '" + s + "'");
  return v;
}

// key/value pairs in file order; values have surrounding braces removed.
inline std::vector<std::pair<std::string, std::string>> parse_envi_header(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    if (first && t == "ENVI") {
      first = false;
      continue;
    }
    first = false;
    auto eq = t.find('=');
    if (eq == std::string::npos) throw io_error("ENVI header: line without '=': '" + t + "'");
    std::string key = lower(trim(t.substr(0, eq)));
    std::string val = trim(t.substr(eq + 1));
    if (!val.empty() && val.front() == '{') {
      while (val.find('}') == std::string::npos) {
        if (!std::getline(in, line)) throw io_error("ENVI header: unterminated '{' in key '" + key + "'");
        val += " " + trim(line);
      }
      auto close = val.find('}');
      val = trim(val.substr(1, close - 1));
    }
    out.emplace_back(key, val);
  }
  return out;
}

inline std::string data_path_for_write(const std::string& header_path) {
  if (header_path.size() < 5 || header_path.substr(header_path.size() - 4) != ".hdr")
    throw io_error("ENVI header path must end with '.hdr': " + header_path);
  return header_path.substr(0, header_path.size() - 4);
}

inline std::string data_path_for_read(const std::string& header_path) {
  std::string stem = data_path_for_write(header_path);
  for (const char* suffix : {"", ".img", ".dat", ".raw"}) {
    std::string candidate = stem + suffix;
    if (std::filesystem::exists(candidate)) return candidate;
  }
  throw io_error("ENVI raw data file not found next to header: " + header_path);
}

}  // namespace detail

inline Cube read_envi_cube(const std::string& header_path) {
  std::ifstream hdr(header_path);
  if (!hdr) throw io_error("cannot open ENVI header: " + header_path);
  std::stringstream buf;
  buf << hdr.rdbuf();
  auto kv = detail::parse_envi_header(buf.str());

  auto get = [&](const std::string& key) -> const std::string* {
    for (auto& [k, v] : kv)
      if (k == key) return &v;
    return nullptr;
  };
  auto require = [&](const std::string& key) -> const std::string& {
    const std::string* v = get(key);
    if (!v) throw io_error("ENVI header missing required key '" + key + "'");
    return *v;
  };

  long samples = detail::parse_long(require("samples"), "samples");
  long lines = detail::parse_long(require("lines"), "lines");
  long bands = detail::parse_long(require("bands"), "bands");
  long dtype = detail::parse_long(require("data type"), "data type");
  std::string interleave = detail::lower(require("interleave"));
  long byte_order = detail::parse_long(require("byte order"), "byte order");
  long offset = get("header offset") ? detail::parse_long(*get("header offset"), "header offset") : 0;

  if (bands < 1) throw io_error("bands must be >= 1");
  if (samples < 1 || lines < 1) throw io_error("samples and lines must be >= 1");
  if (byte_order != 0) throw io_error("only little-endian ENVI files are supported (byte order = 0)");
  if (dtype != 4 && dtype != 12) throw io_error("unsupported ENVI data type " + std::to_string(dtype) + " (4 and 12 supported)");
  if (interleave != "bsq" && interleave != "bil" && interleave != "bip")
    throw io_error("unsupported interleave '" + interleave + "'");
  if (offset < 0) throw io_error("negative header offset");

  double scale = 10000.0;
  if (const std::string* s = get("reflectance scale factor"))
    scale = detail::parse_double_strict(*s, "reflectance scale factor");
  if (!(scale > 0.0)) throw io_error("reflectance scale factor must be > 0");

  Cube cube;
  cube.bands = static_cast<int>(bands);
  cube.rows = static_cast<int>(lines);
  cube.cols = static_cast<int>(samples);

  if (const std::string* w = get("wavelength")) {
    std::stringstream ws(*w);
    std::string item;
    while (std::getline(ws, item, ',')) {
      item = detail::trim(item);
      if (item.empty()) continue;
      cube.wavelengths.push_back(detail::parse_double_strict(item, "wavelength"));
    }
    if (static_cast<long>(cube.wavelengths.size()) != bands)
      throw io_error("wavelength count does not match bands");
    for (std::size_t i = 1; i < cube.wavelengths.size(); ++i)
      if (!(cube.wavelengths[i] > cube.wavelengths[i - 1]))
        throw io_error("wavelengths must be strictly increasing");
  }

  std::string data_path = detail::data_path_for_read(header_path);
  std::size_t n = cube.size();
  std::size_t elem = (dtype == 4) ? 4 : 2;
  std::uintmax_t file_size = std::filesystem::file_size(data_path);
  if (file_size != static_cast<std::uintmax_t>(offset) + n * elem)
    throw io_error("ENVI raw file size mismatch: expected " +
                   std::to_string(offset + n * elem) + " bytes, found " + std::to_string(file_size));

  std::ifstream raw(data_path, std::ios::binary);
  if (!raw) throw io_error("cannot open ENVI raw file: " + data_path);
  raw.seekg(offset);
  std::vector<char> bytes(n * elem);
  raw.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!raw) throw io_error("short read from ENVI raw file: " + data_path);

  // Decode element i of the file into a double reflectance.
  auto value_at = [&](std::size_t i) -> double {
    if (dtype == 4) {
      float f;
      std::memcpy(&f, bytes.data() + i * 4, 4);
      return static_cast<double>(f);
    }
    std::uint16_t u;
    std::memcpy(&u, bytes.data() + i * 2, 2);
    return static_cast<double>(u) / scale;
  };

  cube.data.resize(n);
  const std::size_t R = cube.rows, C = cube.cols, B = cube.bands;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t b, r, c;
    if (interleave == "bsq") {
      b = i / (R * C);
      r = (i / C) % R;
      c = i % C;
    } else if (interleave == "bil") {  // line-major: [row][band][col]
      r = i / (B * C);
      b = (i / C) % B;
      c = i % C;
    } else {  // bip: [row][col][band]
      r = i / (B * C);
      c = (i / B) % C;
      b = i % B;
    }
    double v = value_at(i);
    if (!std::isfinite(v)) throw io_error("ENVI cube contains non-finite values");
    if (v < -0.05 || v > 1.5)
      throw io_error("reflectance " + format_full(v) + " outside tolerance band [-0.05, 1.5]");
    cube.data[(b * R + r) * C + c] = static_cast<float>(std::clamp(v, 0.0, 1.0));
  }
  cube.validate();
  return cube;
}

inline void write_envi_cube(const Cube& cube, const std::string& header_path) {
  cube.validate();  // rejects NaN / out-of-range before any bytes are written
  std::string data_path = detail::data_path_for_write(header_path);

  std::ofstream hdr(header_path);
  if (!hdr) throw io_error("cannot open for writing: " + header_path);
  hdr << "ENVI\n";
  hdr << "description = { hyperspectral reflectance cube }\n";
  hdr << "samples = " << cube.cols << "\n";
  hdr << "lines = " << cube.rows << "\n";
  hdr << "bands = " << cube.bands << "\n";
  hdr << "header offset = 0\n";
  hdr << "file type = ENVI Standard\n";
  hdr << "data type = 4\n";
  hdr << "interleave = bsq\n";
  hdr << "byte order = 0\n";
  if (!cube.wavelengths.empty()) {
    hdr << "wavelength = { ";
    for (std::size_t i = 0; i < cube.wavelengths.size(); ++i) {
      if (i) hdr << ", ";
      hdr << format_full(cube.wavelengths[i]);
    }
    hdr << " }\n";
  }
  if (!hdr) throw io_error("failed writing ENVI header: " + header_path);
  hdr.close();

  std::ofstream raw(data_path, std::ios::binary);
  if (!raw) throw io_error("cannot open for writing: " + data_path);
  raw.write(reinterpret_cast<const char*>(cube.data.data()),
            static_cast<std::streamsize>(cube.data.size() * sizeof(float)));
  if (!raw) throw io_error("failed writing ENVI raw data: " + data_path);
}

}  // namespace unmix
