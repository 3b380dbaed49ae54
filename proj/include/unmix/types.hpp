#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace unmix {

// Exception categories; the CLI maps them to exit codes (config 2, io 3, numeric 4).
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Hyperspectral cube, band-sequential in memory: index = (band*rows + row)*cols + col.
/// Stored as 32-bit floats, reflectance in [0,1]; all computation is done in double.
struct Cube {
  int bands = 0;
  int rows = 0;
  int cols = 0;
  std::vector<float> data;
  std::vector<double> wavelengths;  // empty or one entry per band, strictly increasing (nm)

  std::size_t pixel_count() const { return static_cast<std::size_t>(rows) * cols; }
  std::size_t size() const { return static_cast<std::size_t>(bands) * rows * cols; }

  std::size_t index(int band, int row, int col) const {
    return (static_cast<std::size_t>(band) * rows + row) * cols + col;
  }
  double at(int band, int row, int col) const { return data[index(band, row, col)]; }

  // Spectrum of pixel (row, col) as doubles.
  void spectrum(int row, int col, std::vector<double>& out) const {
    out.resize(bands);
    for (int b = 0; b < bands; ++b) out[b] = data[index(b, row, col)];
  }

  void validate() const {
    if (bands < 1) throw io_error("bands must be >= 1");
    if (rows < 1 || cols < 1) throw io_error("rows and cols must be >= 1");
    if (data.size() != size()) throw io_error("cube data length does not match bands*rows*cols");
    for (float v : data) {
      if (!std::isfinite(v)) throw io_error("cube contains non-finite values");
      if (v < 0.0f || v > 1.0f) throw io_error("cube reflectance outside [0,1]");
    }
    if (!wavelengths.empty()) {
      if (static_cast<int>(wavelengths.size()) != bands)
        throw io_error("wavelength count does not match bands");
      for (std::size_t i = 1; i < wavelengths.size(); ++i)
        if (!(wavelengths[i] > wavelengths[i - 1]))
          throw io_error("wavelengths must be strictly increasing");
    }
  }
};

/// Endmember library: M pure spectra over a shared band axis, column-major
/// (spectrum m occupies spectra[m*bands .. m*bands+bands)).
struct EndmemberSet {
  int bands = 0;
  std::vector<std::string> names;
  std::vector<double> spectra;

  int count() const { return static_cast<int>(names.size()); }
  const double* column(int m) const { return spectra.data() + static_cast<std::size_t>(m) * bands; }
  double at(int band, int m) const { return spectra[static_cast<std::size_t>(m) * bands + band]; }
  double& at(int band, int m) { return spectra[static_cast<std::size_t>(m) * bands + band]; }

  void validate() const {
    if (bands < 1) throw io_error("endmember bands must be >= 1");
    if (count() < 2) throw io_error("endmember count M >= 2 required");
    if (spectra.size() != static_cast<std::size_t>(bands) * count())
      throw io_error("endmember matrix size mismatch");
    for (double v : spectra) {
      if (!std::isfinite(v)) throw io_error("endmember spectra must be finite");
      if (v < 0.0 || v > 1.0) throw io_error("endmember reflectance outside [0,1]");
    }
  }
};

/// One scalar per pixel, row-major. The optional mask marks pixels whose value
/// is undefined (masked entries are exempt from the finiteness invariant).
struct MapF64 {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;
  std::optional<std::vector<std::uint8_t>> mask;

  std::size_t size() const { return static_cast<std::size_t>(rows) * cols; }
  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * cols + col]; }
  double& at(int row, int col) { return values[static_cast<std::size_t>(row) * cols + col]; }

  static MapF64 filled(int rows, int cols, double v) {
    MapF64 m;
    m.rows = rows;
    m.cols = cols;
    m.values.assign(static_cast<std::size_t>(rows) * cols, v);
    return m;
  }

  void validate() const {
    if (rows < 1 || cols < 1) throw io_error("map dimensions must be >= 1");
    if (values.size() != size()) throw io_error("map value count mismatch");
    if (mask && mask->size() != size()) throw io_error("map mask size mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
      bool masked = mask && (*mask)[i];
      if (!masked && !std::isfinite(values[i])) throw io_error("map contains non-finite values");
    }
  }
};

/// Per-endmember abundance planes, plane-major: plane m is values[m*rows*cols ...).
struct AbundanceMap {
  int rows = 0;
  int cols = 0;
  int endmembers = 0;
  std::vector<double> values;

  std::size_t pixel_count() const { return static_cast<std::size_t>(rows) * cols; }
  double at(int m, std::size_t pixel) const { return values[m * pixel_count() + pixel]; }
  double& at(int m, std::size_t pixel) { return values[m * pixel_count() + pixel]; }

  MapF64 plane(int m) const {
    MapF64 out;
    out.rows = rows;
    out.cols = cols;
    out.values.assign(values.begin() + m * pixel_count(), values.begin() + (m + 1) * pixel_count());
    return out;
  }
};

/// The six per-pixel physical features, plane-major in the fixed order below.
struct FeatureMatrix {
  static constexpr int K = 6;
  static constexpr const char* names[K] = {"curvature", "ndvi",        "ndvi_gradient",
                                           "emp",       "dmp",         "lbp"};

  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // K * rows * cols
  bool standardized = false;
  double plane_mean[K] = {0, 0, 0, 0, 0, 0};  // recorded by standardize()
  double plane_std[K] = {0, 0, 0, 0, 0, 0};

  std::size_t pixel_count() const { return static_cast<std::size_t>(rows) * cols; }
  double at(int k, std::size_t pixel) const { return values[k * pixel_count() + pixel]; }
  double& at(int k, std::size_t pixel) { return values[k * pixel_count() + pixel]; }
  const double* plane(int k) const { return values.data() + k * pixel_count(); }
  double* plane(int k) { return values.data() + k * pixel_count(); }

  // Feature vector of one pixel, in plane order.
  void feature_vector(std::size_t pixel, double out[K]) const {
    for (int k = 0; k < K; ++k) out[k] = at(k, pixel);
  }

  MapF64 plane_map(int k) const {
    MapF64 out;
    out.rows = rows;
    out.cols = cols;
    out.values.assign(values.begin() + k * pixel_count(), values.begin() + (k + 1) * pixel_count());
    return out;
  }
};

}  // namespace unmix
