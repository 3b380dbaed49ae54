#include <catch_amalgamated.hpp>
#include <cstring>
#include <filesystem>

#include "test_util.hpp"
#include "unmix/envi.hpp"
#include "unmix/rng.hpp"

using namespace unmix;
using testutil::TempDir;

namespace {

std::string float_bytes(const std::vector<float>& v) {
  std::string out(v.size() * 4, '\0');
  std::memcpy(out.data(), v.data(), out.size());
  return out;
}

std::string u16_bytes(const std::vector<std::uint16_t>& v) {
  std::string out(v.size() * 2, '\0');
  std::memcpy(out.data(), v.data(), out.size());
  return out;
}

std::string basic_header(int samples, int lines, int bands, int dtype,
                         const std::string& interleave) {
  return "ENVI\nsamples = " + std::to_string(samples) + "\nlines = " + std::to_string(lines) +
         "\nbands = " + std::to_string(bands) + "\ndata type = " + std::to_string(dtype) +
         "\ninterleave = " + interleave + "\nbyte order = 0\n";
}

}  // namespace

TEST_CASE("read hand-written float BSQ cube") {
  TempDir dir("envi_bsq");
  // 2 rows x 2 cols x 3 bands; band-major planes
  std::vector<float> vals = {0.0f,  0.1f,  0.2f,  0.3f,    // band 0
                             0.4f,  0.5f,  0.6f,  0.7f,    // band 1
                             0.8f,  0.9f,  0.95f, 1.0f};   // band 2
  testutil::write_text(dir.file("cube.img"), float_bytes(vals));
  testutil::write_text(dir.file("cube.img.hdr"), basic_header(2, 2, 3, 4, "bsq"));

  Cube c = read_envi_cube(dir.file("cube.img.hdr"));
  REQUIRE(c.bands == 3);
  REQUIRE(c.rows == 2);
  REQUIRE(c.cols == 2);
  for (std::size_t i = 0; i < vals.size(); ++i) REQUIRE(c.data[i] == vals[i]);
}

TEST_CASE("bil and bip interleaves land in band-sequential order") {
  TempDir dir("envi_interleave");
  // 1 row x 2 cols x 2 bands, values v(band, col) = band*10 + col, scaled to [0,1]
  auto v = [](int band, int col) { return 0.1f * band + 0.01f * col; };
  // bil: [row][band][col]
  testutil::write_text(dir.file("a.img"), float_bytes({v(0, 0), v(0, 1), v(1, 0), v(1, 1)}));
  testutil::write_text(dir.file("a.img.hdr"), basic_header(2, 1, 2, 4, "bil"));
  // bip: [row][col][band]
  testutil::write_text(dir.file("b.img"), float_bytes({v(0, 0), v(1, 0), v(0, 1), v(1, 1)}));
  testutil::write_text(dir.file("b.img.hdr"), basic_header(2, 1, 2, 4, "bip"));

  Cube a = read_envi_cube(dir.file("a.img.hdr"));
  Cube b = read_envi_cube(dir.file("b.img.hdr"));
  for (int band = 0; band < 2; ++band)
    for (int col = 0; col < 2; ++col) {
      REQUIRE(a.at(band, 0, col) == Catch::Approx(v(band, col)));
      REQUIRE(b.at(band, 0, col) == Catch::Approx(v(band, col)));
    }
}

TEST_CASE("uint16 cubes are scaled by the reflectance scale factor") {
  TempDir dir("envi_u16");
  std::string hdr = basic_header(1, 1, 2, 12, "bsq") + "reflectance scale factor = 10000\n";
  testutil::write_text(dir.file("u.img"), u16_bytes({5000, 10000}));
  testutil::write_text(dir.file("u.img.hdr"), hdr);
  Cube c = read_envi_cube(dir.file("u.img.hdr"));
  REQUIRE(c.at(0, 0, 0) == 0.5);
  REQUIRE(c.at(1, 0, 0) == 1.0);

  // default scale is 10000 when the key is absent
  testutil::write_text(dir.file("d.img"), u16_bytes({2500}));
  testutil::write_text(dir.file("d.img.hdr"), basic_header(1, 1, 1, 12, "bsq"));
  REQUIRE(read_envi_cube(dir.file("d.img.hdr")).at(0, 0, 0) == 0.25);
}

TEST_CASE("degenerate and malformed headers are rejected") {
  TempDir dir("envi_bad");
  testutil::write_text(dir.file("z.img"), "");
  testutil::write_text(dir.file("z.img.hdr"), basic_header(1, 1, 0, 4, "bsq"));
  REQUIRE_THROWS_WITH(read_envi_cube(dir.file("z.img.hdr")), "bands must be >= 1");

  testutil::write_text(dir.file("m.img"), float_bytes({0.5f}));
  testutil::write_text(dir.file("m.img.hdr"),
                       "ENVI\nsamples = 1\nlines = 1\ndata type = 4\ninterleave = bsq\nbyte order = 0\n");
  REQUIRE_THROWS_AS(read_envi_cube(dir.file("m.img.hdr")), io_error);  // missing bands

  testutil::write_text(dir.file("t.img"), float_bytes({0.5f}));
  testutil::write_text(dir.file("t.img.hdr"), basic_header(1, 1, 1, 5, "bsq"));
  REQUIRE_THROWS_AS(read_envi_cube(dir.file("t.img.hdr")), io_error);  // unsupported data type

  testutil::write_text(dir.file("i.img"), float_bytes({0.5f}));
  testutil::write_text(dir.file("i.img.hdr"), basic_header(1, 1, 1, 4, "bif"));
  REQUIRE_THROWS_AS(read_envi_cube(dir.file("i.img.hdr")), io_error);  // unknown interleave

  std::string big_endian = "ENVI\nsamples = 1\nlines = 1\nbands = 1\ndata type = 4\n"
                           "interleave = bsq\nbyte order = 1\n";
  testutil::write_text(dir.file("e.img"), float_bytes({0.5f}));
  testutil::write_text(dir.file("e.img.hdr"), big_endian);
  REQUIRE_THROWS_AS(read_envi_cube(dir.file("e.img.hdr")), io_error);
}

TEST_CASE("raw size mismatch and injected NaN are rejected") {
  TempDir dir("envi_fuzz");
  testutil::write_text(dir.file("s.img"), float_bytes({0.1f, 0.2f, 0.3f}));  // one short
  testutil::write_text(dir.file("s.img.hdr"), basic_header(2, 1, 2, 4, "bsq"));
  REQUIRE_THROWS_AS(read_envi_cube(dir.file("s.img.hdr")), io_error);

  float nanv = std::numeric_limits<float>::quiet_NaN();
  testutil::write_text(dir.file("n.img"), float_bytes({0.1f, nanv}));
  testutil::write_text(dir.file("n.img.hdr"), basic_header(2, 1, 1, 4, "bsq"));
  REQUIRE_THROWS_AS(read_envi_cube(dir.file("n.img.hdr")), io_error);
}

TEST_CASE("tolerance band: slight overshoot clamps, gross values reject") {
  TempDir dir("envi_tol");
  testutil::write_text(dir.file("c.img"), float_bytes({-0.03f, 1.4f}));
  testutil::write_text(dir.file("c.img.hdr"), basic_header(2, 1, 1, 4, "bsq"));
  Cube c = read_envi_cube(dir.file("c.img.hdr"));
  REQUIRE(c.at(0, 0, 0) == 0.0f);
  REQUIRE(c.at(0, 0, 1) == 1.0f);

  testutil::write_text(dir.file("g.img"), float_bytes({1.6f}));
  testutil::write_text(dir.file("g.img.hdr"), basic_header(1, 1, 1, 4, "bsq"));
  REQUIRE_THROWS_AS(read_envi_cube(dir.file("g.img.hdr")), io_error);
}

TEST_CASE("wavelength list parsing and monotonicity") {
  TempDir dir("envi_wl");
  std::string hdr = basic_header(1, 1, 3, 4, "bsq") +
                    "wavelength = { 400.5,\n 500.25, 600 }\n";
  testutil::write_text(dir.file("w.img"), float_bytes({0.1f, 0.2f, 0.3f}));
  testutil::write_text(dir.file("w.img.hdr"), hdr);
  Cube c = read_envi_cube(dir.file("w.img.hdr"));
  REQUIRE(c.wavelengths == std::vector<double>{400.5, 500.25, 600.0});

  std::string bad = basic_header(1, 1, 3, 4, "bsq") + "wavelength = { 400, 400, 600 }\n";
  testutil::write_text(dir.file("b.img"), float_bytes({0.1f, 0.2f, 0.3f}));
  testutil::write_text(dir.file("b.img.hdr"), bad);
  REQUIRE_THROWS_AS(read_envi_cube(dir.file("b.img.hdr")), io_error);
}

TEST_CASE("round trip reproduces bytes exactly on random cubes") {
  TempDir dir("envi_rt");
  Pcg32 rng(42);
  for (int trial = 0; trial < 25; ++trial) {
    Cube c;
    c.rows = static_cast<int>(rng.uniform_int(1, 8));
    c.cols = static_cast<int>(rng.uniform_int(1, 8));
    c.bands = static_cast<int>(rng.uniform_int(1, 16));
    c.data.resize(c.size());
    for (auto& v : c.data) v = static_cast<float>(rng.next_double());
    if (trial % 3 == 0) {
      c.wavelengths.resize(c.bands);
      double w = 400.0;
      for (auto& x : c.wavelengths) {
        w += rng.uniform(1.0, 10.0);
        x = w;
      }
    }
    std::string hdr = dir.file("rt" + std::to_string(trial) + ".img.hdr");
    write_envi_cube(c, hdr);
    Cube back = read_envi_cube(hdr);
    REQUIRE(back.bands == c.bands);
    REQUIRE(back.rows == c.rows);
    REQUIRE(back.cols == c.cols);
    REQUIRE(std::memcmp(back.data.data(), c.data.data(), c.data.size() * 4) == 0);
    REQUIRE(back.wavelengths == c.wavelengths);
  }
}

TEST_CASE("writer refuses NaN before touching the filesystem") {
  TempDir dir("envi_nan");
  Cube c;
  c.bands = 1;
  c.rows = 1;
  c.cols = 2;
  c.data = {0.5f, std::numeric_limits<float>::quiet_NaN()};
  std::string hdr = dir.file("bad.img.hdr");
  REQUIRE_THROWS_AS(write_envi_cube(c, hdr), io_error);
  REQUIRE_FALSE(std::filesystem::exists(hdr));
  REQUIRE_FALSE(std::filesystem::exists(dir.file("bad.img")));

  REQUIRE_THROWS_AS(write_envi_cube(c, ""), io_error);  // empty path
}
