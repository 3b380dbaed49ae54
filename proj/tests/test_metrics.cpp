#include <catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "unmix/metrics.hpp"
#include "unmix/rng.hpp"

using namespace unmix;

namespace {

Cube cube_of(int bands, int rows, int cols, const std::vector<double>& vals) {
  Cube c;
  c.bands = bands;
  c.rows = rows;
  c.cols = cols;
  c.data.resize(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) c.data[i] = static_cast<float>(vals[i]);
  return c;
}

}  // namespace

TEST_CASE("spectral angle distance") {
  REQUIRE(sad({0.3, 0.6}, {0.15, 0.3}) == Catch::Approx(0.0).margin(1e-7));  // collinear
  REQUIRE(sad({1.0, 0.0}, {0.0, 1.0}) == Catch::Approx(std::numbers::pi / 2).margin(1e-12));
  REQUIRE(sad({1.0, 0.0}, {1.0, 1.0}) == Catch::Approx(std::numbers::pi / 4).margin(1e-12));
  REQUIRE_THROWS_AS(sad({0.0, 0.0}, {1.0, 0.0}), std::invalid_argument);

  Pcg32 rng(6);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> a(5), b(5);
    for (auto& v : a) v = rng.uniform(0.01, 1.0);
    for (auto& v : b) v = rng.uniform(0.01, 1.0);
    REQUIRE(sad(a, b) == Catch::Approx(sad(b, a)).margin(1e-14));  // symmetry
    std::vector<double> a2(a);
    for (auto& v : a2) v *= 3.7;  // positive scaling
    REQUIRE(sad(a2, b) == Catch::Approx(sad(a, b)).margin(1e-12));
  }
}

TEST_CASE("scene SAD masks zero-norm pixels and reports the count") {
  Cube y = cube_of(2, 1, 2, {0.5, 0.0, 0.5, 0.0});   // pixel 1 all-zero
  Cube yh = cube_of(2, 1, 2, {0.5, 0.1, 0.5, 0.2});
  auto [mean_sad, masked] = sad_scene(y, yh);
  REQUIRE(masked == 1);
  REQUIRE(mean_sad == Catch::Approx(0.0).margin(1e-7));
}

TEST_CASE("rmse") {
  Cube y = cube_of(2, 2, 1, {0.2, 0.4, 0.6, 0.8});
  REQUIRE(rmse(y, y) == 0.0);

  Cube shifted = y;
  for (auto& v : shifted.data) v += 0.05f;
  REQUIRE(rmse(y, shifted) == Catch::Approx(0.05).margin(1e-7));

  Pcg32 rng(44);
  Cube a = cube_of(3, 2, 2, std::vector<double>(12, 0.0));
  Cube b = a;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    a.data[i] = static_cast<float>(rng.next_double());
    b.data[i] = static_cast<float>(rng.next_double());
    double d = static_cast<double>(a.data[i]) - static_cast<double>(b.data[i]);
    acc += d * d;
  }
  REQUIRE(rmse(a, b) == Catch::Approx(std::sqrt(acc / 12.0)).margin(1e-12));

  Cube wrong = cube_of(2, 2, 2, std::vector<double>(8, 0.1));
  REQUIRE_THROWS_AS(rmse(y, wrong), std::invalid_argument);
}

TEST_CASE("relative rmse") {
  Cube y = cube_of(2, 1, 2, {0.4, 0.8, 0.3, 0.6});
  auto [zero, m0] = rrmse(y, y);
  REQUIRE(zero == 0.0);
  REQUIRE(m0 == 0);

  Cube scaled = y;
  for (auto& v : scaled.data) v *= 0.9f;
  auto [r, m1] = rrmse(y, scaled);
  REQUIRE(r == Catch::Approx(0.1).margin(1e-6));
  REQUIRE(m1 == 0);

  Cube withzero = cube_of(2, 1, 2, {0.0, 0.8, 0.0, 0.6});
  auto [rz, mz] = rrmse(withzero, scaled);
  REQUIRE(mz == 1);
  REQUIRE(std::isfinite(rz));

  Cube allzero = cube_of(2, 1, 1, {0.0, 0.0});
  REQUIRE_THROWS_AS(rrmse(allzero, allzero), std::invalid_argument);
}

TEST_CASE("physical coherence rho") {
  MapF64 xi = MapF64::filled(2, 3, 0.0);
  xi.values = {0.1, 0.3, 0.5, 0.2, 0.8, 0.6};

  MapF64 affine = xi;
  for (auto& v : affine.values) v = 2.0 * v + 1.0;
  REQUIRE(coherence_rho(xi, affine) == Catch::Approx(1.0).margin(1e-12));

  MapF64 neg = xi;
  for (auto& v : neg.values) v = -v;
  REQUIRE(coherence_rho(xi, neg) == Catch::Approx(-1.0).margin(1e-12));

  MapF64 constant = MapF64::filled(2, 3, 0.4);
  REQUIRE_THROWS_WITH(coherence_rho(constant, xi),
                      Catch::Matchers::ContainsSubstring("correlation undefined"));
  REQUIRE_THROWS_AS(coherence_rho(xi, constant), std::invalid_argument);

  // invariance under positive affine transforms of either argument
  Pcg32 rng(12);
  MapF64 a = MapF64::filled(3, 3, 0.0), b = MapF64::filled(3, 3, 0.0);
  for (std::size_t i = 0; i < 9; ++i) {
    a.values[i] = rng.next_double();
    b.values[i] = rng.next_double();
  }
  double base = coherence_rho(a, b);
  MapF64 a2 = a;
  for (auto& v : a2.values) v = 5.0 * v + 3.0;
  MapF64 b2 = b;
  for (auto& v : b2.values) v = 0.25 * v - 7.0;
  REQUIRE(coherence_rho(a2, b2) == Catch::Approx(base).margin(1e-12));
}
