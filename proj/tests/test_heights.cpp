#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "k3h/heights.hpp"

using namespace k3h;

namespace {

const HeightEngine& engine() {
  static const HeightEngine e(WehlerSurface::default_surface());
  return e;
}

const SurfacePoint& star_point() { return default_surface_points().generic[0]; }

}  // namespace

// Regression values: any change in coding, stopping or fitting shows up here.
TEST_CASE("frozen heights of the default point") {
  const HeightValue v = engine().vcan_pairing({1, 2}, star_point(), 40);
  CHECK(v.value == doctest::Approx(4.7514296886235536).epsilon(1e-12));
  CHECK(v.error_bound < 0.01);

  const HeightValue h = engine().canonical_boundary_height(ray_from_angle(1.0), star_point());
  CHECK(h.value == doctest::Approx(1.6207297745695284).epsilon(1e-12));
  CHECK(h.n_used == 18);

  const HeightValue hp = engine().hyperbolic_canonical_height({1, 2, 3}, +1, star_point());
  CHECK(hp.value == doctest::Approx(0.95855505760783588).epsilon(1e-12));
  CHECK(hp.converged);
}

TEST_CASE("vcan scales quadratically in the word") {
  const HeightValue v1 = engine().vcan_pairing({1, 2}, star_point(), 40);
  const HeightValue v2 = engine().vcan_pairing({1, 2, 1, 2}, star_point(), 40);
  const HeightValue v3 = engine().vcan_pairing({1, 2, 1, 2, 1, 2}, star_point(), 40);
  CHECK(std::fabs(v2.value / v1.value - 4.0) < 0.2);
  CHECK(std::fabs(v3.value / v1.value - 9.0) < 0.45);
}

TEST_CASE("torsion on the fiber") {
  const DefaultPoints& d = default_surface_points();
  CHECK(engine().finite_fiber_order({1, 2}, d.fixed_by_s1_s2, 24).order == std::size_t{1});
  CHECK(engine().finite_fiber_order({1, 2}, d.order_two, 24).order == std::size_t{2});
  const FiberOrder g = engine().finite_fiber_order({1, 2}, star_point(), 24);
  CHECK_FALSE(g.order.has_value());
  CHECK(g.growth_ratio > 3.0);
  CHECK(std::fabs(engine().vcan_pairing({1, 2}, d.order_two, 40).value) <= 1e-4);
}

TEST_CASE("periodic point has zero forward height") {
  const HeightValue h = engine().hyperbolic_canonical_height({2, 3, 2, 1}, +1, default_surface_points().hyperbolic_periodic);
  CHECK(std::fabs(h.value) <= 1e-4);
}

TEST_CASE("cusp height is the normalized fiber pairing") {
  // Cusp h3 at scale 1: vcan(s1 s2) / |xi|^2 with |xi|^2 = 4.
  const HeightValue c = engine().rational_boundary_height(CuspPoint{{0, 0, 1}, {}, 1.0}, star_point());
  const HeightValue v = engine().vcan_pairing({1, 2}, star_point(), 40);
  CHECK(c.value == doctest::Approx(v.value / 4.0).epsilon(1e-12));
}

TEST_CASE("error bounds cover slow excursion tails") {
  // Angle whose coding sits in a long cusp excursion.
  const HeightValue h = engine().canonical_boundary_height(ray_from_angle(1.0), star_point());
  const std::size_t n = h.trace.size();
  REQUIRE(n > 4);
  CHECK(h.error_bound >= 10.0 * std::fabs(h.trace[n - 1] - h.trace[n - 2]));
}

TEST_CASE("orbit cache persists and replays profiles") {
  const auto dir = std::filesystem::temp_directory_path() / "k3h_unit_cache";
  std::filesystem::remove_all(dir);
  const std::vector<int> w = repeat_word({1, 2, 3}, 3);
  OrbitProfile first;
  {
    const HeightEngine e(WehlerSurface::default_surface(), std::make_shared<OrbitCache>(dir));
    first = e.profile(star_point(), w, kDefaultGuardBits);
  }
  auto cache = std::make_shared<OrbitCache>(dir);
  const HeightEngine e(WehlerSurface::default_surface(), cache);
  const OrbitProfile again = e.profile(star_point(), w, kDefaultGuardBits);
  CHECK(cache->hits() == 1);
  CHECK(again.coord_heights == first.coord_heights);
  std::filesystem::remove_all(dir);
}
