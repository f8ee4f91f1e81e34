#include <doctest.h>

#include <cmath>

#include "k3h/error.hpp"
#include "k3h/wehler.hpp"

using namespace k3h;

namespace {

SurfacePoint sp(long a, long b, long c, long d, long e, long f) {
  return SurfacePoint{{ProjPoint(a, b), ProjPoint(c, d), ProjPoint(e, f)}};
}

}  // namespace

TEST_CASE("projective normalization") {
  CHECK(ProjPoint(4, -6) == ProjPoint(-2, 3));
  CHECK(ProjPoint(-5, 0) == ProjPoint(1, 0));
  CHECK_THROWS_AS(ProjPoint(0, 0), Error);
}

TEST_CASE("vieta conjugate on a hand-made surface") {
  // F = (x0^2 - 3 x0 x1 + 2 x1^2) y1^2 z1^2 + x0^2 y0^2 z0^2: on y = z = [0:1]
  // the x-slice is (x0 - x1)(x0 - 2 x1).
  WehlerSurface::Coefficients c{};
  c[2][0][0] = 1;
  c[1][0][0] = -3;
  c[0][0][0] = 2;
  c[2][2][2] = 1;
  const WehlerSurface s(c);
  const SurfacePoint p = sp(1, 1, 0, 1, 0, 1);
  REQUIRE(s.contains(p));
  const QuadraticSlice q = s.slice(1, p);
  CHECK(q.a == 1);
  CHECK(q.b == -3);
  CHECK(q.c == 2);
  CHECK(s.involution(1, p) == sp(2, 1, 0, 1, 0, 1));
  CHECK(s.involution(1, sp(2, 1, 0, 1, 0, 1)) == p);
  CHECK_THROWS_AS(s.involution(1, sp(3, 1, 0, 1, 0, 1)), Error);
}

TEST_CASE("default surface") {
  const WehlerSurface s = WehlerSurface::default_surface();
  CHECK(s.hash() == 0x3c2f180694fbf419ULL);
  const DefaultPoints& d = default_surface_points();
  CHECK(d.generic.size() == 10);
  CHECK(d.generic[0] == sp(5, 3, 5, 3, 3, 1));
  for (const auto& p : d.generic) CHECK(s.contains(p));
  CHECK(s.involution(1, d.fixed_by_s1_s2) == d.fixed_by_s1_s2);
  CHECK(s.involution(2, d.fixed_by_s1_s2) == d.fixed_by_s1_s2);
  CHECK(fixed_by(s, 1, d.fixed_by_s1_s2));
}

TEST_CASE("orbit of the default point") {
  const WehlerSurface s = WehlerSurface::default_surface();
  const OrbitResult o = orbit(s, {1, 2, 3}, default_surface_points().generic[0]);
  REQUIRE(o.status == OrbitStatus::kComplete);
  REQUIRE(o.points.size() == 4);
  CHECK(o.points[1] == sp(-64, 31, 5, 3, 3, 1));
  CHECK(o.points[2] == sp(-64, 31, -1289, 469, 3, 1));
  CHECK(o.points[3].coords[2] == ProjPoint(Int("-1392648481"), Int("624444560")));
  // Reverse word returns to the start.
  const OrbitResult back = orbit(s, {3, 2, 1}, o.points[3]);
  CHECK(back.points.back() == o.points[0]);
}

TEST_CASE("periodicity and guards") {
  const WehlerSurface s = WehlerSurface::default_surface();
  const DefaultPoints& d = default_surface_points();
  const OrbitResult o = orbit(s, repeat_word({2, 3, 2, 1}, 2), d.hyperbolic_periodic);
  REQUIRE(o.repeat_step.has_value());
  CHECK(o.points[4] == d.hyperbolic_periodic);
  const OrbitResult g = orbit(s, repeat_word({1, 2, 3}, 20), d.generic[0], 2000);
  CHECK(g.status == OrbitStatus::kBitGuardExceeded);
}

TEST_CASE("weil heights") {
  CHECK(weil_height_p1(ProjPoint(5, 3)) == doctest::Approx(std::log(5.0)));
  CHECK(weil_height_p1(ProjPoint(1, 0)) == 0.0);
  const SurfacePoint p = sp(5, 3, 5, 3, 3, 1);
  CHECK(basis_height(p, std::array<double, 3>{1, 1, 1}) == doctest::Approx(2 * std::log(5.0) + std::log(3.0)));
}

TEST_CASE("point search finds only surface points") {
  const WehlerSurface s = WehlerSurface::default_surface();
  const auto pts = find_points(s, 3);
  CHECK(pts.size() == 23);
  for (const auto& p : pts) CHECK(s.contains(p));
}
