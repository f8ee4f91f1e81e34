#include <doctest.h>

#include <cmath>

#include "k3h/hyperbolic.hpp"
#include "k3h/wehler.hpp"

using namespace k3h;

TEST_CASE("frame diagonalizes the form") {
  const GramLattice lat = GramLattice::wehler();
  const DiagonalFrame f(lat);
  const auto& c = f.columns();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(lat.pair(c[i], c[j]) == doctest::Approx(i != j ? 0.0 : (i == 0 ? 1.0 : -1.0)).scale(1.0));
  const auto v = f.null_vector(ray_from_angle(0.4));
  CHECK(lat.mass(v) == doctest::Approx(1.0));
  CHECK(std::fabs(lat.pair(v, v)) < 1e-12);
}

TEST_CASE("chamber cusps code in zero letters") {
  const GramLattice lat = GramLattice::wehler();
  const DiagonalFrame f(lat);
  const Chamber ch = Chamber::wehler();
  const Coding c = code_boundary_ray(f, ch, CuspPoint{{0, 0, 1}, {}, 1.0});
  CHECK(c.word.letters.empty());
  REQUIRE(c.chamber_cusp.has_value());
  CHECK(c.chamber_cusp == ch.cusp_index({0, 0, 1}));
  const Coding d = code_boundary_ray(f, ch, CuspPoint{{-1, 2, 2}, {}, 1.0});
  CHECK(d.word.letters == std::vector<int>{1});
}

TEST_CASE("coding of a fixed angle") {
  const GramLattice lat = GramLattice::wehler();
  const DiagonalFrame f(lat);
  const Chamber ch = Chamber::wehler();
  const Coding c = code_boundary_ray(f, ch, ray_from_angle(1.0));
  REQUIRE(c.word.letters.size() >= 12);
  const std::vector<int> head(c.word.letters.begin(), c.word.letters.begin() + 12);
  CHECK(head == std::vector<int>{3, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2});
}

TEST_CASE("distances") {
  const GramLattice lat = GramLattice::wehler();
  const auto w = lat.basepoint();
  CHECK(hyp_distance(lat, w, w) == doctest::Approx(0.0).scale(1.0));
  const IntVec moved = word_matrix({1, 2, 3}) * lat.basepoint_direction();
  const double d = hyp_distance(lat, to_hi(lat.basepoint_direction()), to_hi(moved));
  CHECK(d > 0);
  CHECK(d <= std::log(9.0 + 4.0 * std::sqrt(5.0)) + 1e-9 + 2.0 * 3.0);
}
