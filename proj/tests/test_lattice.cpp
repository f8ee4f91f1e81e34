#include <doctest.h>

#include <cmath>

#include "k3h/error.hpp"
#include "k3h/lattice.hpp"
#include "k3h/wehler.hpp"

using namespace k3h;

TEST_CASE("wehler gram and basepoint") {
  const GramLattice lat = GramLattice::wehler();
  CHECK(lat.rank() == 3);
  CHECK(lat.pair(IntVec{1, 0, 0}, IntVec{0, 1, 0}) == 2);
  CHECK(lat.pair(IntVec{1, 0, 0}, IntVec{1, 0, 0}) == 0);
  CHECK(lat.pair(IntVec{1, 1, 1}, IntVec{1, 1, 1}) == 12);
  CHECK(lat.mass(lat.basepoint()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lat.mass(std::vector<double>{0, 0, 1}) == doctest::Approx(4.0 / std::sqrt(12.0)).epsilon(1e-15));
}

TEST_CASE("involution matrices") {
  const GramLattice lat = GramLattice::wehler();
  const IntMatrix s1 = ns_action(1);
  CHECK(s1 == IntMatrix(3, 3, {-1, 0, 0, 2, 1, 0, 2, 0, 1}));
  for (int i = 1; i <= 3; ++i) {
    CHECK(lat.preserves(ns_action(i)));
    CHECK(ns_action(i) * ns_action(i) == IntMatrix::identity(3));
  }
  CHECK(word_matrix({1, 2}) == ns_action(1) * ns_action(2));
}

TEST_CASE("non-isometries are rejected") {
  const GramLattice lat = GramLattice::wehler();
  const IntMatrix m(3, 3, {1, 1, 0, 0, 1, 0, 0, 0, 1});
  CHECK_FALSE(lat.preserves(m));
  CHECK_THROWS_AS(classify_isometry(lat, m), Error);
  try {
    classify_isometry(lat, m);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotIsometry);
  }
}

TEST_CASE("classification of short words") {
  const GramLattice lat = GramLattice::wehler();
  const Isometry s1 = classify_isometry(lat, word_matrix({1}));
  REQUIRE(s1.is_finite_order());
  CHECK(std::get<FiniteOrder>(s1.kind).order == 2);

  const Isometry g = classify_isometry(lat, word_matrix({1, 2}));
  REQUIRE(g.is_parabolic());
  CHECK(g.parabolic().fixed_null == IntVec{0, 0, 1});
  CHECK(classify_isometry(lat, word_matrix({2, 1})).is_parabolic());

  const Isometry h = classify_isometry(lat, word_matrix({1, 2, 3}));
  REQUIRE(h.is_hyperbolic());
  // Root of t^2 - 18t + 1.
  const double lambda = 9.0 + 4.0 * std::sqrt(5.0);
  CHECK(std::fabs(h.hyperbolic().lambda - lambda) < 1e-9);
  CHECK(std::fabs(std::log(h.hyperbolic().lambda) - 2.8872709503576206) < 1e-9);
  CHECK(lat.mass(h.hyperbolic().expanded) == doctest::Approx(1.0));
  CHECK(lat.pair(h.hyperbolic().expanded, h.hyperbolic().expanded) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("translation datum of s1 s2") {
  const GramLattice lat = GramLattice::wehler();
  const IntMatrix m = word_matrix({1, 2});
  const IntVec e{0, 0, 1};
  const RatVec xi = parabolic_xi(lat, m, e);
  CHECK(reduce_mod(xi, e) == RatVec{-1, 1, 0});
  const Isometry g = classify_isometry(lat, m);
  CHECK(ns_norm_sq(lat, g) == 4);
  CHECK(exp_parabolic(lat, e, xi) == to_rat(m));
  // Powers scale the norm quadratically.
  CHECK(ns_norm_sq(lat, classify_isometry(lat, matrix_power(m, 3))) == 36);
}

TEST_CASE("exp_parabolic needs xi orthogonal to e") {
  const GramLattice lat = GramLattice::wehler();
  CHECK_THROWS_AS(exp_parabolic(lat, {0, 0, 1}, RatVec{1, 0, 0}), Error);
}
