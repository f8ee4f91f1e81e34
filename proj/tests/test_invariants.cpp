#include <doctest.h>

#include <cmath>

#include "k3h/invariants.hpp"

using namespace k3h;

TEST_CASE("constant oracles") {
  const GramLattice lat = GramLattice::wehler();
  const DiagonalFrame f(lat);
  StarOptions so;
  so.samples = 32;
  const auto one = star_set(f, constant_oracle(1.0), so);
  CHECK(total_height(one).value == doctest::Approx(2 * M_PI).epsilon(1e-14));
  CHECK(star_volume(one).value == doctest::Approx(2 * M_PI).epsilon(1e-14));
  CHECK(total_height(star_set(f, constant_oracle(4.0), so)).value == doctest::Approx(M_PI / 2).epsilon(1e-14));
  const StarShape s = star_shape(one);
  CHECK(s.positive);
  CHECK(s.continuous);
}

TEST_CASE("reduced words") {
  CHECK(reduced_words(0).size() == 1);
  CHECK(reduced_words(1).size() == 4);
  CHECK(reduced_words(2).size() == 10);
  for (const auto& w : reduced_words(3))
    for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] != w[i - 1]);
}

TEST_CASE("small star set of the default point") {
  const HeightEngine e(WehlerSurface::default_surface());
  HeightOptions o;
  o.tol = 1e-3;
  StarOptions so;
  so.samples = 64;
  const auto ss = star_set(e.frame(), engine_oracle(e, default_surface_points().generic[0], o), so);
  const IntegralResult t = total_height(ss);
  CHECK(t.value == doctest::Approx(5.1012734733834817).epsilon(1e-9));
  CHECK(t.failed == 0);
  CHECK(star_shape(ss).positive);
  // The volume and the total height agree in rank 3.
  CHECK(star_volume(ss).value == doctest::Approx(t.value).epsilon(1e-3));
  CHECK(star_csv(ss) == star_csv(star_set(e.frame(), engine_oracle(e, default_surface_points().generic[0], o), so)));
}

TEST_CASE("jump criterion flags a spike") {
  const GramLattice lat = GramLattice::wehler();
  const DiagonalFrame f(lat);
  StarOptions so;
  so.samples = 64;
  auto ss = star_set(f, [](const IrrationalRay& r) {
    HeightValue h;
    h.value = 2.0 + 0.1 * r.spatial[0];
    h.converged = true;
    return h;
  }, so);
  CHECK(star_shape(ss).continuous);
  ss[10].height.value = 20.0;
  ss[10].radius = 1.0 / 20.0;
  CHECK_FALSE(star_shape(ss).continuous);
}
