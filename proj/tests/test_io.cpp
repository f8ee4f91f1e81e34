#include <doctest.h>

#include "k3h/error.hpp"
#include "k3h/io.hpp"

using namespace k3h;

namespace {

ErrorCode code_of(void (*f)()) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

}  // namespace

TEST_CASE("point round trip") {
  const SurfacePoint p = default_surface_points().generic[1];
  CHECK(parse_point_json(point_to_json(p)) == p);
  CHECK(point_to_json(default_surface_points().generic[0]) == R"({"x":["5","3"],"y":["5","3"],"z":["3","1"]})");
}

TEST_CASE("surface round trip keeps the hash") {
  const WehlerSurface s = WehlerSurface::default_surface();
  CHECK(parse_surface_json(surface_to_json(s)).hash() == s.hash());
}

TEST_CASE("malformed input names the field") {
  CHECK(code_of([] { parse_point_json(R"({"x":["1"],"y":["0","1"],"z":["0","1"]})"); }) == ErrorCode::kParseError);
  try {
    parse_point_json(R"({"x":["1","1"],"z":["0","1"]})");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("point.y") != std::string::npos);
  }
  CHECK(code_of([] { parse_lattice_json(R"({"rank":3})"); }) == ErrorCode::kParseError);
  CHECK(code_of([] { parse_surface_json("not json"); }) == ErrorCode::kParseError);
}

TEST_CASE("lattice json") {
  const GramLattice l = parse_lattice_json(R"({"rank":3,"gram":[[0,2,2],[2,0,2],[2,2,0]]})");
  CHECK(l.gram() == GramLattice::wehler().gram());
  CHECK(l.basepoint_direction() == IntVec{1, 1, 1});
}

TEST_CASE("writer formats") {
  JsonWriter w;
  w.begin_object().key("q").value(Rat(-3, 4)).key("x").value(0.1).key("ok").value(true).end_object();
  CHECK(w.str() == R"({"q":"-3/4","x":0.10000000000000001,"ok":true})");
}
