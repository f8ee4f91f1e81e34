#pragma once

// JSON formats for surfaces, points, lattices, boundary points and heights.
// Parsing failures raise kParseError naming the offending field.

#include <string>
#include <vector>

#include "k3h/heights.hpp"
#include "k3h/hyperbolic.hpp"
#include "k3h/lattice.hpp"
#include "k3h/wehler.hpp"

namespace k3h {

// {"coeffs": 3x3x3 nested arrays of "p/q" strings}
WehlerSurface parse_surface_json(const std::string& text);
std::string surface_to_json(const WehlerSurface& s);

// {"x":["a","b"],"y":["c","d"],"z":["e","f"]}
SurfacePoint parse_point_json(const std::string& text);
std::string point_to_json(const SurfacePoint& p);

// {"rank": 3, "gram": [[0,2,2],[2,0,2],[2,2,0]]}; the basepoint direction
// defaults to (1, ..., 1).
GramLattice parse_lattice_json(const std::string& text);

// {"kind":"irrational","dir":[x0,x1,x2]} in diagonal coordinates, or
// {"kind":"cusp","E":[0,0,1],"scale":1.0}.
BoundaryPoint parse_boundary_json(const std::string& text);

std::string read_file(const std::string& path);

// Minimal streaming writer: reals as %.17g, exact rationals as "p/q".
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double x);
  JsonWriter& value(long long x);
  JsonWriter& value(std::size_t x) { return value(static_cast<long long>(x)); }
  JsonWriter& value(int x) { return value(static_cast<long long>(x)); }
  JsonWriter& value(bool b);
  JsonWriter& value(const std::string& s);
  JsonWriter& value(const char* s) { return value(std::string(s)); }
  JsonWriter& value(const Rat& q);
  JsonWriter& raw(const std::string& json);
  const std::string& str() const { return out_; }

 private:
  void separator();
  std::string out_;
  std::vector<bool> first_;
  bool after_key_ = false;
};

std::string escape_json(const std::string& s);

// {"value": f, "err": f, "n": k, "converged": bool} plus "note" when set.
void write_height(JsonWriter& w, const HeightValue& h);
std::string height_to_json(const HeightValue& h);

}  // namespace k3h
