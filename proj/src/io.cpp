#include "k3h/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace k3h {

namespace {

using nlohmann::json;

json parse_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kParseError, what + ": invalid JSON (" + e.what() + ")");
  }
}

const json& field(const json& obj, const std::string& name, const std::string& path) {
  if (!obj.is_object()) fail(ErrorCode::kParseError, path + ": expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) fail(ErrorCode::kParseError, path + "." + name + ": missing field");
  return *it;
}

Int parse_integer_string(const json& v, const std::string& path) {
  std::string s;
  if (v.is_string()) s = v.get<std::string>();
  else if (v.is_number_integer()) s = std::to_string(v.get<long long>());
  else fail(ErrorCode::kParseError, path + ": expected a decimal integer string");
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) fail(ErrorCode::kParseError, path + ": expected a decimal integer string");
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') fail(ErrorCode::kParseError, path + ": not a decimal integer: '" + s + "'");
  return Int(s[0] == '+' ? s.substr(1) : s, 10);
}

ProjPoint parse_proj(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(ErrorCode::kParseError, path + ": expected [\"a\",\"b\"]");
  Int a = parse_integer_string(v[0], path + "[0]");
  Int b = parse_integer_string(v[1], path + "[1]");
  if (a == 0 && b == 0) fail(ErrorCode::kParseError, path + ": [0:0] is not a projective point");
  return ProjPoint(a, b);
}

std::vector<double> parse_reals(const json& v, const std::string& path) {
  if (!v.is_array()) fail(ErrorCode::kParseError, path + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(ErrorCode::kParseError, path + "[" + std::to_string(i) + "]: expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

IntVec parse_ints(const json& v, const std::string& path) {
  if (!v.is_array()) fail(ErrorCode::kParseError, path + ": expected an array of integers");
  IntVec out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(parse_integer_string(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

WehlerSurface parse_surface_json(const std::string& text) {
  const json j = parse_text(text, "surface");
  const json& c = field(j, "coeffs", "surface");
  WehlerSurface::Coefficients coeffs;
  auto check = [](const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) fail(ErrorCode::kParseError, path + ": expected an array of length 3");
  };
  check(c, "surface.coeffs");
  for (int a = 0; a < 3; ++a) {
    const std::string pa = "surface.coeffs[" + std::to_string(a) + "]";
    check(c[a], pa);
    for (int b = 0; b < 3; ++b) {
      const std::string pb = pa + "[" + std::to_string(b) + "]";
      check(c[a][b], pb);
      for (int k = 0; k < 3; ++k) {
        const std::string pk = pb + "[" + std::to_string(k) + "]";
        const json& v = c[a][b][k];
        if (v.is_number_integer()) {
          coeffs[a][b][k] = Rat(Int(std::to_string(v.get<long long>())));
        } else if (v.is_string()) {
          try {
            coeffs[a][b][k] = parse_rational(v.get<std::string>());
          } catch (const Error&) {
            fail(ErrorCode::kParseError, pk + ": not a rational \"p/q\": '" + v.get<std::string>() + "'");
          }
        } else {
          fail(ErrorCode::kParseError, pk + ": expected a \"p/q\" string");
        }
      }
    }
  }
  try {
    return WehlerSurface(coeffs);
  } catch (const Error& e) {
    fail(ErrorCode::kParseError, std::string("surface.coeffs: ") + e.what());
  }
}

std::string surface_to_json(const WehlerSurface& s) {
  JsonWriter w;
  w.begin_object().key("coeffs").begin_array();
  for (const auto& plane : s.coefficients()) {
    w.begin_array();
    for (const auto& row : plane) {
      w.begin_array();
      for (const auto& q : row) w.value(to_string(q));
      w.end_array();
    }
    w.end_array();
  }
  w.end_array().end_object();
  return w.str();
}

SurfacePoint parse_point_json(const std::string& text) {
  const json j = parse_text(text, "point");
  SurfacePoint p;
  const char* names[3] = {"x", "y", "z"};
  for (int i = 0; i < 3; ++i) p.coords[i] = parse_proj(field(j, names[i], "point"), std::string("point.") + names[i]);
  return p;
}

std::string point_to_json(const SurfacePoint& p) {
  JsonWriter w;
  w.begin_object();
  const char* names[3] = {"x", "y", "z"};
  for (int i = 0; i < 3; ++i)
    w.key(names[i]).begin_array().value(p.coords[i].a().get_str()).value(p.coords[i].b().get_str()).end_array();
  w.end_object();
  return w.str();
}

GramLattice parse_lattice_json(const std::string& text) {
  const json j = parse_text(text, "lattice");
  const json& rank = field(j, "rank", "lattice");
  if (!rank.is_number_integer() || rank.get<long long>() < 1) fail(ErrorCode::kParseError, "lattice.rank: expected a positive integer");
  const std::size_t n = rank.get<std::size_t>();
  const json& g = field(j, "gram", "lattice");
  if (!g.is_array() || g.size() != n) fail(ErrorCode::kParseError, "lattice.gram: expected rank rows");
  IntMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const IntVec row = parse_ints(g[r], "lattice.gram[" + std::to_string(r) + "]");
    if (row.size() != n) fail(ErrorCode::kParseError, "lattice.gram[" + std::to_string(r) + "]: expected rank entries");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = row[c];
  }
  IntVec dir(n, Int(1));
  if (j.contains("basepoint")) dir = parse_ints(j["basepoint"], "lattice.basepoint");
  return GramLattice(m, dir);
}

BoundaryPoint parse_boundary_json(const std::string& text) {
  const json j = parse_text(text, "boundary");
  const json& kind = field(j, "kind", "boundary");
  if (!kind.is_string()) fail(ErrorCode::kParseError, "boundary.kind: expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "irrational") {
    const auto dir = parse_reals(field(j, "dir", "boundary"), "boundary.dir");
    if (dir.size() < 2) fail(ErrorCode::kParseError, "boundary.dir: expected at least two entries");
    IrrationalRay ray;
    double len = 0;
    for (std::size_t i = 1; i < dir.size(); ++i) len += dir[i] * dir[i];
    len = std::sqrt(len);
    if (!(len > 0) || !(dir[0] > 0)) fail(ErrorCode::kParseError, "boundary.dir: need dir[0] > 0 and a nonzero spatial part");
    for (std::size_t i = 1; i < dir.size(); ++i) ray.spatial.push_back(dir[i] / len);
    return ray;
  }
  if (k == "cusp") {
    CuspPoint cusp;
    cusp.fixed_null = parse_ints(field(j, "E", "boundary"), "boundary.E");
    if (j.contains("scale")) {
      if (!j["scale"].is_number() || !(j["scale"].get<double>() > 0))
        fail(ErrorCode::kParseError, "boundary.scale: expected a positive number");
      cusp.scale = j["scale"].get<double>();
    }
    return cusp;
  }
  fail(ErrorCode::kParseError, "boundary.kind: expected \"irrational\" or \"cusp\"");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// ---------------------------------------------------------------- writer

std::string escape_json(const std::string& s) {
  std::string out;
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out;
}

void JsonWriter::separator() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (!first_.empty()) {
    if (!first_.back()) out_ += ",";
    first_.back() = false;
  }
}

JsonWriter& JsonWriter::begin_object() {
  separator();
  out_ += "{";
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  first_.pop_back();
  out_ += "}";
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separator();
  out_ += "[";
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  first_.pop_back();
  out_ += "]";
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
  separator();
  out_ += "\"" + escape_json(k) + "\":";
  after_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double x) {
  separator();
  // JSON has no NaN/Infinity: emit null.
  out_ += std::isfinite(x) ? format_real(x) : "null";
  return *this;
}

JsonWriter& JsonWriter::value(long long x) {
  separator();
  out_ += std::to_string(x);
  return *this;
}

JsonWriter& JsonWriter::value(bool b) {
  separator();
  out_ += b ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& s) {
  separator();
  out_ += "\"" + escape_json(s) + "\"";
  return *this;
}

JsonWriter& JsonWriter::value(const Rat& q) { return value(to_string(q)); }

JsonWriter& JsonWriter::raw(const std::string& json_text) {
  separator();
  out_ += json_text;
  return *this;
}

void write_height(JsonWriter& w, const HeightValue& h) {
  w.begin_object();
  w.key("value").value(h.value);
  w.key("err").value(h.error_bound);
  w.key("n").value(h.n_used);
  w.key("converged").value(h.converged);
  if (!h.note.empty()) w.key("note").value(h.note);
  w.end_object();
}

std::string height_to_json(const HeightValue& h) {
  JsonWriter w;
  write_height(w, h);
  return w.str();
}

}  // namespace k3h
