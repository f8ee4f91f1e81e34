// k3h command-line tool. Talks to the library only through k3h.h.
//
// Exit codes: 0 ok, 1 input error, 2 non-converged result, 3 verification failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "k3h.h"

namespace {

enum Exit { kOk = 0, kInput = 1, kNonConverged = 2, kVerifyFailed = 3 };

struct RunConfig {
  std::string surface_path;
  double tol = 1e-4;
  std::size_t max_letters = 60;
  std::size_t guard_bits = 200000;
  std::size_t samples = 720;
  std::uint64_t seed = 1;
  std::string cache_dir;
  unsigned threads = 0;
};

// Thrown for any failure that should end the command with an exit code.
struct Abort {
  int code;
  std::string message;
};

[[noreturn]] void input_error(const std::string& msg) { throw Abort{kInput, msg}; }

void check(k3h_status st, const std::string& what) {
  if (st == K3H_OK) return;
  std::string msg = what + ": " + k3h_status_name(st);
  const char* detail = k3h_last_error();
  if (detail && *detail) msg += ": " + std::string(detail);
  // Anything the library rejects traces back to the inputs.
  throw Abort{kInput, msg};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  k3h_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) input_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Surface = std::unique_ptr<k3h_surface, Deleter<k3h_surface, k3h_surface_free>>;
using Point = std::unique_ptr<k3h_point, Deleter<k3h_point, k3h_point_free>>;
using Engine = std::unique_ptr<k3h_engine, Deleter<k3h_engine, k3h_engine_free>>;
using StarSet = std::unique_ptr<k3h_starset, Deleter<k3h_starset, k3h_starset_free>>;

Surface load_surface(const RunConfig& cfg) {
  k3h_surface* s = nullptr;
  if (cfg.surface_path.empty()) check(k3h_surface_default(&s), "default surface");
  else check(k3h_surface_from_json(read_file(cfg.surface_path).c_str(), &s), cfg.surface_path);
  return Surface(s);
}

// A JSON file, or default:NAME[:INDEX] for the named points of the default surface.
Point load_point(const RunConfig& cfg, const std::string& spec) {
  k3h_point* p = nullptr;
  std::string s = spec.empty() ? "default:generic:0" : spec;
  if (s.rfind("default:", 0) == 0) {
    if (!cfg.surface_path.empty()) input_error("--point: default points belong to the default surface");
    std::string name = s.substr(8);
    std::size_t index = 0;
    if (auto colon = name.find(':'); colon != std::string::npos) {
      try {
        index = std::stoul(name.substr(colon + 1));
      } catch (const std::exception&) {
        input_error("--point: bad index in '" + s + "'");
      }
      name = name.substr(0, colon);
    }
    check(k3h_point_default(name.c_str(), index, &p), "--point");
  } else {
    check(k3h_point_from_json(read_file(s).c_str(), &p), s);
  }
  return Point(p);
}

std::vector<int> parse_word(const std::string& text, const std::string& field) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item != "1" && item != "2" && item != "3") input_error(field + ": letters must be 1, 2 or 3, got '" + item + "'");
    out.push_back(item[0] - '0');
  }
  if (out.empty()) input_error(field + ": empty word");
  return out;
}

std::vector<double> parse_reals(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') input_error(field + ": not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

k3h_options options_of(const RunConfig& cfg) {
  k3h_options o;
  k3h_options_default(&o);
  o.tol = cfg.tol;
  o.max_letters = cfg.max_letters;
  o.guard_bits = cfg.guard_bits;
  return o;
}

Engine make_engine(const k3h_surface* s, const RunConfig& cfg) {
  k3h_engine* e = nullptr;
  check(k3h_engine_new(s, cfg.cache_dir.empty() ? nullptr : cfg.cache_dir.c_str(), &e), "engine");
  return Engine(e);
}

void validate(const RunConfig& cfg) {
  if (!(cfg.tol > 0)) input_error("--tol must be positive");
  if (cfg.max_letters < 1) input_error("--max-letters must be at least 1");
  if (cfg.samples < 16) input_error("--samples must be at least 16");
}

// ------------------------------------------------------------- commands

int cmd_surface_check(const RunConfig& cfg, long bound) {
  Surface s = load_surface(cfg);
  char* json = nullptr;
  check(k3h_surface_check(s.get(), bound, &json), "surface check");
  std::cout << take(json) << "\n";
  return kOk;
}

int cmd_point_find(const RunConfig& cfg, long bound) {
  Surface s = load_surface(cfg);
  char* json = nullptr;
  check(k3h_find_points(s.get(), bound, &json), "point find");
  std::cout << take(json) << "\n";
  return kOk;
}

int cmd_orbit(const RunConfig& cfg, const std::string& point, const std::string& word, std::size_t repeat) {
  Surface s = load_surface(cfg);
  Point p = load_point(cfg, point);
  std::vector<int> w;
  for (std::size_t i = 0; i < repeat; ++i) {
    auto part = parse_word(word, "--word");
    w.insert(w.end(), part.begin(), part.end());
  }
  char* json = nullptr;
  check(k3h_orbit(s.get(), p.get(), w.data(), w.size(), cfg.guard_bits, &json), "orbit");
  std::cout << take(json) << "\n";
  return kOk;
}

int cmd_height(const RunConfig& cfg, const std::string& alpha, const std::string& point, double scale) {
  Surface s = load_surface(cfg);
  Point p = load_point(cfg, point);
  Engine e = make_engine(s.get(), cfg);
  const k3h_options o = options_of(cfg);
  k3h_height h{};
  char* json = nullptr;
  const auto colon = alpha.find(':');
  if (colon == std::string::npos) input_error("--alpha: expected cusp:K, cusp:E0,E1,E2, irr:X0,X1,X2 or angle:T");
  const std::string kind = alpha.substr(0, colon), rest = alpha.substr(colon + 1);
  if (kind == "cusp") {
    std::vector<std::int64_t> E;
    if (rest.find(',') == std::string::npos) {
      if (rest != "1" && rest != "2" && rest != "3") input_error("--alpha: chamber cusp must be 1, 2 or 3");
      E.assign(3, 0);
      E[rest[0] - '1'] = 1;
    } else {
      for (double x : parse_reals(rest, "--alpha")) {
        if (x != static_cast<double>(static_cast<std::int64_t>(x))) input_error("--alpha: cusp entries must be integers");
        E.push_back(static_cast<std::int64_t>(x));
      }
    }
    check(k3h_height_cusp(e.get(), p.get(), E.data(), E.size(), scale, &o, &h, &json), "--alpha");
  } else if (kind == "irr") {
    const auto dir = parse_reals(rest, "--alpha");
    check(k3h_height_irrational(e.get(), p.get(), dir.data(), dir.size(), &o, &h, &json), "--alpha");
  } else if (kind == "angle") {
    const auto t = parse_reals(rest, "--alpha");
    if (t.size() != 1) input_error("--alpha: angle takes one number");
    check(k3h_height_angle(e.get(), p.get(), t[0], &o, &h, &json), "--alpha");
  } else {
    input_error("--alpha: unknown kind '" + kind + "'");
  }
  std::cout << take(json) << "\n";
  return h.converged ? kOk : kNonConverged;
}

int cmd_vcan(const RunConfig& cfg, const std::string& point, const std::string& word, std::size_t n_max) {
  Surface s = load_surface(cfg);
  Point p = load_point(cfg, point);
  Engine e = make_engine(s.get(), cfg);
  const auto w = parse_word(word, "--word");
  const k3h_options o = options_of(cfg);
  k3h_height h{};
  char* json = nullptr;
  check(k3h_vcan(e.get(), p.get(), w.data(), w.size(), n_max, &o, &h, &json), "vcan");
  std::cout << take(json) << "\n";
  return h.converged ? kOk : kNonConverged;
}

void print_integral(std::ostream& os, const char* name, const k3h_integral& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "\"%s\":{\"value\":%.17g,\"err\":%.17g,\"quadrature_err\":%.17g,\"non_converged\":%zu,"
                "\"failed\":%zu,\"flagged\":%s}",
                name, r.value, r.err, r.quadrature_err, r.non_converged, r.failed, r.flagged ? "true" : "false");
  os << buf;
}

int cmd_starset(const RunConfig& cfg, const std::string& point, const std::string& out, double offset,
                const std::string& compare) {
  Surface s = load_surface(cfg);
  Point p = load_point(cfg, point);
  Engine e = make_engine(s.get(), cfg);
  const k3h_options o = options_of(cfg);
  k3h_starset* raw = nullptr;
  check(k3h_starset_new(e.get(), p.get(), cfg.samples, offset, cfg.threads, &o, &raw), "starset");
  StarSet ss(raw);
  char* csv = nullptr;
  check(k3h_starset_csv(ss.get(), &csv), "starset");
  const std::string text = take(csv);
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) input_error("--out: cannot write " + out);
    f << text;
  }
  k3h_integral total{}, volume{};
  k3h_shape shape{};
  check(k3h_starset_total(ss.get(), &total), "starset");
  check(k3h_starset_volume(ss.get(), &volume), "starset");
  check(k3h_starset_shape(ss.get(), &shape), "starset");
  std::ostream& report = (out.empty() || out == "-") ? std::cerr : std::cout;
  report << "{\"samples\":" << cfg.samples << ",\"seed\":" << cfg.seed << ",";
  print_integral(report, "total_height", total);
  report << ",";
  print_integral(report, "star_volume", volume);
  char buf[256];
  std::snprintf(buf, sizeof buf, ",\"shape\":{\"positive\":%s,\"continuous\":%s,\"max_jump\":%.17g,\"median_jump\":%.17g}",
                shape.positive ? "true" : "false", shape.continuous ? "true" : "false", shape.max_jump,
                shape.median_jump);
  report << buf;
  if (!compare.empty()) {
    // Total height of gamma P on the same grid, and the relative deviation.
    const auto w = parse_word(compare, "--compare-word");
    char* orbit_json = nullptr;
    check(k3h_orbit(s.get(), p.get(), w.data(), w.size(), cfg.guard_bits, &orbit_json), "--compare-word");
    const std::string oj = take(orbit_json);
    const auto at = oj.rfind("{\"x\"");
    if (oj.find("\"status\":\"complete\"") == std::string::npos || at == std::string::npos)
      input_error("--compare-word: orbit did not complete");
    const std::string last = oj.substr(at, oj.find('}', at) - at + 1);
    k3h_point* q = nullptr;
    check(k3h_point_from_json(last.c_str(), &q), "--compare-word");
    Point qp(q);
    k3h_starset* raw2 = nullptr;
    check(k3h_starset_new(e.get(), qp.get(), cfg.samples, offset, cfg.threads, &o, &raw2), "starset");
    StarSet ss2(raw2);
    k3h_integral t2{};
    check(k3h_starset_total(ss2.get(), &t2), "starset");
    std::snprintf(buf, sizeof buf, ",\"compare\":{\"word\":\"%s\",\"total_height\":%.17g,\"deviation\":%.17g}",
                  compare.c_str(), t2.value, std::fabs(t2.value - total.value) / total.value);
    report << buf;
  }
  report << "}\n";
  return total.flagged ? kNonConverged : kOk;
}

int cmd_total_height(const RunConfig& cfg, const std::string& point, std::size_t depth) {
  Surface s = load_surface(cfg);
  Point p = load_point(cfg, point);
  Engine e = make_engine(s.get(), cfg);
  const k3h_options o = options_of(cfg);
  double dev = 0;
  char* json = nullptr;
  check(k3h_invariance_report(e.get(), p.get(), depth, cfg.samples, cfg.threads, &o, &dev, &json), "total-height");
  const std::string report = take(json);
  std::cout << report << "\n";
  return report.find("\"flagged\":true") != std::string::npos ? kNonConverged : kOk;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite, const std::string& lattice_path) {
  const std::string lattice = lattice_path.empty() ? "" : read_file(lattice_path);
  const k3h_options o = options_of(cfg);
  int passed = 0;
  char* json = nullptr;
  check(k3h_verify(suite.c_str(), lattice_path.empty() ? nullptr : lattice.c_str(), cfg.seed, &o, &passed, &json),
        "verify");
  const std::string report = take(json);
  std::cout << report << "\n";
  if (passed) return kOk;
  // Name the failed properties on stderr as well.
  const auto at = report.find("\"failures\":[");
  const auto end = report.find(']', at);
  std::cerr << "verification failed: " << report.substr(at + 12, end - at - 12) << "\n";
  return kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Canonical heights on the boundary of the ample cone of Wehler K3 surfaces"};
  app.require_subcommand(1);
  RunConfig cfg;
  if (const char* env = std::getenv("K3H_GUARD_BITS")) {
    try {
      cfg.guard_bits = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: K3H_GUARD_BITS: not an integer: '" << env << "'\n";
      return kInput;
    }
  }
  app.add_option("--surface", cfg.surface_path, "surface JSON (default: built-in surface)");
  app.add_option("--tol", cfg.tol, "height tolerance")->capture_default_str();
  app.add_option("--max-letters", cfg.max_letters, "coding length budget")->capture_default_str();
  app.add_option("--guard-bits", cfg.guard_bits, "coordinate bit guard (env K3H_GUARD_BITS)")->capture_default_str();
  app.add_option("--samples", cfg.samples, "star-set grid size")->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for randomized checks")->capture_default_str();
  app.add_option("--cache-dir", cfg.cache_dir, "persist orbit profiles here");
  app.add_option("--threads", cfg.threads, "worker threads (0: all cores)");

  std::string point, word, alpha, out, suite = "all", lattice, compare;
  long bound = 5;
  std::size_t repeat = 1, n_max = 40, depth = 1;
  double scale = 1.0, offset = 0.0;

  auto* surface = app.add_subcommand("surface", "surface commands");
  surface->require_subcommand(1);
  auto* surface_check = surface->add_subcommand("check", "validate a surface and sample its points");
  surface_check->add_option("--bound", bound, "search bound")->capture_default_str();

  auto* pt = app.add_subcommand("point", "point commands");
  pt->require_subcommand(1);
  auto* pt_find = pt->add_subcommand("find", "search for rational points");
  pt_find->add_option("--bound", bound, "height bound on x and y")->capture_default_str();

  auto* orbit = app.add_subcommand("orbit", "apply involutions left to right");
  orbit->add_option("--point", point, "point JSON or default:NAME[:I]");
  orbit->add_option("--word", word, "letters, e.g. 1,2,3")->required();
  orbit->add_option("--repeat", repeat, "repeat the word")->capture_default_str();

  auto* height = app.add_subcommand("height", "canonical boundary height");
  height->add_option("--alpha", alpha, "cusp:K | cusp:E0,E1,E2 | irr:X0,X1,X2 | angle:T")->required();
  height->add_option("--point", point, "point JSON or default:NAME[:I]");
  height->add_option("--scale", scale, "cusp scale")->capture_default_str();

  auto* vcan = app.add_subcommand("vcan", "parabolic height pairing");
  vcan->add_option("--point", point, "point JSON or default:NAME[:I]");
  vcan->add_option("--word", word, "parabolic word")->default_val("1,2");
  vcan->add_option("--n-max", n_max, "iterates")->capture_default_str();

  auto* starset = app.add_subcommand("starset", "star set CSV");
  starset->add_option("--point", point, "point JSON or default:NAME[:I]");
  starset->add_option("--out", out, "CSV path (default stdout)");
  starset->add_option("--offset", offset, "grid rotation")->capture_default_str();
  starset->add_option("--compare-word", compare, "also report the total height of gamma P");

  auto* total = app.add_subcommand("total-height", "total height and its orbit invariance");
  total->add_option("--point", point, "point JSON or default:NAME[:I]");
  total->add_option("--depth", depth, "orbit depth (0..4)")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "run property suites");
  verify->add_option("--suite", suite, "lattice|hyperbolic|wehler|heights|invariants|all")->capture_default_str();
  verify->add_option("--lattice", lattice, "lattice JSON replacing the Wehler form");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    validate(cfg);
    if (surface_check->parsed()) return cmd_surface_check(cfg, bound);
    if (pt_find->parsed()) return cmd_point_find(cfg, bound);
    if (orbit->parsed()) return cmd_orbit(cfg, point, word, repeat);
    if (height->parsed()) return cmd_height(cfg, alpha, point, scale);
    if (vcan->parsed()) return cmd_vcan(cfg, point, word, n_max);
    if (starset->parsed()) return cmd_starset(cfg, point, out, offset, compare);
    if (total->parsed()) return cmd_total_height(cfg, point, depth);
    if (verify->parsed()) return cmd_verify(cfg, suite, lattice);
  } catch (const Abort& a) {
    std::cerr << "error: " << a.message << "\n";
    return a.code;
  }
  return kInput;
}
