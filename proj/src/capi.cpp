#include "k3h.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "k3h/heights.hpp"
#include "k3h/invariants.hpp"
#include "k3h/io.hpp"
#include "k3h/verify.hpp"

struct k3h_surface {
  k3h::WehlerSurface surface;
};

struct k3h_point {
  k3h::SurfacePoint point;
};

struct k3h_engine {
  std::shared_ptr<k3h::OrbitCache> cache;
  std::unique_ptr<k3h::HeightEngine> engine;
};

struct k3h_starset {
  std::vector<k3h::StarSample> samples;
};

namespace {

thread_local std::string g_last_error;

template <class F>
k3h_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return K3H_OK;
  } catch (const k3h::Error& e) {
    g_last_error = e.what();
    return static_cast<k3h_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return K3H_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return K3H_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) k3h::fail(k3h::ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_string(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

k3h::HeightOptions options(const k3h_options* opt) {
  k3h::HeightOptions o;
  if (opt) {
    o.tol = opt->tol;
    o.max_letters = opt->max_letters;
    o.guard_bits = opt->guard_bits;
  }
  if (!(o.tol > 0)) k3h::fail(k3h::ErrorCode::kInvalidArgument, "tol must be positive");
  if (o.max_letters < 1) k3h::fail(k3h::ErrorCode::kInvalidArgument, "max_letters must be at least 1");
  return o;
}

std::vector<int> word_of(const int* letters, std::size_t n) {
  if (n > 0) require(letters, "letters");
  std::vector<int> w(letters, letters + n);
  for (int l : w)
    if (l < 1 || l > 3) k3h::fail(k3h::ErrorCode::kInvalidArgument, "letters must be 1, 2 or 3");
  return w;
}

void emit(const k3h::HeightValue& hv, k3h_height* out, char** json) {
  if (out) {
    out->value = hv.value;
    out->err = hv.error_bound;
    out->n = hv.n_used;
    out->converged = hv.converged ? 1 : 0;
  }
  set_string(json, k3h::height_to_json(hv));
}

void emit(const k3h::IntegralResult& r, k3h_integral* out) {
  require(out, "out");
  out->value = r.value;
  out->err = r.error_bound;
  out->quadrature_err = r.quadrature_error;
  out->non_converged = r.non_converged;
  out->failed = r.failed;
  out->flagged = r.flagged ? 1 : 0;
}

const char* status_text(k3h::OrbitStatus s) {
  switch (s) {
    case k3h::OrbitStatus::kComplete: return "complete";
    case k3h::OrbitStatus::kBitGuardExceeded: return "bit_guard_exceeded";
    case k3h::OrbitStatus::kDegenerateFiber: return "degenerate_fiber";
  }
  return "unknown";
}

}  // namespace

extern "C" {

const char* k3h_version(void) { return "1.0.0"; }

const char* k3h_last_error(void) { return g_last_error.c_str(); }

const char* k3h_status_name(k3h_status status) {
  return k3h::error_code_name(static_cast<k3h::ErrorCode>(status));
}

void k3h_string_free(char* s) { std::free(s); }

void k3h_options_default(k3h_options* out) {
  if (!out) return;
  out->tol = 1e-4;
  out->max_letters = 60;
  out->guard_bits = k3h::kDefaultGuardBits;
}

// ------------------------------------------------------------- surfaces

k3h_status k3h_surface_default(k3h_surface** out) {
  return guarded([&] {
    require(out, "out");
    *out = new k3h_surface{k3h::WehlerSurface::default_surface()};
  });
}

k3h_status k3h_surface_from_json(const char* json, k3h_surface** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new k3h_surface{k3h::parse_surface_json(json)};
  });
}

void k3h_surface_free(k3h_surface* s) { delete s; }

k3h_status k3h_surface_to_json(const k3h_surface* s, char** json) {
  return guarded([&] {
    require(s, "surface");
    require(json, "json");
    *json = dup(k3h::surface_to_json(s->surface));
  });
}

k3h_status k3h_surface_hash(const k3h_surface* s, uint64_t* out) {
  return guarded([&] {
    require(s, "surface");
    require(out, "out");
    *out = s->surface.hash();
  });
}

k3h_status k3h_surface_check(const k3h_surface* s, long bound, char** json) {
  return guarded([&] {
    require(s, "surface");
    require(json, "json");
    const auto pts = k3h::find_points(s->surface, bound);
    std::size_t degenerate = 0, bad = 0;
    for (const auto& p : pts) {
      if (!s->surface.contains(p)) ++bad;
      for (int i = 1; i <= 3; ++i) {
        try {
          if (s->surface.involution(i, s->surface.involution(i, p)) != p) ++bad;
        } catch (const k3h::Error& e) {
          if (e.code() != k3h::ErrorCode::kDegenerateFiber) throw;
          ++degenerate;
        }
      }
    }
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(s->surface.hash()));
    k3h::JsonWriter w;
    w.begin_object();
    w.key("hash").value(std::string(hash));
    w.key("search_bound").value(static_cast<long long>(bound));
    w.key("points_found").value(pts.size());
    w.key("degenerate_fibers").value(degenerate);
    w.key("involution_failures").value(bad);
    w.key("ok").value(bad == 0);
    w.end_object();
    *json = dup(w.str());
  });
}

// --------------------------------------------------------------- points

k3h_status k3h_point_from_json(const char* json, k3h_point** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new k3h_point{k3h::parse_point_json(json)};
  });
}

k3h_status k3h_point_to_json(const k3h_point* p, char** json) {
  return guarded([&] {
    require(p, "point");
    require(json, "json");
    *json = dup(k3h::point_to_json(p->point));
  });
}

void k3h_point_free(k3h_point* p) { delete p; }

size_t k3h_default_generic_count(void) { return k3h::default_surface_points().generic.size(); }

k3h_status k3h_point_default(const char* name, size_t index, k3h_point** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    const auto& d = k3h::default_surface_points();
    const std::string n = name;
    if (n == "generic") {
      if (index >= d.generic.size()) k3h::fail(k3h::ErrorCode::kInvalidArgument, "generic point index out of range");
      *out = new k3h_point{d.generic[index]};
    } else if (n == "fixed") {
      *out = new k3h_point{d.fixed_by_s1_s2};
    } else if (n == "order_two") {
      *out = new k3h_point{d.order_two};
    } else if (n == "periodic") {
      *out = new k3h_point{d.hyperbolic_periodic};
    } else {
      k3h::fail(k3h::ErrorCode::kInvalidArgument, "unknown default point '" + n + "'");
    }
  });
}

k3h_status k3h_surface_contains(const k3h_surface* s, const k3h_point* p, int* on_surface) {
  return guarded([&] {
    require(s, "surface");
    require(p, "point");
    require(on_surface, "on_surface");
    *on_surface = s->surface.contains(p->point) ? 1 : 0;
  });
}

k3h_status k3h_involution(const k3h_surface* s, int axis, const k3h_point* p, k3h_point** out) {
  return guarded([&] {
    require(s, "surface");
    require(p, "point");
    require(out, "out");
    if (axis < 1 || axis > 3) k3h::fail(k3h::ErrorCode::kInvalidArgument, "axis must be 1, 2 or 3");
    *out = new k3h_point{s->surface.involution(axis, p->point)};
  });
}

k3h_status k3h_find_points(const k3h_surface* s, long bound, char** json) {
  return guarded([&] {
    require(s, "surface");
    require(json, "json");
    if (bound < 1) k3h::fail(k3h::ErrorCode::kInvalidArgument, "bound must be positive");
    k3h::JsonWriter w;
    w.begin_array();
    for (const auto& p : k3h::find_points(s->surface, bound)) w.raw(k3h::point_to_json(p));
    w.end_array();
    *json = dup(w.str());
  });
}

k3h_status k3h_orbit(const k3h_surface* s, const k3h_point* p, const int* letters, size_t n_letters,
                     size_t guard_bits, char** json) {
  return guarded([&] {
    require(s, "surface");
    require(p, "point");
    require(json, "json");
    if (!s->surface.contains(p->point)) k3h::fail(k3h::ErrorCode::kNotOnSurface, "point is not on the surface");
    const auto o = k3h::orbit(s->surface, word_of(letters, n_letters), p->point, guard_bits);
    k3h::JsonWriter w;
    w.begin_object();
    w.key("status").value(status_text(o.status));
    if (!o.message.empty()) w.key("message").value(o.message);
    w.key("repeat_step");
    if (o.repeat_step) w.value(*o.repeat_step);
    else w.raw("null");
    w.key("period");
    if (o.period) w.value(*o.period);
    else w.raw("null");
    w.key("heights").begin_array();
    for (const auto& q : o.points) w.value(k3h::basis_height(q, std::array<double, 3>{1, 1, 1}));
    w.end_array();
    w.key("points").begin_array();
    for (const auto& q : o.points) w.raw(k3h::point_to_json(q));
    w.end_array();
    w.end_object();
    *json = dup(w.str());
  });
}

k3h_status k3h_classify_word(const int* letters, size_t n_letters, char** json) {
  return guarded([&] {
    require(json, "json");
    const auto lattice = k3h::GramLattice::wehler();
    const auto m = k3h::word_matrix(word_of(letters, n_letters));
    const auto iso = k3h::classify_isometry(lattice, m);
    k3h::JsonWriter w;
    w.begin_object();
    w.key("matrix").begin_array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      w.begin_array();
      for (std::size_t c = 0; c < m.cols(); ++c) w.raw(m(r, c).get_str());
      w.end_array();
    }
    w.end_array();
    if (iso.is_finite_order()) {
      w.key("kind").value("finite_order");
      w.key("order").value(static_cast<long long>(std::get<k3h::FiniteOrder>(iso.kind).order));
    } else if (iso.is_parabolic()) {
      const auto& par = iso.parabolic();
      w.key("kind").value("parabolic");
      w.key("E").begin_array();
      for (const auto& x : par.fixed_null) w.raw(x.get_str());
      w.end_array();
      w.key("xi").begin_array();
      for (const auto& x : k3h::reduce_mod(par.xi, par.fixed_null)) w.value(x);
      w.end_array();
      w.key("ns_norm_sq").value(k3h::ns_norm_sq(lattice, iso));
    } else {
      const auto& h = iso.hyperbolic();
      w.key("kind").value("hyperbolic");
      w.key("lambda").value(h.lambda);
      w.key("expanded").begin_array();
      for (double x : h.expanded) w.value(x);
      w.end_array();
      w.key("contracted").begin_array();
      for (double x : h.contracted) w.value(x);
      w.end_array();
    }
    w.end_object();
    *json = dup(w.str());
  });
}

// -------------------------------------------------------------- engines

k3h_status k3h_engine_new(const k3h_surface* s, const char* cache_dir, k3h_engine** out) {
  return guarded([&] {
    require(s, "surface");
    require(out, "out");
    auto e = std::make_unique<k3h_engine>();
    std::optional<std::filesystem::path> dir;
    if (cache_dir && *cache_dir) dir = std::filesystem::path(cache_dir);
    e->cache = std::make_shared<k3h::OrbitCache>(dir);
    e->engine = std::make_unique<k3h::HeightEngine>(s->surface, e->cache);
    *out = e.release();
  });
}

void k3h_engine_free(k3h_engine* e) { delete e; }

k3h_status k3h_engine_cache_stats(const k3h_engine* e, size_t* hits, size_t* misses) {
  return guarded([&] {
    require(e, "engine");
    if (hits) *hits = e->cache->hits();
    if (misses) *misses = e->cache->misses();
  });
}

static void check_point(const k3h_engine* e, const k3h_point* p) {
  require(e, "engine");
  require(p, "point");
  if (!e->engine->surface().contains(p->point)) k3h::fail(k3h::ErrorCode::kNotOnSurface, "point is not on the surface");
}

k3h_status k3h_height_irrational(const k3h_engine* e, const k3h_point* p, const double* dir, size_t len,
                                 const k3h_options* opt, k3h_height* out, char** json) {
  return guarded([&] {
    check_point(e, p);
    require(dir, "dir");
    const std::size_t rank = e->engine->lattice().rank();
    if (len != rank) k3h::fail(k3h::ErrorCode::kDimensionMismatch, "dir must have one entry per lattice rank");
    if (!(dir[0] > 0)) k3h::fail(k3h::ErrorCode::kInvalidArgument, "dir[0] must be positive");
    k3h::IrrationalRay ray;
    double n = 0;
    for (std::size_t i = 1; i < len; ++i) n += dir[i] * dir[i];
    n = std::sqrt(n);
    if (!(n > 0)) k3h::fail(k3h::ErrorCode::kInvalidArgument, "dir has no spatial part");
    for (std::size_t i = 1; i < len; ++i) ray.spatial.push_back(dir[i] / n);
    emit(e->engine->canonical_boundary_height(ray, p->point, options(opt)), out, json);
  });
}

k3h_status k3h_height_angle(const k3h_engine* e, const k3h_point* p, double theta, const k3h_options* opt,
                            k3h_height* out, char** json) {
  return guarded([&] {
    check_point(e, p);
    emit(e->engine->canonical_boundary_height(k3h::ray_from_angle(theta), p->point, options(opt)), out, json);
  });
}

k3h_status k3h_height_cusp(const k3h_engine* e, const k3h_point* p, const int64_t* fixed_null, size_t len,
                           double scale, const k3h_options* opt, k3h_height* out, char** json) {
  return guarded([&] {
    check_point(e, p);
    require(fixed_null, "fixed_null");
    const auto& lattice = e->engine->lattice();
    if (len != lattice.rank()) k3h::fail(k3h::ErrorCode::kDimensionMismatch, "E must have one entry per lattice rank");
    k3h::CuspPoint cusp;
    for (std::size_t i = 0; i < len; ++i) cusp.fixed_null.push_back(k3h::Int(std::to_string(fixed_null[i])));
    if (lattice.pair(cusp.fixed_null, cusp.fixed_null) != 0) k3h::fail(k3h::ErrorCode::kInvalidArgument, "E is not null");
    if (lattice.pair(lattice.basepoint_direction(), cusp.fixed_null) <= 0)
      k3h::fail(k3h::ErrorCode::kNonPositiveVector, "E must have positive mass");
    cusp.scale = scale;
    emit(e->engine->rational_boundary_height(cusp, p->point, options(opt)), out, json);
  });
}

k3h_status k3h_vcan(const k3h_engine* e, const k3h_point* p, const int* letters, size_t n_letters, size_t n_max,
                    const k3h_options* opt, k3h_height* out, char** json) {
  return guarded([&] {
    check_point(e, p);
    emit(e->engine->vcan_pairing(word_of(letters, n_letters), p->point, n_max, options(opt)), out, json);
  });
}

k3h_status k3h_hyperbolic_height(const k3h_engine* e, const k3h_point* p, const int* letters, size_t n_letters,
                                 int sign, const k3h_options* opt, k3h_height* out, char** json) {
  return guarded([&] {
    check_point(e, p);
    emit(e->engine->hyperbolic_canonical_height(word_of(letters, n_letters), sign, p->point, options(opt)), out,
         json);
  });
}

// ------------------------------------------------------------ star sets

k3h_status k3h_starset_new(const k3h_engine* e, const k3h_point* p, size_t samples, double theta_offset,
                           unsigned threads, const k3h_options* opt, k3h_starset** out) {
  return guarded([&] {
    check_point(e, p);
    require(out, "out");
    k3h::StarOptions so;
    so.samples = samples;
    so.theta_offset = theta_offset;
    so.threads = threads;
    auto s = std::make_unique<k3h_starset>();
    s->samples = k3h::star_set(e->engine->frame(), k3h::engine_oracle(*e->engine, p->point, options(opt)), so);
    *out = s.release();
  });
}

void k3h_starset_free(k3h_starset* s) { delete s; }

k3h_status k3h_starset_csv(const k3h_starset* s, char** csv) {
  return guarded([&] {
    require(s, "starset");
    require(csv, "csv");
    *csv = dup(k3h::star_csv(s->samples));
  });
}

k3h_status k3h_starset_total(const k3h_starset* s, k3h_integral* out) {
  return guarded([&] {
    require(s, "starset");
    emit(k3h::total_height(s->samples), out);
  });
}

k3h_status k3h_starset_volume(const k3h_starset* s, k3h_integral* out) {
  return guarded([&] {
    require(s, "starset");
    emit(k3h::star_volume(s->samples), out);
  });
}

k3h_status k3h_starset_shape(const k3h_starset* s, k3h_shape* out) {
  return guarded([&] {
    require(s, "starset");
    require(out, "out");
    const auto sh = k3h::star_shape(s->samples);
    out->positive = sh.positive ? 1 : 0;
    out->continuous = sh.continuous ? 1 : 0;
    out->max_jump = sh.max_jump;
    out->median_jump = sh.median_jump;
  });
}

k3h_status k3h_invariance_report(const k3h_engine* e, const k3h_point* p, size_t depth, size_t samples,
                                 unsigned threads, const k3h_options* opt, double* max_deviation, char** json) {
  return guarded([&] {
    check_point(e, p);
    k3h::StarOptions so;
    so.samples = samples;
    so.threads = threads;
    const auto rep = k3h::invariance_report(*e->engine, p->point, depth, options(opt), so);
    if (max_deviation) *max_deviation = rep.max_deviation;
    if (!json) return;
    k3h::JsonWriter w;
    w.begin_object();
    w.key("depth").value(depth);
    w.key("samples").value(samples);
    w.key("max_deviation").value(rep.max_deviation);
    w.key("rows").begin_array();
    for (const auto& row : rep.rows) {
      w.begin_object();
      w.key("word").value(k3h::GeneratorWord{row.word, {}, {}}.to_string());
      if (row.skipped) {
        w.key("skipped").value(true);
        w.key("error").value(row.error);
      } else {
        w.key("point").raw(k3h::point_to_json(row.point));
        w.key("total").value(row.total.value);
        w.key("err").value(row.total.error_bound);
        w.key("quadrature_err").value(row.total.quadrature_error);
        w.key("non_converged").value(row.total.non_converged);
        w.key("failed").value(row.total.failed);
        w.key("flagged").value(row.total.flagged);
      }
      w.end_object();
    }
    w.end_array();
    w.end_object();
    *json = dup(w.str());
  });
}

// --------------------------------------------------------------- verify

k3h_status k3h_verify(const char* suite, const char* lattice_json, uint64_t seed, const k3h_options* opt,
                      int* passed, char** report_json) {
  return guarded([&] {
    require(suite, "suite");
    k3h::VerifyConfig cfg;
    cfg.seed = seed;
    if (lattice_json) cfg.lattice = k3h::parse_lattice_json(lattice_json);
    const k3h::HeightOptions o = options(opt);
    cfg.tol = o.tol;
    cfg.max_letters = o.max_letters;
    cfg.guard_bits = o.guard_bits;
    const auto report = k3h::run_verify(suite, cfg);
    if (passed) *passed = report.passed() ? 1 : 0;
    set_string(report_json, report.to_json());
  });
}

}  // extern "C"
