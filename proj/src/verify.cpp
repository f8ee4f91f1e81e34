#include "k3h/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "k3h/heights.hpp"
#include "k3h/hyperbolic.hpp"
#include "k3h/invariants.hpp"
#include "k3h/io.hpp"
#include "k3h/wehler.hpp"

namespace k3h {

namespace {

const double kLambda = 9.0 + 4.0 * std::sqrt(5.0);

// A property returns an empty string on success, otherwise what went wrong.
using Property = std::function<std::string()>;

class SuiteRunner {
 public:
  SuiteRunner(std::string suite, VerifyReport& report) : suite_(std::move(suite)), report_(report) {}

  void check(const std::string& name, const Property& prop) {
    PropertyResult r;
    r.suite = suite_;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r.detail = prop();
      r.passed = r.detail.empty();
    } catch (const Error& e) {
      r.detail = std::string(error_code_name(e.code())) + ": " + e.what();
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report_.properties.push_back(std::move(r));
  }

 private:
  std::string suite_;
  VerifyReport& report_;
};

std::string fmt(double x) { return format_real(x); }

std::vector<int> random_word(std::mt19937_64& rng, std::size_t length) {
  std::uniform_int_distribution<int> letter(1, 3);
  std::vector<int> w;
  while (w.size() < length) {
    const int l = letter(rng);
    if (w.empty() || w.back() != l) w.push_back(l);
  }
  return w;
}

std::vector<int> reversed(std::vector<int> w) {
  std::reverse(w.begin(), w.end());
  return w;
}

std::vector<double> times(const IntMatrix& m, const std::vector<double>& v) {
  std::vector<double> out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j).get_d() * v[j];
  return out;
}

IntVec unit(std::size_t n, std::size_t i) {
  IntVec v(n, Int(0));
  v[i] = 1;
  return v;
}

// ------------------------------------------------------------- lattice

void lattice_suite(const VerifyConfig& cfg, VerifyReport& report) {
  SuiteRunner s("lattice", report);
  const GramLattice lat = cfg.lattice ? *cfg.lattice : GramLattice::wehler();
  std::mt19937_64 rng(cfg.seed);

  s.check("isometry: generators and words preserve the form", [&]() -> std::string {
    for (int i = 1; i <= 3; ++i)
      if (!lat.preserves(ns_action(i))) return "ns_action(" + std::to_string(i) + ") does not preserve the form";
    for (int t = 0; t < 50; ++t) {
      const auto w = random_word(rng, 1 + t % 20);
      if (!lat.preserves(word_matrix(w))) return "word " + GeneratorWord{w, {}, {}}.to_string();
    }
    return "";
  });
  s.check("isometry: pairings of images are preserved", [&]() -> std::string {
    std::uniform_int_distribution<int> coef(-9, 9);
    for (int t = 0; t < 40; ++t) {
      const IntMatrix m = word_matrix(random_word(rng, 1 + t % 10));
      IntVec v(3), w(3);
      for (int k = 0; k < 3; ++k) v[k] = coef(rng), w[k] = coef(rng);
      if (lat.pair(m * v, m * w) != lat.pair(v, w)) return "pairing changed under a word of length " + std::to_string(1 + t % 10);
    }
    return "";
  });
  s.check("gram_pair: h1.h2 = 2, h1.h1 = 0, (h1+h2+h3)^2 = 12", [&]() -> std::string {
    const Rat a = gram_pair(lat, to_rat(unit(3, 0)), to_rat(unit(3, 1)));
    const Rat b = gram_pair(lat, to_rat(unit(3, 0)), to_rat(unit(3, 0)));
    const RatVec sum{1, 1, 1};
    const Rat c = gram_pair(lat, sum, sum);
    if (a != 2 || b != 0 || c != 12) return "got " + to_string(a) + ", " + to_string(b) + ", " + to_string(c);
    return "";
  });
  s.check("involutions square to the identity", [&]() -> std::string {
    for (int i = 1; i <= 3; ++i)
      if (!(ns_action(i) * ns_action(i) == IntMatrix::identity(3))) return "s" + std::to_string(i) + "^2 != I";
    return "";
  });
  s.check("classification: s1 finite, s1s2 parabolic at h3, s1s2s3 hyperbolic", [&]() -> std::string {
    const Isometry a = classify_isometry(lat, ns_action(1));
    if (!a.is_finite_order() || std::get<FiniteOrder>(a.kind).order != 2) return "s1 is not of order 2";
    const Isometry b = classify_isometry(lat, word_matrix({1, 2}));
    if (!b.is_parabolic() || b.parabolic().fixed_null != unit(3, 2)) return "s1s2 is not parabolic fixing h3";
    const Isometry c = classify_isometry(lat, word_matrix({1, 2, 3}));
    if (!c.is_hyperbolic()) return "s1s2s3 is not hyperbolic";
    const double err = std::fabs(c.hyperbolic().lambda - kLambda);
    if (err > 1e-9) return "lambda off by " + fmt(err);
    return "";
  });
  s.check("parabolic: xi(s1s2) = -h1+h2 mod h3 with norm 4", [&]() -> std::string {
    const Isometry g = classify_isometry(lat, word_matrix({1, 2}));
    const RatVec xi = reduce_mod(g.parabolic().xi, g.parabolic().fixed_null);
    if (xi != RatVec{-1, 1, 0}) return "xi = (" + to_string(xi[0]) + "," + to_string(xi[1]) + "," + to_string(xi[2]) + ")";
    if (ns_norm_sq(lat, g) != 4) return "norm " + to_string(ns_norm_sq(lat, g));
    return "";
  });
  s.check("parabolic: norm of g^k is k^2 times the norm of g", [&]() -> std::string {
    for (const auto& w : std::vector<std::vector<int>>{{1, 2}, {2, 3}, {1, 3}, {3, 1, 2, 3}}) {
      const IntMatrix m = word_matrix(w);
      const Rat base = ns_norm_sq(lat, classify_isometry(lat, m));
      for (unsigned k = 1; k <= 10; ++k) {
        const Rat nk = ns_norm_sq(lat, classify_isometry(lat, matrix_power(m, k)));
        if (nk != Rat(k * k) * base) return "word " + GeneratorWord{w, {}, {}}.to_string() + ", k=" + std::to_string(k);
      }
    }
    return "";
  });
  s.check("parabolic: exp_parabolic inverts parabolic_xi", [&]() -> std::string {
    for (const auto& w : std::vector<std::vector<int>>{{1, 2}, {2, 1}, {2, 3}, {3, 1}, {1, 2, 1, 2}, {2, 3, 1, 2}}) {
      const IntMatrix m = word_matrix(w);
      const Isometry g = classify_isometry(lat, m);
      if (!g.is_parabolic()) return GeneratorWord{w, {}, {}}.to_string() + " is not parabolic";
      const RatVec xi = parabolic_xi(lat, m, g.parabolic().fixed_null);
      if (!(exp_parabolic(lat, g.parabolic().fixed_null, xi) == to_rat(m)))
        return "round trip failed for " + GeneratorWord{w, {}, {}}.to_string();
    }
    return "";
  });
  s.check("parabolic: exp is additive in xi", [&]() -> std::string {
    const IntVec e = unit(3, 2);
    const RatVec a{-1, 1, 0}, b{Rat(1, 2), Rat(-1, 2), 0};
    RatVec ab{a[0] + b[0], a[1] + b[1], a[2] + b[2]};
    if (!(exp_parabolic(lat, e, a) * exp_parabolic(lat, e, b) == exp_parabolic(lat, e, ab))) return "not additive";
    if (!(exp_parabolic(lat, e, RatVec{0, 0, 0}) == RatMatrix::identity(3))) return "exp(0) != I";
    return "";
  });
  s.check("classification agrees for M and its inverse", [&]() -> std::string {
    int hyperbolic = 0;
    for (int t = 0; t < 30; ++t) {
      const auto w = random_word(rng, 3 + t % 8);
      const Isometry a = classify_isometry(lat, word_matrix(w));
      const Isometry b = classify_isometry(lat, word_matrix(reversed(w)));
      if (a.kind.index() != b.kind.index()) return "classes differ for " + GeneratorWord{w, {}, {}}.to_string();
      if (!a.is_hyperbolic()) continue;
      ++hyperbolic;
      const auto& ha = a.hyperbolic();
      const auto& hb = b.hyperbolic();
      if (std::fabs(ha.lambda - hb.lambda) > 1e-9 * ha.lambda) return "lambda differs";
      double d = 0;
      for (int k = 0; k < 3; ++k) d = std::max(d, std::fabs(ha.expanded[k] - hb.contracted[k]));
      if (d > 1e-6) return "alpha+ and alpha- do not swap (" + fmt(d) + ")";
    }
    if (hyperbolic == 0) return "no hyperbolic samples";
    return "";
  });
  s.check("mass: omega0 -> 1, h3 -> 4/sqrt(12)", [&]() -> std::string {
    const auto w0 = lat.basepoint();
    const double m0 = lat.mass(w0);
    const double m3 = lat.mass(std::vector<double>{0, 0, 1});
    if (std::fabs(m0 - 1) > 1e-12) return "mass(omega0) = " + fmt(m0);
    if (std::fabs(m3 - 4 / std::sqrt(12.0)) > 1e-12) return "mass(h3) = " + fmt(m3);
    return "";
  });
}

// ---------------------------------------------------------- hyperbolic

void hyperbolic_suite(const VerifyConfig& cfg, VerifyReport& report) {
  SuiteRunner s("hyperbolic", report);
  const GramLattice lat = GramLattice::wehler();
  const DiagonalFrame frame(lat);
  const Chamber ch = Chamber::wehler();
  std::mt19937_64 rng(cfg.seed + 1);
  std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);

  s.check("chamber: walls face omega0, cusps at h1, h2, h3", [&]() -> std::string {
    for (std::size_t i = 0; i < ch.size(); ++i)
      if (lat.pair(lat.basepoint_direction(), ch.wall_normals[i]) <= 0) return "wall " + std::to_string(i + 1) + " faces away";
    if (ch.cusps.size() != 3) return "expected three cusps";
    for (std::size_t k = 0; k < 3; ++k) {
      const auto& c = ch.cusps[k];
      if (c.fixed_null != unit(3, k)) return "cusp " + std::to_string(k) + " is not h" + std::to_string(k + 1);
      if (lat.pair(c.fixed_null, c.fixed_null) != 0) return "cusp class is not null";
      for (std::size_t i = 0; i < 3; ++i) {
        const bool on = std::find(c.walls.begin(), c.walls.end(), static_cast<int>(i + 1)) != c.walls.end();
        const Int p = lat.pair(c.fixed_null, ch.wall_normals[i]);
        if (on ? p != 0 : p <= 0) return "cusp h" + std::to_string(k + 1) + " vs wall " + std::to_string(i + 1);
      }
    }
    return "";
  });
  s.check("diagonal frame: T^t G T = diag(1,-1,-1), deterministic", [&]() -> std::string {
    const auto t = diagonalize_form(lat);
    if (t != diagonalize_form(lat)) return "not deterministic";
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        std::vector<double> ci(3), cj(3);
        for (std::size_t r = 0; r < 3; ++r) ci[r] = t[r][i], cj[r] = t[r][j];
        const double want = i != j ? 0.0 : (i == 0 ? 1.0 : -1.0);
        if (std::fabs(lat.pair(ci, cj) - want) > 1e-12) return "entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
      }
    const auto w0 = lat.basepoint();
    for (std::size_t r = 0; r < 3; ++r)
      if (std::fabs(t[r][0] - w0[r]) > 1e-12) return "first column is not omega0";
    for (int k = 0; k < 8; ++k) {
      const auto v = frame.null_vector(ray_from_angle(angle(rng)));
      if (std::fabs(lat.pair(v, v)) > 1e-10 || std::fabs(lat.mass(v) - 1) > 1e-10) return "null vector check";
    }
    return "";
  });
  s.check("hyp_distance: zero, symmetric, invariant, log lambda along the axis", [&]() -> std::string {
    const auto w0 = lat.basepoint();
    if (std::fabs(hyp_distance(lat, w0, w0)) > 1e-12) return "d(w0,w0) != 0";
    const auto s1w = times(ns_action(1), w0);
    if (std::fabs(hyp_distance(lat, w0, s1w) - hyp_distance(lat, s1w, w0)) > 1e-12) return "not symmetric";
    const HiVec w0h = to_hi(lat.basepoint_direction());
    for (int t = 0; t < 20; ++t) {
      const IntMatrix g = word_matrix(random_word(rng, 1 + t % 10));
      const IntVec u = word_matrix(random_word(rng, 3)) * lat.basepoint_direction();
      const double d0 = hyp_distance(lat, w0h, to_hi(u));
      const double d1 = hyp_distance(lat, to_hi(g * lat.basepoint_direction()), to_hi(g * u));
      if (std::fabs(d0 - d1) > 1e-9 * std::max(1.0, d0)) return "not invariant: " + fmt(d0) + " vs " + fmt(d1);
    }
    const double d = hyp_distance(lat, w0, times(word_matrix({1, 2, 3}), w0));
    if (std::fabs(d - std::log(kLambda)) > 1.0) return "axis displacement " + fmt(d);
    return "";
  });
  s.check("horoball depth: omega0 at h3 is 4/sqrt(12), linear, decreasing inward", [&]() -> std::string {
    const auto w0 = lat.basepoint();
    const double d = horoball_depth(lat, w0, unit(3, 2));
    if (std::fabs(d - 4 / std::sqrt(12.0)) > 1e-12) return "depth " + fmt(d);
    if (std::fabs(horoball_depth(lat, w0, IntVec{0, 0, 2}) - 2 * d) > 1e-12) return "not linear in E";
    double prev = d;
    for (double t = 0.5; t <= 64; t *= 2) {
      std::vector<double> v{w0[0], w0[1], w0[2] + t};
      const double n = std::sqrt(lat.pair(v, v));
      for (double& x : v) x /= n;
      const double cur = horoball_depth(lat, v, unit(3, 2));
      if (!(cur < prev)) return "not decreasing at t=" + fmt(t);
      prev = cur;
    }
    return "";
  });
  s.check("coding: cusps h3 and s1 h1", [&]() -> std::string {
    CuspPoint h3;
    h3.fixed_null = unit(3, 2);
    const Coding a = code_boundary_ray(frame, ch, h3);
    if (!a.word.letters.empty() || !a.complete || a.chamber_cusp != std::size_t{2}) return "h3 is not coded by the empty word";
    CuspPoint c;
    c.fixed_null = IntVec{-1, 2, 2};
    const Coding b = code_boundary_ray(frame, ch, c);
    if (b.word.to_string() != "1" || b.chamber_cusp != std::size_t{0}) return "s1 h1 coded as '" + b.word.to_string() + "'";
    return "";
  });
  s.check("coding: irrational rays reduce into the chamber and reconstruct", [&]() -> std::string {
    std::vector<IrrationalRay> targets{IrrationalRay{{0.3 / std::hypot(0.3, 0.17), 0.17 / std::hypot(0.3, 0.17)}}};
    for (int k = 0; k < 5; ++k) targets.push_back(ray_from_angle(angle(rng)));
    for (const auto& t : targets) {
      CodingOptions o;
      o.max_letters = 60;
      const Coding c = code_boundary_ray(frame, ch, t, o);
      if (c.cusp) continue;
      if (c.word.letters.size() != 60 && !c.precision_exhausted) return "word stopped early";
      // A boundary point outside the ideal triangle is cut off by exactly one
      // wall, and that wall is never the one just crossed.
      int violated = 0;
      for (std::size_t i = 0; i < ch.size(); ++i) {
        if (lat.pair(c.reduced, to_double(ch.wall_normals[i])) >= -1e-10) continue;
        ++violated;
        if (static_cast<int>(i + 1) == c.word.letters.back()) return "reduced vector violates the last wall";
      }
      if (violated > 1) return "reduced vector violates " + std::to_string(violated) + " walls";
      const auto back = times(c.prefix, c.reduced);
      const double dist = frame.angular_distance(back, frame.null_vector(t));
      if (dist > 1e-6) return "reconstruction off by " + fmt(dist);
    }
    return "";
  });
  s.check("coding: equivariance of the first letter", [&]() -> std::string {
    for (int k = 0; k < 12; ++k) {
      const IrrationalRay t = ray_from_angle(angle(rng));
      const Coding c = code_boundary_ray(frame, ch, t);
      if (c.cusp || c.word.letters.empty()) continue;
      for (int j = 1; j <= 3; ++j) {
        const HiVec moved = [&] {
          const HiVec v = frame.null_vector_hi(t);
          const IntMatrix& r = ch.reflection(j);
          HiVec out(3);
          for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) out[a] += HiReal(r(a, b).get_str()) * v[b];
          return out;
        }();
        const Coding cj = code_boundary_ray(frame, ch, frame.ray_through(moved));
        std::vector<int> want = c.word.letters;
        if (want.front() == j) want.erase(want.begin());
        else want.insert(want.begin(), j);
        const std::size_t n = std::min<std::size_t>({20, want.size(), cj.word.letters.size()});
        if (!std::equal(want.begin(), want.begin() + static_cast<std::ptrdiff_t>(n), cj.word.letters.begin()))
          return "coding of s" + std::to_string(j) + " target is not " + std::to_string(j) + " + coding";
      }
    }
    return "";
  });
  s.check("displacements: positive linear rate along a hyperbolic axis", [&]() -> std::string {
    // The axis endpoint to working precision: M^20 omega0 is within
    // lambda^-40 of it, and stays strictly inside the cone.
    const IntVec far = matrix_power(word_matrix({1, 2, 3}), 20) * lat.basepoint_direction();
    HiVec target = to_hi(far);
    const HiReal m = lat.mass(target);
    for (auto& x : target) x /= m;
    const auto d = displacement_sequence(frame, ch, target, repeat_word({1, 2, 3}, 10));
    for (std::size_t k = 9; k + 3 <= d.size(); k += 3) {
      const double period = d[k] + d[k + 1] + d[k + 2];
      if (std::fabs(period - std::log(kLambda)) > 1e-4) return "period displacement " + fmt(period) + " vs log(lambda)";
    }
    const DisplacementFit fit = fit_displacements(d);
    if (!(fit.delta > 0)) return "delta = " + fmt(fit.delta);
    return "";
  });
}

// -------------------------------------------------------------- wehler

std::vector<SurfacePoint> sample_points(const WehlerSurface& s, std::mt19937_64& rng, std::size_t count) {
  const auto base = find_points(s, 4);
  std::vector<SurfacePoint> out;
  std::uniform_int_distribution<std::size_t> pick(0, base.size() - 1);
  for (std::size_t tries = 0; out.size() < count && tries < 20 * count; ++tries) {
    const auto w = random_word(rng, tries % 4);
    const OrbitResult o = orbit(s, w, base[pick(rng)], 4000);
    if (o.status == OrbitStatus::kComplete) out.push_back(o.points.back());
  }
  return out;
}

void wehler_suite(const VerifyConfig& cfg, VerifyReport& report) {
  SuiteRunner s("wehler", report);
  const WehlerSurface surf = WehlerSurface::default_surface();
  std::mt19937_64 rng(cfg.seed + 2);
  const auto points = sample_points(surf, rng, 100);

  s.check("ns_action: columns, squares, form", [&]() -> std::string {
    const IntMatrix a = ns_action(1);
    const IntMatrix want(3, 3, {-1, 0, 0, 2, 1, 0, 2, 0, 1});
    if (!(a == want)) return "ns_action(1) columns";
    for (int i = 1; i <= 3; ++i) {
      if (!(ns_action(i) * ns_action(i) == IntMatrix::identity(3))) return "square";
      if (!GramLattice::wehler().preserves(ns_action(i))) return "form";
    }
    if (!classify_isometry(GramLattice::wehler(), word_matrix({1, 2})).is_parabolic()) return "s1s2 not parabolic";
    return "";
  });
  s.check("involutions: square to the identity on 100 points", [&]() -> std::string {
    if (points.size() < 100) return "only " + std::to_string(points.size()) + " sample points";
    for (const auto& p : points)
      for (int i = 1; i <= 3; ++i)
        if (surf.involution(i, surf.involution(i, p)) != p) return "fails at " + to_string(p);
    return "";
  });
  s.check("involutions: output on the surface, other coordinates fixed", [&]() -> std::string {
    for (const auto& p : points)
      for (int i = 1; i <= 3; ++i) {
        const SurfacePoint q = surf.involution(i, p);
        if (!surf.contains(q)) return "image off the surface at " + to_string(p);
        for (int j = 1; j <= 3; ++j)
          if (j != i && q.coords[j - 1] != p.coords[j - 1]) return "coordinate " + std::to_string(j) + " moved";
      }
    return "";
  });
  s.check("contains: perturbed points leave the surface", [&]() -> std::string {
    for (std::size_t k = 0; k < points.size(); k += 10) {
      SurfacePoint q = points[k];
      q.coords[0] = ProjPoint(q.coords[0].a() + q.coords[0].b(), q.coords[0].b() == 0 ? Int(1) : q.coords[0].b());
      if (q.coords[0].b() == 0) continue;
      if (surf.contains(q)) return "perturbed point still on the surface: " + to_string(q);
    }
    return "";
  });
  s.check("weil heights: [3:2], [1:0], [4:6]", [&]() -> std::string {
    if (std::fabs(weil_height_p1(ProjPoint(3, 2)) - std::log(3.0)) > 1e-15) return "[3:2]";
    if (weil_height_p1(ProjPoint(1, 0)) != 0.0) return "[1:0]";
    if (weil_height_p1(ProjPoint(4, 6)) != weil_height_p1(ProjPoint(2, 3))) return "[4:6]";
    const SurfacePoint p{{ProjPoint(3, 2), ProjPoint(1, 0), ProjPoint(5, 1)}};
    if (std::fabs(basis_height(p, std::array<double, 3>{1, 1, 1}) - std::log(15.0)) > 1e-14) return "basis height";
    return "";
  });
  s.check("orbit: a word followed by its reverse returns", [&]() -> std::string {
    for (std::size_t k = 0; k < points.size(); k += 7) {
      auto w = random_word(rng, 6);
      auto full = w;
      for (auto it = w.rbegin(); it != w.rend(); ++it) full.push_back(*it);
      const OrbitResult o = orbit(surf, full, points[k]);
      if (o.status != OrbitStatus::kComplete) continue;
      if (o.points.back() != points[k]) return "no return from " + to_string(points[k]);
    }
    return "";
  });
  s.check("orbit: fixed point flags period 1", [&]() -> std::string {
    const OrbitResult o = orbit(surf, {1, 1, 1}, default_surface_points().fixed_by_s1_s2);
    if (o.period != std::size_t{1} || o.repeat_step != std::size_t{1}) return "no period-1 flag";
    return "";
  });
  s.check("orbit: height ratios under 1,2,3 approach lambda", [&]() -> std::string {
    const SurfacePoint p = default_surface_points().generic.front();
    const OrbitResult o = orbit(surf, repeat_word({1, 2, 3}, 8), p, cfg.guard_bits);
    std::vector<double> h;
    for (std::size_t k = 0; k < o.points.size(); k += 3) h.push_back(basis_height(o.points[k], std::array<double, 3>{1, 1, 1}));
    if (h.size() < 3) return "orbit too short";
    const double ratio = h.back() / h[h.size() - 2];
    if (std::fabs(ratio / kLambda - 1) > 0.05)
      return "ratio " + fmt(ratio) + " at n=" + std::to_string(h.size() - 1);
    return "";
  });
}

// ------------------------------------------------------------- heights

void heights_suite(const VerifyConfig& cfg, VerifyReport& report) {
  SuiteRunner s("heights", report);
  const HeightEngine eng(WehlerSurface::default_surface());
  const auto& pts = default_surface_points();
  const SurfacePoint gp = pts.generic.front();
  HeightOptions opt;
  opt.tol = cfg.tol;
  opt.max_letters = cfg.max_letters;
  opt.guard_bits = cfg.guard_bits;
  std::mt19937_64 rng(cfg.seed + 3);
  std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);

  s.check("periodic point: zero height along its expanded direction", [&]() -> std::string {
    const std::vector<int> w{2, 3, 2, 1};
    const Isometry g = classify_isometry(eng.lattice(), word_matrix(w));
    const HeightValue hp = eng.hyperbolic_canonical_height(w, +1, pts.hyperbolic_periodic, opt);
    if (std::fabs(hp.value) > opt.tol) return "h+ = " + fmt(hp.value);
    const HeightValue hc = eng.canonical_boundary_height(eng.frame().ray_through(g.hyperbolic().expanded),
                                                         pts.hyperbolic_periodic, opt);
    if (hc.value > opt.tol) return "hcan = " + fmt(hc.value);
    return "";
  });
  s.check("fiber order: fixed point 1, order-two point 2, generic exceeds", [&]() -> std::string {
    const auto a = eng.finite_fiber_order({1, 2}, pts.fixed_by_s1_s2, 12);
    const auto b = eng.finite_fiber_order({1, 2}, pts.order_two, 12);
    const auto c = eng.finite_fiber_order({1, 2}, gp, 12);
    if (a.order != std::size_t{1}) return "fixed point order";
    if (b.order != std::size_t{2}) return "order-two point";
    if (c.order || !(c.growth_ratio > 2)) return "generic point";
    return "";
  });
  s.check("vcan: vanishes on a periodic fiber", [&]() -> std::string {
    const HeightValue v = eng.vcan_pairing({1, 2}, pts.order_two, 40, opt);
    if (std::fabs(v.value) > opt.tol) return "vcan = " + fmt(v.value);
    return "";
  });
  s.check("vcan: positive and quadratic in the power", [&]() -> std::string {
    const HeightValue v1 = eng.vcan_pairing({1, 2}, gp, 40, opt);
    const HeightValue v2 = eng.vcan_pairing({1, 2, 1, 2}, gp, 40, opt);
    const HeightValue v3 = eng.vcan_pairing({1, 2, 1, 2, 1, 2}, gp, 40, opt);
    if (v1.value < -opt.tol) return "negative vcan " + fmt(v1.value);
    const double r2 = v2.value / v1.value, r3 = v3.value / v1.value;
    if (std::fabs(r2 / 4 - 1) > 0.05 || std::fabs(r3 / 9 - 1) > 0.05) return "ratios " + fmt(r2) + ", " + fmt(r3);
    return "";
  });
  s.check("eta: agrees with vcan on xi and is linear", [&]() -> std::string {
    const std::array<Rat, 3> xi{-1, 1, 0}, e{0, 0, 1};
    const HeightValue vc = eng.vcan_pairing({1, 2}, gp, 40, opt);
    const HeightValue ex = eng.eta_h_telescoped({1, 2}, xi, gp, 40, opt);
    const HeightValue ee = eng.eta_h_telescoped({1, 2}, e, gp, 40, opt);
    const std::array<Rat, 3> sum{-1, 1, 1};
    const HeightValue es = eng.eta_h_telescoped({1, 2}, sum, gp, 40, opt);
    if (std::fabs(ex.value - vc.value) > ex.error_bound + vc.error_bound)
      return "eta " + fmt(ex.value) + " vs vcan " + fmt(vc.value);
    if (std::fabs(es.value - ex.value - ee.value) > es.error_bound + ex.error_bound + ee.error_bound) return "not linear";
    const HeightValue z = eng.eta_h_telescoped({1, 2}, std::array<Rat, 3>{0, 0, 0}, gp, 40, opt);
    if (z.value != 0.0) return "eta(0) != 0";
    return "";
  });
  s.check("boundary height: exact scaling equivariance", [&]() -> std::string {
    const auto v = eng.frame().null_vector(ray_from_angle(0.7));
    std::vector<double> v2 = v;
    for (double& x : v2) x *= 2;
    const HeightValue a = eng.class_height(v, gp, opt);
    const HeightValue b = eng.class_height(v2, gp, opt);
    if (b.value != 2 * a.value || b.error_bound != 2 * a.error_bound) return fmt(b.value) + " != 2*" + fmt(a.value);
    return "";
  });
  s.check("boundary height: equivariance under the involutions", [&]() -> std::string {
    const IrrationalRay t = ray_from_angle(angle(rng));
    const HeightValue h = eng.canonical_boundary_height(t, gp, opt);
    const auto v = eng.frame().null_vector(t);
    for (int i = 1; i <= 3; ++i) {
      const HeightValue hi =
          eng.class_height(times(ns_action(i), v), eng.surface().involution(i, gp), opt);
      if (std::fabs(h.value - hi.value) > 2 * (h.error_bound + hi.error_bound))
        return "generator " + std::to_string(i) + ": " + fmt(h.value) + " vs " + fmt(hi.value);
    }
    return "";
  });
  s.check("boundary height: nonnegative and stable under doubled budgets", [&]() -> std::string {
    for (int k = 0; k < 3; ++k) {
      const IrrationalRay t = ray_from_angle(angle(rng));
      const HeightValue a = eng.canonical_boundary_height(t, gp, opt);
      if (a.converged && a.value < -opt.tol) return "negative height " + fmt(a.value);
      HeightOptions o2 = opt;
      o2.max_letters *= 2;
      const HeightValue b = eng.canonical_boundary_height(t, gp, o2);
      if (a.converged && std::fabs(a.value - b.value) > a.error_bound)
        return "doubling moved " + fmt(a.value) + " to " + fmt(b.value);
    }
    return "";
  });
  s.check("hyperbolic height: h+(gP) = lambda h+(P)", [&]() -> std::string {
    const std::vector<int> w{1, 2, 3};
    const HeightValue a = eng.hyperbolic_canonical_height(w, +1, gp, opt);
    const OrbitResult o = orbit(eng.surface(), w, gp);
    const HeightValue b = eng.hyperbolic_canonical_height(w, +1, o.points.back(), opt);
    const double tol = kLambda * a.error_bound + b.error_bound + 2 * opt.tol;
    if (std::fabs(b.value - kLambda * a.value) > tol) return fmt(b.value) + " vs " + fmt(kLambda * a.value);
    return "";
  });
}

// ---------------------------------------------------------- invariants

void invariants_suite(const VerifyConfig&, VerifyReport& report) {
  SuiteRunner s("invariants", report);
  const HeightEngine eng(WehlerSurface::default_surface());
  const DiagonalFrame& frame = eng.frame();
  StarOptions so;
  so.samples = 64;

  s.check("synthetic constant heights: 2 pi, pi, volume 2 pi", [&]() -> std::string {
    const double t1 = total_height(star_set(frame, constant_oracle(1.0), so)).value;
    const double t2 = total_height(star_set(frame, constant_oracle(2.0), so)).value;
    const double v1 = star_volume(star_set(frame, constant_oracle(1.0), so)).value;
    if (std::fabs(t1 - 2 * M_PI) > 1e-12 || std::fabs(t2 - M_PI) > 1e-12 || std::fabs(v1 - 2 * M_PI) > 1e-12)
      return fmt(t1) + ", " + fmt(t2) + ", " + fmt(v1);
    return "";
  });
  auto smooth = [](double scale) -> HeightOracle {
    return [scale](const IrrationalRay& r) {
      HeightValue h;
      const double th = std::atan2(r.spatial[1], r.spatial[0]);
      h.value = scale * (2.0 + std::cos(3 * th) + 0.5 * std::sin(th));
      h.converged = true;
      return h;
    };
  };
  s.check("homogeneity: scaling heights by 3 scales both integrals by 1/3", [&]() -> std::string {
    const auto a = star_set(frame, smooth(1.0), so);
    const auto b = star_set(frame, smooth(3.0), so);
    const double rt = total_height(b).value / total_height(a).value;
    const double rv = star_volume(b).value / star_volume(a).value;
    if (std::fabs(rt - 1.0 / 3) > 1e-12 || std::fabs(rv - 1.0 / 3) > 1e-12) return fmt(rt) + ", " + fmt(rv);
    return "";
  });
  s.check("rotation: shifting the grid keeps the total within quadrature error", [&]() -> std::string {
    StarOptions shifted = so;
    shifted.theta_offset = 0.123;
    const auto a = total_height(star_set(frame, smooth(1.0), so));
    const auto b = total_height(star_set(frame, smooth(1.0), shifted));
    if (std::fabs(a.value - b.value) > a.quadrature_error + b.quadrature_error + 1e-12)
      return fmt(a.value) + " vs " + fmt(b.value);
    return "";
  });
  s.check("star shape: synthetic circle is positive and continuous", [&]() -> std::string {
    const StarShape sh = star_shape(star_set(frame, smooth(1.0), so));
    if (!sh.positive || !sh.continuous) return "max jump " + fmt(sh.max_jump) + ", median " + fmt(sh.median_jump);
    return "";
  });
  s.check("invariance report: constant injection has zero deviation", [&]() -> std::string {
    const auto r0 = invariance_report(eng, default_surface_points().generic.front(), 0,
                                      [](const SurfacePoint&) { return constant_oracle(1.5); }, so);
    const auto r1 = invariance_report(eng, default_surface_points().generic.front(), 1,
                                      [](const SurfacePoint&) { return constant_oracle(1.5); }, so);
    if (r0.rows.size() != 1 || r0.max_deviation != 0) return "depth 0";
    if (r1.rows.size() != 4 || r1.max_deviation != 0) return "depth 1";
    return "";
  });
  s.check("star set: deterministic CSV with positive radii", [&]() -> std::string {
    HeightOptions o;
    o.tol = 1e-3;
    StarOptions small;
    small.samples = 32;
    const SurfacePoint p = default_surface_points().generic.front();
    const auto a = star_set(frame, engine_oracle(eng, p, o), small);
    small.threads = 1;
    const auto b = star_set(frame, engine_oracle(eng, p, o), small);
    if (star_csv(a) != star_csv(b)) return "CSV differs between runs";
    for (const auto& x : a)
      if (x.height.converged && !(x.radius > 0)) return "nonpositive radius at theta " + fmt(x.theta);
    return "";
  });
}

}  // namespace

bool VerifyReport::passed() const {
  for (const auto& p : properties)
    if (!p.passed) return false;
  return true;
}

std::vector<std::string> VerifyReport::failures() const {
  std::vector<std::string> out;
  for (const auto& p : properties)
    if (!p.passed) out.push_back(p.suite + "/" + p.name);
  return out;
}

std::string VerifyReport::to_json() const {
  JsonWriter w;
  w.begin_object();
  w.key("passed").value(passed());
  w.key("failures").begin_array();
  for (const auto& f : failures()) w.value(f);
  w.end_array();
  w.key("properties").begin_array();
  for (const auto& p : properties) {
    w.begin_object();
    w.key("suite").value(p.suite);
    w.key("name").value(p.name);
    w.key("passed").value(p.passed);
    if (!p.detail.empty()) w.key("detail").value(p.detail);
    w.key("seconds").value(p.seconds);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

VerifyReport run_verify(const std::string& suite, const VerifyConfig& config) {
  using Runner = void (*)(const VerifyConfig&, VerifyReport&);
  const std::vector<std::pair<std::string, Runner>> runners{{"lattice", lattice_suite},
                                                            {"hyperbolic", hyperbolic_suite},
                                                            {"wehler", wehler_suite},
                                                            {"heights", heights_suite},
                                                            {"invariants", invariants_suite}};
  VerifyReport report;
  bool found = false;
  for (const auto& [name, run] : runners)
    if (suite == "all" || suite == name) {
      run(config, report);
      found = true;
    }
  if (!found) fail(ErrorCode::kInvalidArgument, "unknown suite '" + suite + "'");
  return report;
}

}  // namespace k3h
