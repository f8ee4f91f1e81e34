#include "k3h/heights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>

namespace k3h {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string word_string(const std::vector<int>& w) { return GeneratorWord{w, {}, {}}.to_string(); }

const char* status_name(OrbitStatus s) {
  switch (s) {
    case OrbitStatus::kComplete: return "complete";
    case OrbitStatus::kBitGuardExceeded: return "guard";
    case OrbitStatus::kDegenerateFiber: return "degenerate";
  }
  return "complete";
}

OrbitStatus parse_status(const std::string& s) {
  if (s == "guard") return OrbitStatus::kBitGuardExceeded;
  if (s == "degenerate") return OrbitStatus::kDegenerateFiber;
  return OrbitStatus::kComplete;
}

std::array<double, 3> coord_heights(const SurfacePoint& p) {
  return {weil_height_p1(p.coords[0]), weil_height_p1(p.coords[1]), weil_height_p1(p.coords[2])};
}

double height_of(const std::array<double, 3>& h, const std::array<double, 3>& cls) {
  // Same summation order as basis_height.
  double out = 0.0;
  for (int i = 0; i < 3; ++i)
    if (cls[i] != 0.0) out += cls[i] * h[i];
  return out;
}

constexpr std::array<double, 3> kAmple{1.0, 1.0, 1.0};

struct PolyFit {
  std::vector<double> coef;  // coef[j] multiplies x^j
  std::vector<double> stderr_coef;
  double max_residual = 0.0;
};

// Least squares in the centered variable x - x_mid, converted back.
PolyFit fit_polynomial(const std::vector<double>& xs, const std::vector<double>& ys, int degree) {
  const std::size_t m = xs.size();
  const int k = degree + 1;
  if (m < static_cast<std::size_t>(k)) fail(ErrorCode::kInvalidArgument, "too few points for the fit");
  double mid = 0;
  for (double x : xs) mid += x;
  mid /= static_cast<double>(m);
  Eigen::MatrixXd a(m, k);
  Eigen::VectorXd b(m);
  for (std::size_t i = 0; i < m; ++i) {
    double p = 1.0;
    for (int j = 0; j < k; ++j) {
      a(i, j) = p;
      p *= xs[i] - mid;
    }
    b(i) = ys[i];
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd r = b - a * c;
  PolyFit fit;
  fit.max_residual = r.cwiseAbs().maxCoeff();
  const double dof = static_cast<double>(m) - k;
  const double s2 = dof > 0 ? r.squaredNorm() / dof : 0.0;
  const Eigen::MatrixXd cov = (a.transpose() * a).inverse() * s2;
  // The leading coefficient is unchanged by the shift; only it and the
  // slope of a linear fit are consumed, so convert those two exactly.
  fit.coef.assign(k, 0.0);
  fit.stderr_coef.assign(k, 0.0);
  for (int j = 0; j < k; ++j) fit.stderr_coef[j] = std::sqrt(std::max(0.0, cov(j, j)));
  if (degree == 1) {
    fit.coef[1] = c(1);
    fit.coef[0] = c(0) - c(1) * mid;
  } else if (degree == 2) {
    fit.coef[2] = c(2);
    fit.coef[1] = c(1) - 2 * c(2) * mid;
    fit.coef[0] = c(0) - c(1) * mid + c(2) * mid * mid;
  } else {
    fail(ErrorCode::kInternal, "unsupported fit degree");
  }
  return fit;
}

// Approximant stop rule shared by the limits: three consecutive increments
// below tol and a last increment small enough that 10x it is within tol.
double last_increment(const std::vector<double>& a) {
  return a.size() < 2 ? INFINITY : std::fabs(a.back() - a[a.size() - 2]);
}

// Error of the last approximant: 10x the last increment, or the geometric
// tail projected from the decay of the last two blocks of increments,
// whichever is larger. Inside cusp excursions the approximants creep in like
// A + B/n and the last increment alone badly underestimates what is left.
double tail_bound(const std::vector<double>& a) {
  const double inc = last_increment(a);
  if (!std::isfinite(inc)) return INFINITY;
  const std::size_t n = a.size() - 1;
  const std::size_t m = std::max<std::size_t>(4, n / 8);
  if (n < 2 * m) return 10.0 * inc;
  double s1 = 0, s2 = 0;
  for (std::size_t j = n - 2 * m + 1; j <= n - m; ++j) s1 += std::fabs(a[j] - a[j - 1]);
  for (std::size_t j = n - m + 1; j <= n; ++j) s2 += std::fabs(a[j] - a[j - 1]);
  const double q = s1 > 0 ? std::min(s2 / s1, 0.9) : 0.0;
  return std::max(10.0 * inc, s2 * q / (1.0 - q));
}

bool stagnated(const std::vector<double>& a, double tol) {
  if (a.size() < 4) return false;
  for (std::size_t j = a.size() - 3; j < a.size(); ++j)
    if (!(std::fabs(a[j] - a[j - 1]) < tol)) return false;
  return tail_bound(a) <= tol;
}

}  // namespace

// ---------------------------------------------------------------- cache

OrbitCache::OrbitCache(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {
  if (dir_) {
    std::error_code ec;
    std::filesystem::create_directories(*dir_, ec);
    if (ec) fail(ErrorCode::kIoError, "cannot create cache directory " + dir_->string());
  }
}

std::string OrbitCache::key(std::uint64_t surface, const SurfacePoint& p, std::size_t guard) const {
  return hex64(surface) + "|" + to_string(p) + "|" + std::to_string(guard);
}

void OrbitCache::load_directory(const std::string& k) const {
  if (!dir_ || loaded_[k]) return;
  loaded_[k] = true;
  const auto sub = *dir_ / hex64(fnv1a(k));
  std::error_code ec;
  if (!std::filesystem::is_directory(sub, ec)) return;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(sub, ec))
    if (e.path().extension() == ".orbit") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::ifstream in(f);
    std::string stored_key, word_line, status, message;
    if (!std::getline(in, stored_key) || stored_key != k) continue;
    if (!std::getline(in, word_line) || !std::getline(in, status) || !std::getline(in, message)) continue;
    Entry e;
    if (!word_line.empty()) e.word = GeneratorWord::parse(word_line, 3).letters;
    e.profile.status = parse_status(status);
    e.profile.message = message;
    std::string line;
    bool ok = true;
    while (std::getline(in, line)) {
      std::array<double, 3> h{};
      std::istringstream row(line);
      for (auto& x : h) {
        std::string tok;
        if (!(row >> tok)) ok = false;
        else x = std::strtod(tok.c_str(), nullptr);
      }
      e.profile.coord_heights.push_back(h);
    }
    if (ok && e.profile.coord_heights.size() == e.word.size() + 1) entries_[k].push_back(std::move(e));
  }
}

std::optional<OrbitProfile> OrbitCache::lookup(std::uint64_t surface, const SurfacePoint& p, std::size_t guard,
                                               const std::vector<int>& word) const {
  const std::string k = key(surface, p, guard);
  std::lock_guard<std::mutex> lock(mutex_);
  load_directory(k);
  auto it = entries_.find(k);
  if (it == entries_.end() || it->second.empty()) {
    ++misses_;
    return std::nullopt;
  }
  const Entry* best = nullptr;
  std::size_t best_len = 0;
  for (const auto& e : it->second) {
    std::size_t l = 0;
    while (l < e.word.size() && l < word.size() && e.word[l] == word[l]) ++l;
    if (!best || l > best_len) {
      best = &e;
      best_len = l;
    }
  }
  ++hits_;
  OrbitProfile out;
  out.coord_heights.assign(best->profile.coord_heights.begin(),
                           best->profile.coord_heights.begin() + static_cast<std::ptrdiff_t>(best_len + 1));
  if (best_len == best->word.size()) {
    out.status = best->profile.status;
    out.message = best->profile.message;
  }
  return out;
}

void OrbitCache::store(std::uint64_t surface, const SurfacePoint& p, std::size_t guard,
                       const std::vector<int>& word, const OrbitProfile& profile) {
  if (profile.coord_heights.size() != word.size() + 1) fail(ErrorCode::kInternal, "orbit profile length mismatch");
  const std::string k = key(surface, p, guard);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    load_directory(k);
    auto& list = entries_[k];
    for (const auto& e : list)
      if (e.word == word) return;
    list.push_back(Entry{word, profile});
  }
  if (!dir_) return;
  const auto sub = *dir_ / hex64(fnv1a(k));
  std::error_code ec;
  std::filesystem::create_directories(sub, ec);
  const std::string ws = word_string(word);
  const auto final_path = sub / (hex64(fnv1a(ws)) + ".orbit");
  if (std::filesystem::exists(final_path, ec)) return;
  // Write-then-rename keeps readers from seeing a partial entry.
  const auto tmp = sub / (hex64(fnv1a(ws)) + ".tmp" + std::to_string(reinterpret_cast<std::uintptr_t>(&profile)));
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << k << "\n" << ws << "\n" << status_name(profile.status) << "\n" << profile.message << "\n";
    char buf[64];
    for (const auto& h : profile.coord_heights) {
      for (int i = 0; i < 3; ++i) {
        std::snprintf(buf, sizeof buf, "%a", h[i]);
        out << (i ? " " : "") << buf;
      }
      out << "\n";
    }
  }
  std::filesystem::rename(tmp, final_path, ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

std::size_t OrbitCache::hits() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return hits_;
}

std::size_t OrbitCache::misses() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return misses_;
}

// ---------------------------------------------------------------- engine

std::vector<int> cusp_translation_word(const Chamber& chamber, std::size_t k) {
  if (k >= chamber.cusps.size()) fail(ErrorCode::kInvalidArgument, "cusp index out of range");
  return chamber.cusps[k].walls;
}

HeightEngine::HeightEngine(WehlerSurface surface, std::shared_ptr<OrbitCache> cache)
    : surface_(std::move(surface)),
      lattice_(GramLattice::wehler()),
      frame_(lattice_),
      chamber_(Chamber::wehler()),
      cache_(std::move(cache)) {}

OrbitProfile HeightEngine::profile(const SurfacePoint& p, const std::vector<int>& word, std::size_t guard_bits,
                                   const StopRule& stop) const {
  if (cache_) {
    if (auto cached = cache_->lookup(surface_.hash(), p, guard_bits, word)) {
      std::vector<std::array<double, 3>> prefix;
      for (const auto& h : cached->coord_heights) {
        prefix.push_back(h);
        if (stop && stop(prefix)) {
          OrbitProfile out;
          out.coord_heights = prefix;
          return out;
        }
      }
      const bool ended = cached->status != OrbitStatus::kComplete;
      if (ended || cached->coord_heights.size() == word.size() + 1) return *cached;
    }
  }

  OrbitProfile out;
  SurfacePoint cur = p;
  out.coord_heights.push_back(coord_heights(cur));
  bool stopped = stop && stop(out.coord_heights);
  std::size_t n = 0;
  for (; n < word.size() && !stopped; ++n) {
    try {
      cur = surface_.involution(word[n], cur);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateFiber) throw;
      out.status = OrbitStatus::kDegenerateFiber;
      out.message = e.what();
      break;
    }
    if (cur.bits() > guard_bits) {
      out.status = OrbitStatus::kBitGuardExceeded;
      out.message = "coordinate exceeds " + std::to_string(guard_bits) + " bits at step " + std::to_string(n + 1);
      break;
    }
    out.coord_heights.push_back(coord_heights(cur));
    stopped = stop && stop(out.coord_heights);
  }
  if (cache_) {
    const std::vector<int> done(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(out.coord_heights.size() - 1));
    cache_->store(surface_.hash(), p, guard_bits, done, out);
  }
  return out;
}

HeightValue HeightEngine::canonical_boundary_height(const IrrationalRay& alpha, const SurfacePoint& p,
                                                    const HeightOptions& options) const {
  if (!(options.tol > 0)) fail(ErrorCode::kInvalidArgument, "tol must be positive");
  CodingOptions co;
  co.max_letters = options.max_letters;
  const Coding coding = code_boundary_ray(frame_, chamber_, alpha, co);
  if (coding.cusp) {
    HeightValue hv = rational_boundary_height(*coding.cusp, p, options);
    hv.note = hv.note.empty() ? "cusp" : "cusp; " + hv.note;
    return hv;
  }
  const auto& letters = coding.word.letters;

  // Masses of L_n = s_(g1) ... s_(gn) (1,1,1), exact until the final division.
  std::vector<double> masses;
  masses.reserve(letters.size() + 1);
  IntMatrix prefix = IntMatrix::identity(3);
  const IntVec ample{1, 1, 1};
  const double norm = lattice_.basepoint_norm();
  masses.push_back(lattice_.pair(lattice_.basepoint_direction(), ample).get_d() / norm);
  for (int l : letters) {
    prefix = prefix * chamber_.reflection(l);
    masses.push_back(lattice_.pair(lattice_.basepoint_direction(), prefix * ample).get_d() / norm);
  }

  const double tol = options.tol;
  auto approximants = [&](const std::vector<std::array<double, 3>>& hs) {
    std::vector<double> a(hs.size());
    for (std::size_t k = 0; k < hs.size(); ++k) a[k] = height_of(hs[k], kAmple) / masses[k];
    return a;
  };
  // The mass floor keeps the rule from firing while every coordinate is
  // still at height zero, where a_n vanishes identically.
  auto stop = [&](const std::vector<std::array<double, 3>>& hs) {
    const std::size_t k = hs.size() - 1;
    return masses[k] >= 1.0 / tol && stagnated(approximants(hs), tol);
  };
  const OrbitProfile prof = profile(p, letters, options.guard_bits, stop);
  if (prof.status == OrbitStatus::kDegenerateFiber) fail(ErrorCode::kDegenerateFiber, prof.message);

  HeightValue hv;
  hv.trace = approximants(prof.coord_heights);
  hv.value = hv.trace.back();
  hv.n_used = hv.trace.size() - 1;
  hv.error_bound = tail_bound(hv.trace);
  hv.converged = stop(prof.coord_heights);
  if (!hv.converged) {
    if (prof.status == OrbitStatus::kBitGuardExceeded) hv.note = prof.message;
    else if (coding.precision_exhausted) hv.note = "coding precision exhausted after " + std::to_string(letters.size()) + " letters";
    else hv.note = "max_letters reached (" + std::to_string(letters.size()) + ")";
  }
  return hv;
}

HeightValue HeightEngine::rational_boundary_height(const CuspPoint& cusp, const SurfacePoint& p,
                                                   const HeightOptions& options, std::size_t n_max) const {
  if (!(cusp.scale > 0)) fail(ErrorCode::kInvalidArgument, "cusp scale must be positive");
  CuspPoint target = cusp;
  const Coding coding = code_boundary_ray(frame_, chamber_, target);
  const std::size_t k = *coding.chamber_cusp;
  // E = prefix * (c hk) with prefix unimodular and hk primitive, so c is the
  // content of E.
  Int c = 0;
  for (const Int& x : cusp.fixed_null) mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), x.get_mpz_t());

  const OrbitResult moved = orbit(surface_, coding.word.letters, p, options.guard_bits);
  if (moved.status == OrbitStatus::kDegenerateFiber) fail(ErrorCode::kDegenerateFiber, moved.message);
  HeightValue hv;
  if (moved.status == OrbitStatus::kBitGuardExceeded) {
    hv.note = moved.message;
    hv.error_bound = INFINITY;
    return hv;
  }
  const std::vector<int> g0 = cusp_translation_word(chamber_, k);
  const Isometry iso = classify_isometry(lattice_, word_matrix(g0));
  const double norm_sq = ns_norm_sq(lattice_, iso).get_d();
  const HeightValue v = vcan_pairing(g0, moved.points.back(), n_max, options);
  const double factor = cusp.scale * c.get_d() / norm_sq;
  hv = v;
  hv.value = factor * v.value;
  hv.error_bound = factor * v.error_bound;
  hv.trace.clear();
  hv.converged = v.converged && hv.error_bound <= options.tol;
  return hv;
}

HeightValue HeightEngine::boundary_height(const BoundaryPoint& alpha, const SurfacePoint& p,
                                          const HeightOptions& options) const {
  if (const auto* ray = std::get_if<IrrationalRay>(&alpha)) return canonical_boundary_height(*ray, p, options);
  return rational_boundary_height(std::get<CuspPoint>(alpha), p, options);
}

HeightValue HeightEngine::class_height(const std::vector<double>& v, const SurfacePoint& p,
                                       const HeightOptions& options) const {
  const double m = lattice_.mass(v);
  if (!(m > 0)) fail(ErrorCode::kNonPositiveVector, "class has nonpositive mass");
  HeightValue hv = canonical_boundary_height(frame_.ray_through(v), p, options);
  hv.value *= m;
  hv.error_bound *= m;
  for (double& x : hv.trace) x *= m;
  return hv;
}

HeightValue HeightEngine::hyperbolic_canonical_height(const std::vector<int>& word, int sign,
                                                      const SurfacePoint& p, const HeightOptions& options) const {
  if (sign == 0) fail(ErrorCode::kInvalidArgument, "sign must be +1 or -1");
  if (word.empty()) fail(ErrorCode::kInvalidArgument, "empty word");
  const Isometry g = classify_isometry(lattice_, word_matrix(word));
  if (!g.is_hyperbolic()) fail(ErrorCode::kInvalidArgument, "word is not hyperbolic");
  const Hyperbolic& h = g.hyperbolic();
  std::vector<int> letters = word;
  if (sign < 0) std::reverse(letters.begin(), letters.end());
  const auto& alpha = sign > 0 ? h.expanded : h.contracted;
  const std::array<double, 3> cls{alpha[0], alpha[1], alpha[2]};
  const std::size_t len = letters.size();
  const std::size_t reps = std::max<std::size_t>(1, options.max_letters / len);
  const std::vector<int> full = repeat_word(letters, reps);
  const double tol = options.tol;

  auto approximants = [&](const std::vector<std::array<double, 3>>& hs) {
    std::vector<double> a;
    double scale = 1.0;
    for (std::size_t k = 0; k < hs.size(); k += len) {
      a.push_back(height_of(hs[k], cls) * scale);
      scale /= h.lambda;
    }
    return a;
  };
  auto stop = [&](const std::vector<std::array<double, 3>>& hs) {
    return (hs.size() - 1) % len == 0 && stagnated(approximants(hs), tol);
  };
  const OrbitProfile prof = profile(p, full, options.guard_bits, stop);
  if (prof.status == OrbitStatus::kDegenerateFiber) fail(ErrorCode::kDegenerateFiber, prof.message);

  HeightValue hv;
  hv.trace = approximants(prof.coord_heights);
  hv.value = hv.trace.back();
  hv.n_used = hv.trace.size() - 1;
  hv.error_bound = tail_bound(hv.trace);
  // Geometric convergence: accept the bound once it is within tol even when
  // the guard ends the run before three small increments accumulate.
  hv.converged = hv.error_bound <= tol;
  if (prof.status == OrbitStatus::kBitGuardExceeded) hv.note = prof.message;
  return hv;
}

namespace {

struct ParabolicSeries {
  std::vector<double> n;
  std::vector<std::array<double, 3>> heights;
  IntVec e;
  RatVec xi;
  std::string note;
  bool complete = true;
};

}  // namespace

static ParabolicSeries parabolic_series(const HeightEngine& eng, const std::vector<int>& word,
                                        const SurfacePoint& p, std::size_t n_max, std::size_t guard) {
  if (word.empty()) fail(ErrorCode::kInvalidArgument, "empty word");
  if (n_max < 4) fail(ErrorCode::kInvalidArgument, "n_max must be at least 4");
  const Isometry g = classify_isometry(eng.lattice(), word_matrix(word));
  if (!g.is_parabolic()) fail(ErrorCode::kNonParabolicInput, "word " + word_string(word) + " is not parabolic");
  ParabolicSeries s;
  s.e = g.parabolic().fixed_null;
  s.xi = g.parabolic().xi;
  const OrbitProfile prof = eng.profile(p, repeat_word(word, n_max), guard);
  if (prof.status == OrbitStatus::kDegenerateFiber) fail(ErrorCode::kDegenerateFiber, prof.message);
  if (prof.status == OrbitStatus::kBitGuardExceeded) {
    s.note = prof.message;
    s.complete = false;
  }
  for (std::size_t k = 0; k * word.size() < prof.coord_heights.size(); ++k) {
    s.n.push_back(static_cast<double>(k));
    s.heights.push_back(prof.coord_heights[k * word.size()]);
  }
  return s;
}

// Window n_max/2 .. n_last of a series.
static void window(const ParabolicSeries& s, std::size_t n_max, const std::array<double, 3>& cls,
                   std::vector<double>& xs, std::vector<double>& ys) {
  for (std::size_t k = n_max / 2; k < s.n.size(); ++k) {
    xs.push_back(s.n[k]);
    ys.push_back(height_of(s.heights[k], cls));
  }
}

HeightValue HeightEngine::vcan_pairing(const std::vector<int>& word, const SurfacePoint& p, std::size_t n_max,
                                       const HeightOptions& options) const {
  const ParabolicSeries s = parabolic_series(*this, word, p, n_max, options.guard_bits);
  std::vector<double> xs, ys;
  window(s, n_max, kAmple, xs, ys);
  HeightValue hv;
  hv.n_used = s.n.empty() ? 0 : static_cast<std::size_t>(s.n.back());
  hv.note = s.note;
  if (xs.size() < 5) {
    hv.error_bound = INFINITY;
    if (hv.note.empty()) hv.note = "too few orbit points in the fit window";
    return hv;
  }
  const double le = lattice_.pair(IntVec{1, 1, 1}, s.e).get_d();
  const PolyFit fit = fit_polynomial(xs, ys, 2);
  const double top = xs.back();
  hv.value = 2.0 * fit.coef[2] / le;
  // Fit uncertainty plus the bounded (fiberwise) part of the height, which
  // moves the n^2 coefficient by at most its size over n^2.
  hv.error_bound = 2.0 / le * (2.0 * fit.stderr_coef[2] + fit.max_residual / (top * top));
  hv.trace = ys;
  hv.converged = s.complete && hv.error_bound <= options.tol;
  return hv;
}

HeightValue HeightEngine::eta_h_telescoped(const std::vector<int>& word, const std::array<Rat, 3>& cls0,
                                           const SurfacePoint& p, std::size_t n_max,
                                           const HeightOptions& options) const {
  const Isometry g = classify_isometry(lattice_, word_matrix(word));
  if (!g.is_parabolic()) fail(ErrorCode::kNonParabolicInput, "word " + word_string(word) + " is not parabolic");
  const RatVec c{cls0[0], cls0[1], cls0[2]};
  if (gram_pair(lattice_, c, to_rat(g.parabolic().fixed_null)) != 0)
    fail(ErrorCode::kInvalidArgument, "class does not pair to zero with the fiber class");
  HeightValue hv;
  if (cls0[0] == 0 && cls0[1] == 0 && cls0[2] == 0) {
    hv.converged = true;
    return hv;
  }
  const ParabolicSeries s = parabolic_series(*this, word, p, n_max, options.guard_bits);
  std::vector<double> xs, ys;
  window(s, n_max, {cls0[0].get_d(), cls0[1].get_d(), cls0[2].get_d()}, xs, ys);
  hv.n_used = s.n.empty() ? 0 : static_cast<std::size_t>(s.n.back());
  hv.note = s.note;
  if (xs.size() < 4) {
    hv.error_bound = INFINITY;
    if (hv.note.empty()) hv.note = "too few orbit points in the fit window";
    return hv;
  }
  const PolyFit fit = fit_polynomial(xs, ys, 1);
  hv.value = fit.coef[1];
  hv.error_bound = 2.0 * fit.stderr_coef[1] + fit.max_residual / xs.back();
  hv.trace = ys;
  hv.converged = s.complete && hv.error_bound <= options.tol;
  return hv;
}

FiberOrder HeightEngine::finite_fiber_order(const std::vector<int>& word, const SurfacePoint& p,
                                            std::size_t n_max, std::size_t guard_bits) const {
  if (word.empty() || n_max == 0) fail(ErrorCode::kInvalidArgument, "empty word or zero bound");
  const OrbitResult o = orbit(surface_, repeat_word(word, n_max), p, guard_bits);
  if (o.status == OrbitStatus::kDegenerateFiber) fail(ErrorCode::kDegenerateFiber, o.message);
  FiberOrder out;
  for (std::size_t n = 1; n * word.size() < o.points.size(); ++n)
    if (o.points[n * word.size()] == p) {
      out.order = n;
      return out;
    }
  const std::size_t last = (o.points.size() - 1) / word.size();
  const double hi = basis_height(o.points[last * word.size()], kAmple);
  const double lo = basis_height(o.points[(last / 2) * word.size()], kAmple);
  out.growth_ratio = lo > 0 ? hi / lo : INFINITY;
  return out;
}

}  // namespace k3h
