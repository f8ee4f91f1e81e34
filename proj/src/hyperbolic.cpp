#include "k3h/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace k3h {

namespace {

// Bits of headroom kept between the prefix entries and the HiReal mantissa.
constexpr std::size_t kPrecisionMargin = 64;

HiReal hi_pair(const GramLattice& lattice, const HiVec& v, const HiVec& w) { return lattice.pair(v, w); }

IntVec apply_matrix(const IntMatrix& m, const IntVec& v) { return m * v; }

HiVec apply_matrix(const IntMatrix& m, const HiVec& v) {
  HiVec out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k)
      if (m(i, k) != 0) out[i] += v[k] * HiReal(m(i, k).get_mpz_t());
  return out;
}

IntMatrix reflection_matrix(const GramLattice& lattice, const IntVec& normal) {
  const std::size_t n = lattice.rank();
  const Int norm = lattice.pair(normal, normal);
  if (norm >= 0) fail(ErrorCode::kInvalidArgument, "wall normal must have negative square");
  IntMatrix out(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    IntVec v(n);
    v[c] = 1;
    const Int num = 2 * lattice.pair(v, normal);
    if (num % norm != 0) fail(ErrorCode::kInvalidArgument, "reflection is not integral");
    const Int f = num / norm;
    for (std::size_t r = 0; r < n; ++r) out(r, c) = v[r] - f * normal[r];
  }
  return out;
}

double spatial_angle(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += (a[i] - b[i]) * (a[i] - b[i]);
  return 2.0 * std::asin(std::min(1.0, std::sqrt(diff) / 2.0));
}

}  // namespace

IrrationalRay ray_from_angle(double theta) { return IrrationalRay{{std::cos(theta), std::sin(theta)}}; }

DiagonalFrame::DiagonalFrame(const GramLattice& lattice) : lattice_(&lattice) {
  const std::size_t n = lattice.rank();
  HiVec f0 = to_hi(lattice.basepoint_direction());
  const HiReal norm0 = sqrt(hi_pair(lattice, f0, f0));
  for (auto& x : f0) x /= norm0;
  columns_hi_.push_back(f0);
  for (std::size_t k = 0; k < n && columns_hi_.size() < n; ++k) {
    HiVec v(n);
    v[k] = 1;
    HiVec w = v;
    const HiReal c0 = hi_pair(lattice, v, columns_hi_[0]);
    for (std::size_t i = 0; i < n; ++i) w[i] -= c0 * columns_hi_[0][i];
    for (std::size_t j = 1; j < columns_hi_.size(); ++j) {
      const HiReal cj = hi_pair(lattice, w, columns_hi_[j]);
      for (std::size_t i = 0; i < n; ++i) w[i] += cj * columns_hi_[j][i];
    }
    const HiReal sq = hi_pair(lattice, w, w);
    if (sq > HiReal(-1e-30)) continue;
    const HiReal scale = sqrt(-sq);
    for (auto& x : w) x /= scale;
    columns_hi_.push_back(w);
  }
  if (columns_hi_.size() != n) fail(ErrorCode::kInternal, "failed to build an orthonormal frame");
  for (const auto& col : columns_hi_) {
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<double>(col[i]);
    columns_.push_back(d);
  }
}

std::vector<double> DiagonalFrame::from_frame(const std::vector<double>& x) const {
  const std::size_t n = columns_.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) out[i] += x[j] * columns_[j][i];
  return out;
}

std::vector<double> DiagonalFrame::to_frame(const std::vector<double>& v) const {
  const std::size_t n = columns_.size();
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double p = lattice_->pair(v, columns_[j]);
    out[j] = j == 0 ? p : -p;
  }
  return out;
}

HiVec DiagonalFrame::from_frame(const HiVec& x) const {
  const std::size_t n = columns_hi_.size();
  HiVec out(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) out[i] += x[j] * columns_hi_[j][i];
  return out;
}

HiVec DiagonalFrame::to_frame(const HiVec& v) const {
  const std::size_t n = columns_hi_.size();
  HiVec out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const HiReal p = hi_pair(*lattice_, v, columns_hi_[j]);
    out[j] = j == 0 ? p : HiReal(-p);
  }
  return out;
}

std::vector<double> DiagonalFrame::null_vector(const IrrationalRay& ray) const {
  std::vector<double> x(columns_.size());
  if (ray.spatial.size() + 1 != x.size()) fail(ErrorCode::kDimensionMismatch, "ray direction has wrong length");
  x[0] = 1.0;
  for (std::size_t i = 0; i < ray.spatial.size(); ++i) x[i + 1] = ray.spatial[i];
  return from_frame(x);
}

HiVec DiagonalFrame::null_vector_hi(const IrrationalRay& ray) const {
  const std::size_t n = columns_hi_.size();
  if (ray.spatial.size() + 1 != n) fail(ErrorCode::kDimensionMismatch, "ray direction has wrong length");
  HiVec x(n);
  HiReal len = 0;
  for (std::size_t i = 0; i < ray.spatial.size(); ++i) {
    x[i + 1] = ray.spatial[i];
    len += x[i + 1] * x[i + 1];
  }
  if (len == 0) fail(ErrorCode::kInvalidArgument, "ray direction is zero");
  len = sqrt(len);
  for (std::size_t i = 1; i < n; ++i) x[i] /= len;
  x[0] = 1;
  return from_frame(x);
}

IrrationalRay DiagonalFrame::ray_through(const std::vector<double>& v) const {
  const std::vector<double> x = to_frame(v);
  if (!(x[0] > 0)) fail(ErrorCode::kNonPositiveVector, "boundary direction has nonpositive mass");
  double len = 0;
  for (std::size_t i = 1; i < x.size(); ++i) len += x[i] * x[i];
  len = std::sqrt(len);
  if (len == 0) fail(ErrorCode::kInvalidArgument, "direction is proportional to the basepoint");
  IrrationalRay ray;
  for (std::size_t i = 1; i < x.size(); ++i) ray.spatial.push_back(x[i] / len);
  return ray;
}

IrrationalRay DiagonalFrame::ray_through(const HiVec& v) const {
  const HiVec x = to_frame(v);
  if (!(x[0] > 0)) fail(ErrorCode::kNonPositiveVector, "boundary direction has nonpositive mass");
  HiReal len = 0;
  for (std::size_t i = 1; i < x.size(); ++i) len += x[i] * x[i];
  len = sqrt(len);
  if (len == 0) fail(ErrorCode::kInvalidArgument, "direction is proportional to the basepoint");
  IrrationalRay ray;
  for (std::size_t i = 1; i < x.size(); ++i) ray.spatial.push_back(static_cast<double>(x[i] / len));
  return ray;
}

double DiagonalFrame::angular_distance(const std::vector<double>& u, const std::vector<double>& v) const {
  return spatial_angle(ray_through(u).spatial, ray_through(v).spatial);
}

double DiagonalFrame::angular_distance(const HiVec& u, const HiVec& v) const {
  const HiVec a = to_frame(u);
  const HiVec b = to_frame(v);
  HiReal la = 0, lb = 0;
  for (std::size_t i = 1; i < a.size(); ++i) {
    la += a[i] * a[i];
    lb += b[i] * b[i];
  }
  la = sqrt(la);
  lb = sqrt(lb);
  HiReal diff = 0;
  for (std::size_t i = 1; i < a.size(); ++i) {
    const HiReal d = a[i] / la - b[i] / lb;
    diff += d * d;
  }
  return 2.0 * std::asin(std::min(1.0, static_cast<double>(sqrt(diff)) / 2.0));
}

std::vector<std::vector<double>> diagonalize_form(const GramLattice& lattice) {
  const DiagonalFrame frame(lattice);
  const std::size_t n = lattice.rank();
  std::vector<std::vector<double>> t(n, std::vector<double>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) t[i][j] = frame.columns()[j][i];
  return t;
}

double hyp_distance(const GramLattice& lattice, const std::vector<double>& u, const std::vector<double>& v) {
  const double uu = lattice.pair(u, u);
  const double vv = lattice.pair(v, v);
  if (!(uu > 0) || !(vv > 0) || lattice.mass(u) <= 0 || lattice.mass(v) <= 0)
    fail(ErrorCode::kNonPositiveVector, "hyp_distance needs vectors in the positive cone");
  const double c = lattice.pair(u, v) / std::sqrt(uu * vv);
  return std::acosh(std::max(1.0, c));
}

double hyp_distance(const GramLattice& lattice, const HiVec& u, const HiVec& v) {
  const HiReal uu = lattice.pair(u, u);
  const HiReal vv = lattice.pair(v, v);
  if (!(uu > 0) || !(vv > 0) || lattice.mass(u) <= 0 || lattice.mass(v) <= 0)
    fail(ErrorCode::kNonPositiveVector, "hyp_distance needs vectors in the positive cone");
  const HiReal c = lattice.pair(u, v) / sqrt(uu * vv);
  return c <= 1 ? 0.0 : static_cast<double>(acosh(c));
}

double horoball_depth(const GramLattice& lattice, const std::vector<double>& v, const IntVec& e) {
  return lattice.pair(v, to_double(e));
}

Chamber Chamber::wehler() {
  static const GramLattice lattice = GramLattice::wehler();
  Chamber c;
  c.wall_normals = {IntVec{-1, 1, 1}, IntVec{1, -1, 1}, IntVec{1, 1, -1}};
  for (const auto& m : c.wall_normals) c.reflections.push_back(reflection_matrix(lattice, m));
  c.cusps = {Cusp{IntVec{1, 0, 0}, {2, 3}}, Cusp{IntVec{0, 1, 0}, {1, 3}}, Cusp{IntVec{0, 0, 1}, {1, 2}}};
  return c;
}

const IntMatrix& Chamber::reflection(int letter) const {
  if (letter < 1 || static_cast<std::size_t>(letter) > reflections.size())
    fail(ErrorCode::kInvalidArgument, "generator letter " + std::to_string(letter) + " out of range");
  return reflections[letter - 1];
}

std::optional<std::size_t> Chamber::cusp_index(const IntVec& e) const {
  for (std::size_t k = 0; k < cusps.size(); ++k) {
    const IntVec& h = cusps[k].fixed_null;
    if (h.size() != e.size()) continue;
    // e = t h with t > 0 iff all 2x2 minors vanish and signs agree.
    bool proportional = true;
    std::optional<int> sign;
    for (std::size_t i = 0; i < e.size() && proportional; ++i) {
      for (std::size_t j = 0; j < e.size(); ++j)
        if (e[i] * h[j] != e[j] * h[i]) proportional = false;
      if (h[i] != 0) {
        const int s = sgn(e[i]) * sgn(h[i]);
        if (!sign) sign = s;
      }
    }
    if (proportional && sign && *sign > 0) return k;
  }
  return std::nullopt;
}

std::string GeneratorWord::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < letters.size(); ++i) out << (i ? "," : "") << letters[i];
  return out.str();
}

GeneratorWord GeneratorWord::parse(const std::string& text, std::size_t generators) {
  GeneratorWord w;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) fail(ErrorCode::kParseError, "empty letter in word '" + text + "'");
    int letter = 0;
    for (char ch : item) {
      if (ch < '0' || ch > '9') fail(ErrorCode::kParseError, "bad letter '" + item + "' in word");
      letter = letter * 10 + (ch - '0');
      if (letter > 1000) break;
    }
    if (letter < 1 || static_cast<std::size_t>(letter) > generators)
      fail(ErrorCode::kParseError, "letter " + item + " out of range 1.." + std::to_string(generators));
    w.letters.push_back(letter);
  }
  w.excursions = find_excursions(w.letters);
  return w;
}

std::vector<Excursion> find_excursions(const std::vector<int>& letters, std::size_t min_length) {
  std::vector<Excursion> out;
  std::size_t start = 0;
  while (start + 1 < letters.size()) {
    std::size_t end = start + 2;
    while (end < letters.size() && letters[end] == letters[end - 2] && letters[end] != letters[end - 1]) ++end;
    const std::size_t length = end - start;
    if (length >= min_length && letters[start] != letters[start + 1])
      out.push_back(Excursion{start, length, letters[start], letters[start + 1]});
    start = length > 2 ? end - 1 : start + 1;
  }
  return out;
}

HiVec boundary_vector_hi(const DiagonalFrame& frame, const BoundaryPoint& point) {
  if (const auto* ray = std::get_if<IrrationalRay>(&point)) return frame.null_vector_hi(*ray);
  const auto& cusp = std::get<CuspPoint>(point);
  HiVec e = to_hi(cusp.fixed_null);
  const HiReal mass = frame.lattice().mass(e);
  if (!(mass > 0)) fail(ErrorCode::kNonPositiveVector, "cusp class has nonpositive mass");
  for (auto& x : e) x /= mass;
  return e;
}

namespace {

RatVec chamber_cusp_xi(const GramLattice& lattice, const Chamber& chamber, std::size_t k) {
  const auto& cusp = chamber.cusps[k];
  const IntMatrix g = chamber.reflection(cusp.walls[0]) * chamber.reflection(cusp.walls[1]);
  return parabolic_xi(lattice, g, cusp.fixed_null);
}

}  // namespace

Coding code_boundary_ray(const DiagonalFrame& frame, const Chamber& chamber, const BoundaryPoint& target,
                         const CodingOptions& options) {
  const GramLattice& lattice = frame.lattice();
  const std::size_t n = lattice.rank();
  Coding coding;
  coding.prefix = IntMatrix::identity(n);
  std::vector<double> norms;
  for (const auto& m : chamber.wall_normals) norms.push_back(std::sqrt(-lattice.pair(m, m).get_d()));

  if (const auto* cusp = std::get_if<CuspPoint>(&target)) {
    if (lattice.pair(cusp->fixed_null, cusp->fixed_null) != 0)
      fail(ErrorCode::kInvalidArgument, "cusp class is not null");
    if (lattice.pair(lattice.basepoint_direction(), cusp->fixed_null) <= 0)
      fail(ErrorCode::kNonPositiveVector, "cusp class is not in the positive cone");
    IntVec w = cusp->fixed_null;
    while (true) {
      if (auto k = chamber.cusp_index(w)) {
        coding.complete = true;
        coding.chamber_cusp = *k;
        break;
      }
      int best = 0;
      double best_value = 0;
      for (std::size_t i = 0; i < chamber.size(); ++i) {
        const double p = lattice.pair(w, chamber.wall_normals[i]).get_d() / norms[i];
        if (p < best_value) {
          best_value = p;
          best = static_cast<int>(i) + 1;
        }
      }
      if (best == 0) fail(ErrorCode::kNotReducible, "null class inside the chamber is not a chamber cusp");
      w = apply_matrix(chamber.reflection(best), w);
      coding.prefix = coding.prefix * chamber.reflection(best);
      coding.word.letters.push_back(best);
    }
    CuspPoint recognized = *cusp;
    if (recognized.xi.empty()) {
      recognized.xi = to_rat(IntVec(n));
      const RatVec xi0 = chamber_cusp_xi(lattice, chamber, *coding.chamber_cusp);
      recognized.xi = reduce_mod(to_rat(coding.prefix) * xi0, cusp->fixed_null);
    }
    coding.cusp = recognized;
    std::vector<double> red = to_double(w);
    const double m = lattice.mass(red);
    for (double& x : red) x /= m;
    coding.reduced = red;
    coding.word.excursions = find_excursions(coding.word.letters);
    coding.word.displacements =
        displacement_sequence(frame, chamber, boundary_vector_hi(frame, target), coding.word.letters);
    return coding;
  }

  const HiVec target_hi = boundary_vector_hi(frame, target);
  HiVec w = target_hi;
  std::vector<HiVec> normals_hi;
  for (const auto& m : chamber.wall_normals) normals_hi.push_back(to_hi(m));

  while (true) {
    bool recognized = false;
    for (std::size_t k = 0; k < chamber.cusps.size() && !recognized; ++k) {
      const IntVec e = coding.prefix * chamber.cusps[k].fixed_null;
      bool small = true;
      for (const Int& x : e) small = small && Int(abs(x)).get_d() <= options.cusp_height;
      if (!small) continue;
      if (frame.angular_distance(target_hi, to_hi(e)) < options.cusp_angle) {
        CuspPoint cp;
        cp.fixed_null = e;
        const RatVec xi0 = chamber_cusp_xi(lattice, chamber, k);
        cp.xi = reduce_mod(to_rat(coding.prefix) * xi0, e);
        cp.scale = 1.0 / lattice.mass(to_double(e));
        coding.cusp = cp;
        coding.chamber_cusp = k;
        coding.complete = true;
        recognized = true;
      }
    }
    if (recognized || coding.word.letters.size() >= options.max_letters) break;
    std::size_t prefix_bits = 0;
    for (const Int& x : coding.prefix.data()) prefix_bits = std::max(prefix_bits, mpz_sizeinbase(x.get_mpz_t(), 2));
    // The pulled-back target shrinks as the prefix grows, so relative error
    // scales with the square of the prefix size.
    if (2 * prefix_bits + kPrecisionMargin > static_cast<std::size_t>(std::numeric_limits<HiReal>::digits)) {
      coding.precision_exhausted = true;
      break;
    }

    int best = 0;
    HiReal best_value = 0;
    for (std::size_t i = 0; i < chamber.size(); ++i) {
      const HiReal p = hi_pair(lattice, w, normals_hi[i]) / norms[i];
      if (p < best_value) {
        best_value = p;
        best = static_cast<int>(i) + 1;
      }
    }
    if (best == 0) fail(ErrorCode::kNotReducible, "irrational target reduced into the chamber (precision exhausted)");
    w = apply_matrix(chamber.reflection(best), w);
    coding.prefix = coding.prefix * chamber.reflection(best);
    coding.word.letters.push_back(best);
  }

  const HiReal m = lattice.mass(w);
  coding.reduced.resize(n);
  for (std::size_t i = 0; i < n; ++i) coding.reduced[i] = static_cast<double>(w[i] / m);
  coding.word.excursions = find_excursions(coding.word.letters);
  coding.word.displacements = displacement_sequence(frame, chamber, target_hi, coding.word.letters);
  return coding;
}

std::vector<double> displacement_sequence(const DiagonalFrame& frame, const Chamber& chamber, const HiVec& target,
                                          const std::vector<int>& letters) {
  const GramLattice& lattice = frame.lattice();
  const std::size_t n = lattice.rank();
  HiVec omega = to_hi(lattice.basepoint_direction());
  const HiReal norm = sqrt(lattice.pair(omega, omega));
  for (auto& x : omega) x /= norm;
  // target = omega + u with u the unit tangent; opposite endpoint omega - u.
  HiVec opposite(n);
  for (std::size_t i = 0; i < n; ++i) opposite[i] = 2 * omega[i] - target[i];

  std::vector<double> out;
  IntMatrix prefix = IntMatrix::identity(n);
  HiReal previous = 0;
  for (int letter : letters) {
    prefix = prefix * chamber.reflection(letter);
    const HiVec xh = to_hi(apply_matrix(prefix, lattice.basepoint_direction()));
    const HiReal t = log(lattice.pair(xh, opposite) / lattice.pair(xh, target)) / 2;
    out.push_back(static_cast<double>(t - previous));
    previous = t;
  }
  return out;
}

DisplacementFit fit_displacements(const std::vector<double>& displacements) {
  DisplacementFit fit;
  const std::size_t n = displacements.size();
  if (n == 0) return fit;
  std::vector<double> partial(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) partial[i + 1] = partial[i] + displacements[i];
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double x = static_cast<double>(k);
    sx += x;
    sy += partial[k];
    sxx += x * x;
    sxy += x * partial[k];
  }
  const double count = static_cast<double>(n + 1);
  const double denom = count * sxx - sx * sx;
  fit.delta = denom > 0 ? (count * sxy - sx * sy) / denom : partial[n];
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b <= n; ++b)
      fit.c0 = std::max(fit.c0, fit.delta * static_cast<double>(b - a) - (partial[b] - partial[a]));
  return fit;
}

}  // namespace k3h
