#include "k3h/wehler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <map>
#include <set>

namespace k3h {

ProjPoint::ProjPoint(Int a, Int b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_ == 0 && b_ == 0) fail(ErrorCode::kInvalidArgument, "projective point [0:0]");
  Int g;
  mpz_gcd(g.get_mpz_t(), a_.get_mpz_t(), b_.get_mpz_t());
  if (g != 1) {
    a_ /= g;
    b_ /= g;
  }
  if (b_ < 0 || (b_ == 0 && a_ < 0)) {
    a_ = -a_;
    b_ = -b_;
  }
}

std::size_t ProjPoint::bits() const {
  return std::max(mpz_sizeinbase(a_.get_mpz_t(), 2), mpz_sizeinbase(b_.get_mpz_t(), 2));
}

std::size_t SurfacePoint::bits() const {
  std::size_t out = 0;
  for (const auto& c : coords) out = std::max(out, c.bits());
  return out;
}

std::string to_string(const SurfacePoint& p) {
  std::string out = "(";
  for (int i = 0; i < 3; ++i) {
    if (i) out += ", ";
    out += "[" + p.coords[i].a().get_str() + ":" + p.coords[i].b().get_str() + "]";
  }
  return out + ")";
}

namespace {

// t0^e t1^(2-e) for e = 0, 1, 2.
std::array<Int, 3> monomials(const ProjPoint& t) {
  return {t.b() * t.b(), t.a() * t.b(), t.a() * t.a()};
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

WehlerSurface::WehlerSurface(Coefficients coeffs) : coeffs_(std::move(coeffs)) {
  // Clear denominators, divide out the content, make the first nonzero
  // coefficient positive: a canonical integer equation for hashing.
  Int lcm = 1;
  for (const auto& plane : coeffs_)
    for (const auto& row : plane)
      for (const auto& q : row) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
  Int content = 0;
  int sign = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        Rat scaled = coeffs_[a][b][c] * lcm;
        ints_[a][b][c] = scaled.get_num();
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), ints_[a][b][c].get_mpz_t());
        if (sign == 0 && ints_[a][b][c] != 0) sign = ints_[a][b][c] > 0 ? 1 : -1;
      }
  if (content == 0) fail(ErrorCode::kInvalidArgument, "surface equation is identically zero");
  std::string canon;
  for (auto& plane : ints_)
    for (auto& row : plane)
      for (auto& v : row) {
        v = v * sign / content;
        canon += v.get_str() + ",";
      }
  hash_ = fnv1a(canon);
}

WehlerSurface WehlerSurface::default_surface() {
  static const int c[3][3][3] = {
      {{1, 10, 6}, {-4, -9, -11}, {10, -12, 11}},
      {{2, 4, 0}, {-2, 1, 1}, {1, -2, -1}},
      {{1, 0, 0}, {2, 1, 3}, {-3, 1, -3}},
  };
  Coefficients coeffs;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int k = 0; k < 3; ++k) coeffs[a][b][k] = c[a][b][k];
  return WehlerSurface(coeffs);
}

Int WehlerSurface::evaluate(const SurfacePoint& p) const {
  const auto mx = monomials(p.coords[0]);
  const auto my = monomials(p.coords[1]);
  const auto mz = monomials(p.coords[2]);
  Int sum = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Int xy = mx[a] * my[b];
      for (int c = 0; c < 3; ++c)
        if (ints_[a][b][c] != 0) sum += ints_[a][b][c] * xy * mz[c];
    }
  return sum;
}

QuadraticSlice WehlerSurface::slice(int axis, const SurfacePoint& p) const {
  if (axis < 1 || axis > 3) fail(ErrorCode::kInvalidArgument, "axis must be 1, 2 or 3");
  const int i = axis - 1;
  const int j = (i + 1) % 3;
  const int k = (i + 2) % 3;
  const auto mj = monomials(p.coords[j]);
  const auto mk = monomials(p.coords[k]);
  std::array<Int, 3> acc{0, 0, 0};  // indexed by exponent of t0
  std::array<int, 3> idx{};
  for (int e = 0; e < 3; ++e)
    for (int f = 0; f < 3; ++f)
      for (int g = 0; g < 3; ++g) {
        idx[i] = e;
        idx[j] = f;
        idx[k] = g;
        const Int& coef = ints_[idx[0]][idx[1]][idx[2]];
        if (coef != 0) acc[e] += coef * mj[f] * mk[g];
      }
  return {acc[2], acc[1], acc[0]};
}

SurfacePoint WehlerSurface::involution(int axis, const SurfacePoint& p) const {
  const QuadraticSlice q = slice(axis, p);
  if (q.a == 0 && q.b == 0 && q.c == 0)
    fail(ErrorCode::kDegenerateFiber, "fiber of projection " + std::to_string(axis) + " is not finite at " + to_string(p));
  const ProjPoint& t = p.coords[axis - 1];
  if (q.a * t.a() * t.a() + q.b * t.a() * t.b() + q.c * t.b() * t.b() != 0)
    fail(ErrorCode::kNotOnSurface, "point is not on the surface: " + to_string(p));
  SurfacePoint out = p;
  if (q.a != 0 && t.b() != 0) {
    out.coords[axis - 1] = ProjPoint(-q.b * t.b() - q.a * t.a(), q.a * t.b());
  } else if (t.b() != 0) {
    out.coords[axis - 1] = ProjPoint(1, 0);
  } else {
    out.coords[axis - 1] = ProjPoint(-q.c, q.b);
  }
  return out;
}

const DefaultPoints& default_surface_points() {
  static const DefaultPoints pts = [] {
    auto sp = [](long xa, long xb, long ya, long yb, long za, long zb) {
      return SurfacePoint{{ProjPoint(xa, xb), ProjPoint(ya, yb), ProjPoint(za, zb)}};
    };
    DefaultPoints d;
    d.fixed_by_s1_s2 = sp(-1, 1, 0, 1, 0, 1);
    d.order_two = sp(1, 0, 1, 1, 1, 0);
    d.hyperbolic_periodic = sp(-1, 1, 1, 1, 1, 1);
    // Screened: every fiber through gamma P, |gamma| <= 3, has quadratic
    // height growth (no torsion, no singular fiber). First entry is the
    // default star-set point.
    d.generic = {sp(5, 3, 5, 3, 3, 1),    sp(-1, 4, 1, 3, -6, 5),  sp(2, 1, 1, 4, -4, 5),  sp(1, 0, 4, 3, 3, 2),
                 sp(5, 3, 3, 2, 5, 3),    sp(-1, 4, 1, 3, -2, 17), sp(2, 1, 1, 4, -12, 7), sp(1, 0, 4, 3, 5, 6),
                 sp(5, 3, 3, 2, 86, 81), sp(5, 3, 5, 3, 181, 288)};
    return d;
  }();
  return pts;
}

IntMatrix ns_action(int i) {
  if (i < 1 || i > 3) fail(ErrorCode::kInvalidArgument, "involution index must be 1, 2 or 3");
  IntMatrix m = IntMatrix::identity(3);
  const int c = i - 1;
  for (int r = 0; r < 3; ++r) m(r, c) = (r == c) ? -1 : 2;
  static const bool checked = [] {
    const auto lattice = GramLattice::wehler();
    for (int k = 0; k < 3; ++k) {
      IntMatrix s = IntMatrix::identity(3);
      for (int r = 0; r < 3; ++r) s(r, k) = (r == k) ? -1 : 2;
      if (!lattice.preserves(s)) return false;
    }
    return true;
  }();
  if (!checked) fail(ErrorCode::kInternal, "involution matrix does not preserve the Wehler form");
  return m;
}

std::vector<int> repeat_word(const std::vector<int>& w, std::size_t times) {
  std::vector<int> out;
  out.reserve(w.size() * times);
  for (std::size_t i = 0; i < times; ++i) out.insert(out.end(), w.begin(), w.end());
  return out;
}

IntMatrix word_matrix(const std::vector<int>& letters) {
  IntMatrix m = IntMatrix::identity(3);
  for (int l : letters) m = m * ns_action(l);
  return m;
}

double weil_height_p1(const ProjPoint& t) {
  return std::max({0.0, log_abs(t.a()), log_abs(t.b())});
}

double basis_height(const SurfacePoint& p, const std::array<double, 3>& cls) {
  double h = 0.0;
  for (int i = 0; i < 3; ++i)
    if (cls[i] != 0.0) h += cls[i] * weil_height_p1(p.coords[i]);
  return h;
}

double basis_height(const SurfacePoint& p, const std::array<Rat, 3>& cls) {
  return basis_height(p, std::array<double, 3>{cls[0].get_d(), cls[1].get_d(), cls[2].get_d()});
}

OrbitResult orbit(const WehlerSurface& s, const std::vector<int>& letters, const SurfacePoint& p,
                  std::size_t guard_bits) {
  OrbitResult out;
  out.points.reserve(letters.size() + 1);
  out.points.push_back(p);
  std::map<SurfacePoint, std::size_t> seen{{p, 0}};
  for (std::size_t n = 0; n < letters.size(); ++n) {
    SurfacePoint next;
    try {
      next = s.involution(letters[n], out.points.back());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateFiber) throw;
      out.status = OrbitStatus::kDegenerateFiber;
      out.message = e.what();
      return out;
    }
    if (next.bits() > guard_bits) {
      out.status = OrbitStatus::kBitGuardExceeded;
      out.message = "coordinate exceeds " + std::to_string(guard_bits) + " bits at step " + std::to_string(n + 1);
      return out;
    }
    out.points.push_back(next);
    if (!out.repeat_step) {
      auto [it, inserted] = seen.emplace(next, n + 1);
      if (!inserted) {
        out.repeat_step = n + 1;
        out.period = n + 1 - it->second;
      }
    }
  }
  return out;
}

namespace {

std::vector<ProjPoint> points_of_height(long bound) {
  std::set<ProjPoint> pts{ProjPoint(1, 0)};
  for (long b = 1; b <= bound; ++b)
    for (long a = -bound; a <= bound; ++a)
      if (std::gcd(a, b) == 1) pts.insert(ProjPoint(a, b));
  return {pts.begin(), pts.end()};
}

}  // namespace

std::vector<SurfacePoint> find_points(const WehlerSurface& s, long bound) {
  if (bound < 1) fail(ErrorCode::kInvalidArgument, "search bound must be positive");
  const auto base = points_of_height(bound);
  std::set<SurfacePoint> found;
  for (const auto& x : base)
    for (const auto& y : base) {
      const SurfacePoint probe{{x, y, ProjPoint(1, 0)}};
      const QuadraticSlice q = s.slice(3, probe);
      if (q.a == 0 && q.b == 0 && q.c == 0) continue;
      std::vector<ProjPoint> roots;
      if (q.a == 0) {
        roots.emplace_back(1, 0);
        if (q.b != 0) roots.emplace_back(-q.c, q.b);
      } else {
        Int disc = q.b * q.b - 4 * q.a * q.c;
        if (disc < 0 || mpz_perfect_square_p(disc.get_mpz_t()) == 0) continue;
        Int r;
        mpz_sqrt(r.get_mpz_t(), disc.get_mpz_t());
        roots.emplace_back(-q.b + r, 2 * q.a);
        roots.emplace_back(-q.b - r, 2 * q.a);
      }
      for (const auto& z : roots) {
        SurfacePoint pt{{x, y, z}};
        if (s.contains(pt)) found.insert(pt);
      }
    }
  return {found.begin(), found.end()};
}

bool fixed_by(const WehlerSurface& s, int axis, const SurfacePoint& p) {
  try {
    return s.involution(axis, p) == p;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDegenerateFiber) return false;
    throw;
  }
}

}  // namespace k3h
