#pragma once

// Wehler (2,2,2) surfaces in P1 x P1 x P1 over Q: exact membership, the
// three Vieta involutions, their action on NS, and Weil heights.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "k3h/arith.hpp"
#include "k3h/lattice.hpp"

namespace k3h {

// Normalized [a:b]: gcd(|a|,|b|) = 1 and b > 0, or b = 0 and a = 1.
class ProjPoint {
 public:
  ProjPoint() : a_(1), b_(0) {}
  ProjPoint(Int a, Int b);

  const Int& a() const { return a_; }
  const Int& b() const { return b_; }
  std::size_t bits() const;

  friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
  friend auto operator<=>(const ProjPoint& x, const ProjPoint& y) {
    if (auto c = cmp(x.a_, y.a_); c != 0) return c <=> 0;
    return cmp(x.b_, y.b_) <=> 0;
  }

 private:
  Int a_;
  Int b_;
};

struct SurfacePoint {
  std::array<ProjPoint, 3> coords;

  std::size_t bits() const;
  friend bool operator==(const SurfacePoint&, const SurfacePoint&) = default;
  friend auto operator<=>(const SurfacePoint&, const SurfacePoint&) = default;
};

std::string to_string(const SurfacePoint& p);

// Coefficients of F(t) = A t0^2 + B t0 t1 + C t1^2 in one coordinate.
struct QuadraticSlice {
  Int a, b, c;
};

class WehlerSurface {
 public:
  // coeffs[a][b][c] multiplies x0^a x1^(2-a) y0^b y1^(2-b) z0^c z1^(2-c).
  using Coefficients = std::array<std::array<std::array<Rat, 3>, 3>, 3>;

  explicit WehlerSurface(Coefficients coeffs);

  // Shipped default: small integer coefficients chosen by a seeded search
  // so that the surface carries a few planted rational points with short
  // periodic orbits (see default_surface_points).
  static WehlerSurface default_surface();

  const Coefficients& coefficients() const { return coeffs_; }
  // Stable 64-bit content hash of the integer-normalized equation.
  std::uint64_t hash() const { return hash_; }

  Int evaluate(const SurfacePoint& p) const;
  bool contains(const SurfacePoint& p) const { return evaluate(p) == 0; }
  // axis is 1-based (1 = x, 2 = y, 3 = z).
  QuadraticSlice slice(int axis, const SurfacePoint& p) const;
  // Vieta conjugate in the axis-th coordinate; throws kDegenerateFiber when
  // the slice vanishes identically and kNotOnSurface when p is not a root.
  SurfacePoint involution(int axis, const SurfacePoint& p) const;

 private:
  Coefficients coeffs_;
  std::array<std::array<std::array<Int, 3>, 3>, 3> ints_;
  std::uint64_t hash_ = 0;
};

// Named rational points of the default surface.
struct DefaultPoints {
  SurfacePoint fixed_by_s1_s2;   // fixed by both s1 and s2
  SurfacePoint order_two;        // (s1 s2 word) has order 2 on it
  SurfacePoint hyperbolic_periodic;  // periodic under the word 2,3,2,1
  std::vector<SurfacePoint> generic;
};
const DefaultPoints& default_surface_points();

// NS action of the i-th involution (1-based), verified to preserve the form.
IntMatrix ns_action(int i);
// Pullback matrix of the point map that applies letters left to right:
// ns_action(w1) * ns_action(w2) * ... * ns_action(wn).
IntMatrix word_matrix(const std::vector<int>& letters);
// w repeated `times` times.
std::vector<int> repeat_word(const std::vector<int>& w, std::size_t times);

double weil_height_p1(const ProjPoint& t);
double basis_height(const SurfacePoint& p, const std::array<double, 3>& cls);
double basis_height(const SurfacePoint& p, const std::array<Rat, 3>& cls);

enum class OrbitStatus { kComplete, kBitGuardExceeded, kDegenerateFiber };

struct OrbitResult {
  std::vector<SurfacePoint> points;  // points[k] after k letters; points[0] = start
  OrbitStatus status = OrbitStatus::kComplete;
  // First step k at which points[k] equals an earlier points[j].
  std::optional<std::size_t> repeat_step;
  std::optional<std::size_t> period;  // k - j
  std::string message;
};

inline constexpr std::size_t kDefaultGuardBits = 200000;

OrbitResult orbit(const WehlerSurface& s, const std::vector<int>& letters, const SurfacePoint& p,
                  std::size_t guard_bits = kDefaultGuardBits);

// Rational points with x and y of height <= bound, z solving the quadratic.
std::vector<SurfacePoint> find_points(const WehlerSurface& s, long bound);

// True when p is a double root of its axis-th slice (fixed by that involution).
bool fixed_by(const WehlerSurface& s, int axis, const SurfacePoint& p);

}  // namespace k3h
