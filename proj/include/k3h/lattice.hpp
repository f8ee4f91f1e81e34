#pragma once

// Exact arithmetic of the Neron-Severi lattice: intersection form,
// classification of isometries, and the translation datum of parabolics.

#include <optional>
#include <variant>
#include <vector>

#include "k3h/arith.hpp"

namespace k3h {

// Integral lattice with a form of signature (1, rank-1) and a reference
// ample class omega0 (stored as an integral direction, normalized on use).
class GramLattice {
 public:
  GramLattice(IntMatrix gram, IntVec basepoint_direction);

  // Gram matrix [[0,2,2],[2,0,2],[2,2,0]] in the basis h1, h2, h3 with
  // omega0 = (h1+h2+h3)/sqrt(12).
  static GramLattice wehler();

  std::size_t rank() const { return gram_.rows(); }
  const IntMatrix& gram() const { return gram_; }
  const IntVec& basepoint_direction() const { return basepoint_dir_; }
  // omega0 itself, with <omega0, omega0> = 1.
  std::vector<double> basepoint() const;

  Int pair(const IntVec& v, const IntVec& w) const;
  Rat pair(const RatVec& v, const RatVec& w) const;
  double pair(const std::vector<double>& v, const std::vector<double>& w) const;
  HiReal pair(const HiVec& v, const HiVec& w) const;

  // M(v) = <omega0, v>.
  double mass(const std::vector<double>& v) const;
  HiReal mass(const HiVec& v) const;
  Rat mass_times_norm(const RatVec& v) const { return pair(to_rat(basepoint_dir_), v); }
  double basepoint_norm() const { return basepoint_norm_; }

  bool preserves(const IntMatrix& m) const;

 private:
  IntMatrix gram_;
  IntVec basepoint_dir_;
  double basepoint_norm_ = 1.0;  // sqrt(<dir, dir>)
};

Rat gram_pair(const GramLattice& lattice, const RatVec& v, const RatVec& w);

struct FiniteOrder {
  unsigned order = 1;
};

struct Parabolic {
  IntVec fixed_null;  // E: primitive, <omega0, E> > 0
  RatVec xi;          // translation datum, a representative in E-perp
};

struct Hyperbolic {
  double lambda = 1.0;              // spectral radius
  std::vector<double> expanded;     // M a+ = lambda a+, mass 1
  std::vector<double> contracted;   // M a- = a- / lambda, mass 1
};

using IsometryClass = std::variant<FiniteOrder, Parabolic, Hyperbolic>;

struct Isometry {
  IntMatrix mat;
  IsometryClass kind;

  bool is_finite_order() const { return std::holds_alternative<FiniteOrder>(kind); }
  bool is_parabolic() const { return std::holds_alternative<Parabolic>(kind); }
  bool is_hyperbolic() const { return std::holds_alternative<Hyperbolic>(kind); }
  const Parabolic& parabolic() const;
  const Hyperbolic& hyperbolic() const;
};

inline constexpr unsigned kDefaultFiniteOrderBound = 24;

// Throws kNotIsometry when m does not preserve the form exactly.
Isometry classify_isometry(const GramLattice& lattice, const IntMatrix& m,
                           unsigned finite_order_bound = kDefaultFiniteOrderBound);

// Translation datum of a parabolic m fixing the null vector e, reduced so
// the coordinate at the first nonzero index of e vanishes. Checked against a
// second choice of v; throws kNonParabolicInput when m does not fix e or the
// two choices disagree modulo e.
RatVec parabolic_xi(const GramLattice& lattice, const IntMatrix& m, const IntVec& e);

// Representative of xi modulo e with the pivot coordinate of e cleared.
RatVec reduce_mod(const RatVec& xi, const IntVec& e);

// -<xi, xi> for a parabolic isometry.
Rat ns_norm_sq(const GramLattice& lattice, const Isometry& g);

// I + n + n^2/2 with n(v) = <v,e> xi - <v,xi> e; throws kXiNotOrthogonalToE.
RatMatrix exp_parabolic(const GramLattice& lattice, const IntVec& e, const RatVec& xi);

// Largest singular value (Euclidean operator norm in the lattice basis).
double operator_norm(const IntMatrix& m);

}  // namespace k3h
