#pragma once

// Hyperboloid model of the unit ample classes: distances, horoballs, the
// orthonormal frame of the form, and the coding of boundary rays by
// reflections in the walls of a fundamental chamber.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "k3h/lattice.hpp"

namespace k3h {

// Irrational null ray, stored by its unit spatial direction in the
// orthonormal frame of diagonalize_form (for rank 3: (cos t, sin t)).
struct IrrationalRay {
  std::vector<double> spatial;
};

struct CuspPoint {
  IntVec fixed_null;   // E, primitive integral null vector
  RatVec xi;           // direction in E-perp/E (forced for rank 3)
  double scale = 1.0;  // boundary class is scale * E
};

using BoundaryPoint = std::variant<IrrationalRay, CuspPoint>;

IrrationalRay ray_from_angle(double theta);

// Orthonormal frame T with T^t G T = diag(1, -1, ..., -1) and first column
// omega0. Deterministic: Gram-Schmidt on omega0 followed by the standard basis.
// Keeps a pointer to the lattice, which must outlive the frame.
class DiagonalFrame {
 public:
  explicit DiagonalFrame(const GramLattice& lattice);

  const GramLattice& lattice() const { return *lattice_; }
  // Column-major access: basis(j) is the j-th frame vector in lattice coords.
  const std::vector<std::vector<double>>& columns() const { return columns_; }
  std::vector<double> from_frame(const std::vector<double>& x) const;
  std::vector<double> to_frame(const std::vector<double>& v) const;
  HiVec from_frame(const HiVec& x) const;
  HiVec to_frame(const HiVec& v) const;

  // Mass-one null vector (1, spatial) mapped back to lattice coordinates.
  std::vector<double> null_vector(const IrrationalRay& ray) const;
  HiVec null_vector_hi(const IrrationalRay& ray) const;
  // Projects a positive-mass vector onto the null cone along the spatial
  // direction and returns the ray. Throws kNonPositiveVector for mass <= 0.
  IrrationalRay ray_through(const std::vector<double>& v) const;
  IrrationalRay ray_through(const HiVec& v) const;
  // Angle between spatial directions of two positive-mass vectors.
  double angular_distance(const std::vector<double>& u, const std::vector<double>& v) const;
  double angular_distance(const HiVec& u, const HiVec& v) const;

 private:
  const GramLattice* lattice_;
  std::vector<std::vector<double>> columns_;
  std::vector<HiVec> columns_hi_;
};

// T as a dense row-major matrix (rank x rank).
std::vector<std::vector<double>> diagonalize_form(const GramLattice& lattice);

double hyp_distance(const GramLattice& lattice, const std::vector<double>& u, const std::vector<double>& v);
// Extended precision, for vectors far out in the cone where the double
// version loses digits to cancellation.
double hyp_distance(const GramLattice& lattice, const HiVec& u, const HiVec& v);
// <v, E> for v normalized to <v, v> = 1; v lies in the horoball iff < c.
double horoball_depth(const GramLattice& lattice, const std::vector<double>& v, const IntVec& e);

// Fundamental chamber {v : <v, m_i> >= 0} of a group generated by the
// reflections s_i in its walls, with its cusps.
struct Chamber {
  std::vector<IntVec> wall_normals;  // m_i, <omega0, m_i> > 0
  std::vector<IntMatrix> reflections;
  struct Cusp {
    IntVec fixed_null;
    std::vector<int> walls;  // 1-based letters of the two walls through it
  };
  std::vector<Cusp> cusps;

  static Chamber wehler();
  std::size_t size() const { return wall_normals.size(); }
  const IntMatrix& reflection(int letter) const;
  // Cusp index whose class is a positive multiple of e, if any.
  std::optional<std::size_t> cusp_index(const IntVec& e) const;
};

struct Excursion {
  std::size_t start = 0;   // index into letters
  std::size_t length = 0;  // number of letters alternating between `pair`
  int first = 0;
  int second = 0;
};

struct GeneratorWord {
  std::vector<int> letters;  // 1-based generator indices, reduced
  std::vector<Excursion> excursions;
  std::vector<double> displacements;

  std::string to_string() const;  // "1,2,1,3"
  static GeneratorWord parse(const std::string& text, std::size_t generators);
};

std::vector<Excursion> find_excursions(const std::vector<int>& letters, std::size_t min_length = 4);

struct CodingOptions {
  std::size_t max_letters = 60;
  double cusp_angle = 1e-9;          // cusp recognition threshold
  double cusp_height = 1e6;          // max |entry| of recognized cusp classes
};

struct Coding {
  GeneratorWord word;
  bool complete = false;             // terminated at a cusp
  bool precision_exhausted = false;  // stopped early: prefix outgrew HiReal
  std::optional<CuspPoint> cusp;     // recognized cusp of the target
  std::optional<std::size_t> chamber_cusp;  // index of the chamber cusp reached
  std::vector<double> reduced;       // pullback of the target, mass-normalized
  IntMatrix prefix;                  // s_{i1} ... s_{in}
};

// Reduction of the target into the chamber by successive wall reflections;
// see CodingOptions. Irrational rays run to max_letters (complete == false),
// or until the prefix entries leave the working precision. Throws
// kNotReducible if an irrational target ends inside the chamber.
Coding code_boundary_ray(const DiagonalFrame& frame, const Chamber& chamber, const BoundaryPoint& target,
                         const CodingOptions& options = {});

// Oriented distances between successive projections of the prefix images of
// omega0 onto the geodesic ray from omega0 to target.
std::vector<double> displacement_sequence(const DiagonalFrame& frame, const Chamber& chamber,
                                          const HiVec& target, const std::vector<int>& letters);

struct DisplacementFit {
  double delta = 0.0;
  double c0 = 0.0;
};

// delta: least-squares slope of the partial sums; c0: smallest constant with
// delta*N - c0 <= every window sum of length N.
DisplacementFit fit_displacements(const std::vector<double>& displacements);

// Mass-one null vector in lattice coordinates for any boundary point.
HiVec boundary_vector_hi(const DiagonalFrame& frame, const BoundaryPoint& point);

}  // namespace k3h
