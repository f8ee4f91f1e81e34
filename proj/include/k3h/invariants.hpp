#pragma once

// Orbit invariants built from boundary heights: the star set of a point,
// its total height, the volume of its star set, and invariance reports.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "k3h/heights.hpp"

namespace k3h {

struct StarSample {
  double theta = 0.0;
  std::vector<double> alpha;  // mass-one null class in lattice coordinates
  HeightValue height;
  double radius = 0.0;        // 1 / height (NaN when the sample failed)
  bool failed = false;        // e.g. degenerate fiber along the orbit
  std::string error;
};

// Height at a mass-one boundary ray; injectable for synthetic checks.
using HeightOracle = std::function<HeightValue(const IrrationalRay&)>;

HeightOracle engine_oracle(const HeightEngine& engine, const SurfacePoint& p, const HeightOptions& options);
HeightOracle constant_oracle(double height);

struct StarOptions {
  std::size_t samples = 720;
  double theta_offset = 0.0;  // grid is theta_offset + 2 pi k / samples
  unsigned threads = 0;       // 0: hardware concurrency
};

// Needs samples >= 16. Samples are evaluated concurrently and stored by index.
std::vector<StarSample> star_set(const DiagonalFrame& frame, const HeightOracle& oracle,
                                 const StarOptions& options = {});

struct IntegralResult {
  double value = 0.0;
  double error_bound = 0.0;
  double quadrature_error = 0.0;  // |full grid - half grid|
  std::size_t non_converged = 0;
  std::size_t failed = 0;
  bool flagged = false;           // more than 5% of the grid unconverged or failed
};

// Trapezoid rule for the integral of h^-(rank-2) d theta over the circle,
// with a Richardson check on the even-indexed half grid.
IntegralResult total_height(const std::vector<StarSample>& samples, std::size_t rank = 3);

// Volume of {r alpha : r <= 1/h} against r^(rank-3) dr d theta: radial
// Gauss-Legendre inside composite Simpson in theta.
IntegralResult star_volume(const std::vector<StarSample>& samples, std::size_t rank = 3);

struct StarShape {
  bool positive = true;    // every usable radius is finite and > 0
  double max_jump = 0.0;   // largest adjacent radius jump
  double median_jump = 0.0;
  bool continuous = true;  // max_jump <= 10 * median_jump
};
StarShape star_shape(const std::vector<StarSample>& samples);

struct InvarianceRow {
  std::vector<int> word;  // gamma = letters applied left to right
  SurfacePoint point;
  IntegralResult total;
  bool skipped = false;   // degenerate fiber on the way to gamma P
  std::string error;
};

struct InvarianceReport {
  std::vector<InvarianceRow> rows;
  double max_deviation = 0.0;  // max |h_tot(gamma P) - h_tot(P)| / h_tot(P)
};

// Total heights over all gamma P with reduced words of length <= depth (<= 4).
InvarianceReport invariance_report(const HeightEngine& engine, const SurfacePoint& p, std::size_t depth,
                                   const HeightOptions& options, const StarOptions& star = {});
// Same, with an injected oracle factory per orbit point.
InvarianceReport invariance_report(const HeightEngine& engine, const SurfacePoint& p, std::size_t depth,
                                   const std::function<HeightOracle(const SurfacePoint&)>& oracle_for,
                                   const StarOptions& star = {});

std::vector<std::vector<int>> reduced_words(std::size_t max_length, int generators = 3);

// theta,alpha0,alpha1,alpha2,height,err,converged,radius with %.17g reals.
std::string star_csv(const std::vector<StarSample>& samples);

}  // namespace k3h
