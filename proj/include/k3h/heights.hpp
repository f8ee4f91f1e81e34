#pragma once

// Canonical heights: boundary heights along the generator coding, Silverman
// heights of hyperbolic words, and the quadratic fiber pairing of parabolic
// words, all as renormalized limits of Weil heights along exact orbits.

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "k3h/hyperbolic.hpp"
#include "k3h/lattice.hpp"
#include "k3h/wehler.hpp"

namespace k3h {

struct HeightValue {
  double value = 0.0;
  double error_bound = 0.0;
  std::size_t n_used = 0;
  bool converged = false;
  std::string note;           // why a run stopped early, if it did
  std::vector<double> trace;  // successive approximants
};

struct HeightOptions {
  double tol = 1e-4;
  std::size_t max_letters = 60;
  std::size_t guard_bits = kDefaultGuardBits;
};

// Per-step Weil heights of the three coordinates along an orbit; a pure
// function of (surface, start point, word, guard), which is the cache key.
struct OrbitProfile {
  std::vector<std::array<double, 3>> coord_heights;  // [k] = after k letters
  OrbitStatus status = OrbitStatus::kComplete;
  std::string message;
};

// Thread-safe memo of orbit profiles, optionally persisted under a
// directory. Lookups return the cached entry sharing the longest prefix with
// the requested word; entries are immutable once published.
class OrbitCache {
 public:
  explicit OrbitCache(std::optional<std::filesystem::path> dir = std::nullopt);

  // Profile truncated to the longest cached prefix of word (at least the
  // start point when an entry exists), or nullopt.
  std::optional<OrbitProfile> lookup(std::uint64_t surface, const SurfacePoint& p, std::size_t guard,
                                     const std::vector<int>& word) const;
  void store(std::uint64_t surface, const SurfacePoint& p, std::size_t guard, const std::vector<int>& word,
             const OrbitProfile& profile);

  std::size_t hits() const;
  std::size_t misses() const;

 private:
  struct Entry {
    std::vector<int> word;
    OrbitProfile profile;
  };
  std::string key(std::uint64_t surface, const SurfacePoint& p, std::size_t guard) const;
  void load_directory(const std::string& key) const;

  std::optional<std::filesystem::path> dir_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::vector<Entry>> entries_;
  mutable std::map<std::string, bool> loaded_;
  mutable std::size_t hits_ = 0;
  mutable std::size_t misses_ = 0;
};

struct FiberOrder {
  std::optional<std::size_t> order;  // g^n P = P for this smallest n <= N
  double growth_ratio = 0.0;         // h(g^N P) / h(g^(N/2) P) otherwise
};

class HeightEngine {
 public:
  explicit HeightEngine(WehlerSurface surface, std::shared_ptr<OrbitCache> cache = nullptr);
  HeightEngine(const HeightEngine&) = delete;
  HeightEngine& operator=(const HeightEngine&) = delete;

  const WehlerSurface& surface() const { return surface_; }
  const GramLattice& lattice() const { return lattice_; }
  const DiagonalFrame& frame() const { return frame_; }
  const Chamber& chamber() const { return chamber_; }

  // Mass-one irrational ray: a_n = h_(1,1,1)(p_n) / M(L_n) along the coding,
  // p_n = g_n ... g_1 P and L_n = s_(g_1) ... s_(g_n) (1,1,1).
  HeightValue canonical_boundary_height(const IrrationalRay& alpha, const SurfacePoint& p,
                                        const HeightOptions& options = {}) const;
  // scale * vcan(g0, Q) / |xi(g0)|^2 after moving the cusp into the chamber.
  HeightValue rational_boundary_height(const CuspPoint& cusp, const SurfacePoint& p,
                                       const HeightOptions& options = {}, std::size_t n_max = 40) const;
  // Dispatch on the point kind; irrational rays within the cusp threshold of
  // a small integral null class are treated as that cusp.
  HeightValue boundary_height(const BoundaryPoint& alpha, const SurfacePoint& p,
                              const HeightOptions& options = {}) const;
  // Height of an arbitrary positive-mass null class v: M(v) times the height
  // at the mass-one ray through v (exact rescaling of value and error).
  HeightValue class_height(const std::vector<double>& v, const SurfacePoint& p,
                           const HeightOptions& options = {}) const;

  // lim lambda^-n h_(alpha+)(g^n P) (sign > 0) or with the reversed word and
  // alpha- (sign < 0).
  HeightValue hyperbolic_canonical_height(const std::vector<int>& word, int sign, const SurfacePoint& p,
                                          const HeightOptions& options = {}) const;

  // 2a / <L, E> where a is the n^2 coefficient of a least-squares fit of
  // h_(1,1,1)(g^n P) over n_max/2 <= n <= n_max.
  HeightValue vcan_pairing(const std::vector<int>& word, const SurfacePoint& p, std::size_t n_max = 40,
                           const HeightOptions& options = {}) const;
  // Slope of h_cls0(g^n P) over the same window; needs <cls0, E> = 0.
  HeightValue eta_h_telescoped(const std::vector<int>& word, const std::array<Rat, 3>& cls0,
                               const SurfacePoint& p, std::size_t n_max = 40,
                               const HeightOptions& options = {}) const;

  FiberOrder finite_fiber_order(const std::vector<int>& word, const SurfacePoint& p, std::size_t n_max,
                                std::size_t guard_bits = kDefaultGuardBits) const;

  using StopRule = std::function<bool(const std::vector<std::array<double, 3>>&)>;
  // Orbit profile along word, from the cache when possible. Stops early
  // (status kComplete, shorter profile) once stop(heights so far) is true.
  OrbitProfile profile(const SurfacePoint& p, const std::vector<int>& word, std::size_t guard_bits,
                       const StopRule& stop = nullptr) const;

 private:
  WehlerSurface surface_;
  GramLattice lattice_;
  DiagonalFrame frame_;
  Chamber chamber_;
  std::shared_ptr<OrbitCache> cache_;
};

// The two involution letters whose product generates the translations at the
// chamber cusp of index k (0-based: h1, h2, h3).
std::vector<int> cusp_translation_word(const Chamber& chamber, std::size_t k);

}  // namespace k3h
