#include "k3h/lattice.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace k3h {

namespace {

Eigen::MatrixXd to_eigen(const IntMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}

std::vector<double> eigen_real_vector(const Eigen::VectorXcd& v) {
  std::vector<double> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v(i).real();
  return out;
}

void check_dim(const GramLattice& lattice, std::size_t n, const char* what) {
  if (n != lattice.rank())
    fail(ErrorCode::kDimensionMismatch,
         std::string(what) + ": expected length " + std::to_string(lattice.rank()) + ", got " + std::to_string(n));
}

}  // namespace

GramLattice::GramLattice(IntMatrix gram, IntVec basepoint_direction)
    : gram_(std::move(gram)), basepoint_dir_(std::move(basepoint_direction)) {
  const std::size_t n = gram_.rows();
  if (n == 0 || !gram_.square()) fail(ErrorCode::kInvalidArgument, "gram must be a nonempty square matrix");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (gram_(i, j) != gram_(j, i)) fail(ErrorCode::kInvalidArgument, "gram is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(gram_));
  const auto& ev = solver.eigenvalues();
  int positive = 0;
  int negative = 0;
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > 1e-9 * scale) ++positive;
    else if (ev(i) < -1e-9 * scale) ++negative;
  }
  if (positive != 1 || negative != static_cast<int>(n) - 1)
    fail(ErrorCode::kInvalidArgument, "gram does not have signature (1, rank-1)");

  check_dim(*this, basepoint_dir_.size(), "basepoint");
  const Int sq = pair(basepoint_dir_, basepoint_dir_);
  if (sq <= 0) fail(ErrorCode::kInvalidArgument, "basepoint must have positive square");
  basepoint_norm_ = std::sqrt(sq.get_d());
}

GramLattice GramLattice::wehler() {
  IntMatrix g(3, 3, {0, 2, 2, 2, 0, 2, 2, 2, 0});
  return GramLattice(std::move(g), IntVec{1, 1, 1});
}

std::vector<double> GramLattice::basepoint() const {
  std::vector<double> out = to_double(basepoint_dir_);
  for (double& x : out) x /= basepoint_norm_;
  return out;
}

Int GramLattice::pair(const IntVec& v, const IntVec& w) const {
  check_dim(*this, v.size(), "pair");
  check_dim(*this, w.size(), "pair");
  Int s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < w.size(); ++j) s += v[i] * gram_(i, j) * w[j];
  }
  return s;
}

Rat GramLattice::pair(const RatVec& v, const RatVec& w) const {
  check_dim(*this, v.size(), "pair");
  check_dim(*this, w.size(), "pair");
  Rat s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < w.size(); ++j) s += v[i] * gram_(i, j) * w[j];
  }
  return s;
}

double GramLattice::pair(const std::vector<double>& v, const std::vector<double>& w) const {
  check_dim(*this, v.size(), "pair");
  check_dim(*this, w.size(), "pair");
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) s += v[i] * gram_(i, j).get_d() * w[j];
  return s;
}

HiReal GramLattice::pair(const HiVec& v, const HiVec& w) const {
  check_dim(*this, v.size(), "pair");
  check_dim(*this, w.size(), "pair");
  HiReal s = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (gram_(i, j) == 0) continue;
      s += v[i] * gram_(i, j).get_si() * w[j];
    }
  return s;
}

double GramLattice::mass(const std::vector<double>& v) const {
  return pair(to_double(basepoint_dir_), v) / basepoint_norm_;
}

HiReal GramLattice::mass(const HiVec& v) const {
  return pair(to_hi(basepoint_dir_), v) / sqrt(HiReal(pair(basepoint_dir_, basepoint_dir_).get_mpz_t()));
}

bool GramLattice::preserves(const IntMatrix& m) const {
  if (m.rows() != rank() || m.cols() != rank()) return false;
  return m.transpose() * gram_ * m == gram_;
}

Rat gram_pair(const GramLattice& lattice, const RatVec& v, const RatVec& w) { return lattice.pair(v, w); }

const Parabolic& Isometry::parabolic() const {
  if (!is_parabolic()) fail(ErrorCode::kNonParabolicInput, "isometry is not parabolic");
  return std::get<Parabolic>(kind);
}

const Hyperbolic& Isometry::hyperbolic() const {
  if (!is_hyperbolic()) fail(ErrorCode::kInvalidArgument, "isometry is not hyperbolic");
  return std::get<Hyperbolic>(kind);
}

RatVec reduce_mod(const RatVec& xi, const IntVec& e) {
  std::size_t pivot = 0;
  while (pivot < e.size() && e[pivot] == 0) ++pivot;
  if (pivot == e.size()) fail(ErrorCode::kInvalidArgument, "reduction modulo the zero vector");
  RatVec out = xi;
  const Rat f = xi[pivot] / Rat(e[pivot]);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= f * e[i];
  return out;
}

namespace {

// (m v - v) for v with <v, e> = 1, reduced modulo e; the second component
// reports whether every other admissible v gives the same class.
std::pair<RatVec, bool> translation_datum(const GramLattice& lattice, const IntMatrix& m, const IntVec& e) {
  const std::size_t n = lattice.rank();
  const RatMatrix mq = to_rat(m);
  const RatVec eq = to_rat(e);
  std::vector<Rat> pairings(n);
  std::size_t j = n;
  for (std::size_t i = 0; i < n; ++i) {
    RatVec basis(n);
    basis[i] = 1;
    pairings[i] = lattice.pair(basis, eq);
    if (j == n && pairings[i] != 0) j = i;
  }
  if (j == n) fail(ErrorCode::kNonParabolicInput, "fixed vector pairs to zero with every basis vector");

  auto datum = [&](const RatVec& v) {
    RatVec mv = mq * v;
    for (std::size_t i = 0; i < n; ++i) mv[i] -= v[i];
    return reduce_mod(mv, e);
  };

  RatVec v(n);
  v[j] = 1 / pairings[j];
  RatVec xi = datum(v);
  bool consistent = true;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == j) continue;
    RatVec v2 = v;
    v2[k] += 1;
    v2[j] -= pairings[k] / pairings[j];
    consistent = consistent && datum(v2) == xi;
  }
  return {xi, consistent};
}

}  // namespace

RatVec parabolic_xi(const GramLattice& lattice, const IntMatrix& m, const IntVec& e) {
  check_dim(lattice, e.size(), "parabolic_xi");
  if (lattice.pair(e, e) != 0) fail(ErrorCode::kNonParabolicInput, "E is not a null vector");
  if (m * e != e) fail(ErrorCode::kNonParabolicInput, "matrix does not fix E");
  auto [xi, consistent] = translation_datum(lattice, m, e);
  if (!consistent) fail(ErrorCode::kNonParabolicInput, "matrix does not act trivially on E-perp/E");
  return xi;
}

Rat ns_norm_sq(const GramLattice& lattice, const Isometry& g) {
  const Parabolic& p = g.parabolic();
  return -lattice.pair(p.xi, p.xi);
}

RatMatrix exp_parabolic(const GramLattice& lattice, const IntVec& e, const RatVec& xi) {
  check_dim(lattice, e.size(), "exp_parabolic");
  check_dim(lattice, xi.size(), "exp_parabolic");
  const RatVec eq = to_rat(e);
  if (lattice.pair(xi, eq) != 0) fail(ErrorCode::kXiNotOrthogonalToE, "xi is not orthogonal to E");
  const std::size_t n = lattice.rank();
  const Rat half_norm = -lattice.pair(xi, xi) / 2;
  RatMatrix out(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    RatVec v(n);
    v[c] = 1;
    const Rat ve = lattice.pair(v, eq);
    const Rat vxi = lattice.pair(v, xi);
    for (std::size_t r = 0; r < n; ++r) out(r, c) = v[r] + ve * xi[r] - vxi * eq[r] + ve * half_norm * eq[r];
  }
  return out;
}

double operator_norm(const IntMatrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
  return svd.singularValues()(0);
}

Isometry classify_isometry(const GramLattice& lattice, const IntMatrix& m, unsigned finite_order_bound) {
  if (m.rows() != lattice.rank() || m.cols() != lattice.rank())
    fail(ErrorCode::kDimensionMismatch, "isometry has wrong shape");
  if (!lattice.preserves(m)) fail(ErrorCode::kNotIsometry, "matrix does not preserve the intersection form");

  const std::size_t n = lattice.rank();
  const IntMatrix id = IntMatrix::identity(n);
  IntMatrix power = m;
  for (unsigned k = 1; k <= finite_order_bound; ++k) {
    if (power == id) return Isometry{m, FiniteOrder{k}};
    power = power * m;
  }

  // Spectral radius 1 for an integral matrix means every eigenvalue is a root
  // of unity, so some power below the bound is unipotent; decide that exactly.
  bool quasi_unipotent = false;
  power = m;
  for (unsigned k = 1; k <= finite_order_bound && !quasi_unipotent; ++k) {
    const IntMatrix shifted = power - id;
    IntMatrix nil = shifted;
    for (std::size_t j = 1; j < n; ++j) nil = nil * shifted;
    quasi_unipotent = nil == IntMatrix(n, n);
    power = power * m;
  }

  Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(m));
  const Eigen::VectorXcd ev = solver.eigenvalues();
  Eigen::Index top = 0;
  Eigen::Index bottom = 0;
  for (Eigen::Index i = 1; i < ev.size(); ++i) {
    if (std::abs(ev(i)) > std::abs(ev(top))) top = i;
    if (std::abs(ev(i)) < std::abs(ev(bottom))) bottom = i;
  }
  const double radius = std::abs(ev(top));

  if (!quasi_unipotent) {
    Hyperbolic h;
    h.lambda = radius;
    auto normalize = [&](std::vector<double> v) {
      const double mass = lattice.mass(v);
      for (double& x : v) x /= mass;
      return v;
    };
    h.expanded = normalize(eigen_real_vector(solver.eigenvectors().col(top)));
    h.contracted = normalize(eigen_real_vector(solver.eigenvectors().col(bottom)));
    return Isometry{m, h};
  }

  RatMatrix shifted = to_rat(m - id);
  std::vector<RatVec> kernel = rational_kernel(shifted);
  std::optional<RatVec> null_vector;
  if (kernel.size() == 1) {
    if (lattice.pair(kernel[0], kernel[0]) == 0) null_vector = kernel[0];
  } else if (kernel.size() > 1) {
    // Radical of the form restricted to the fixed space.
    RatMatrix restricted(kernel.size(), kernel.size());
    for (std::size_t a = 0; a < kernel.size(); ++a)
      for (std::size_t b = 0; b < kernel.size(); ++b) restricted(a, b) = lattice.pair(kernel[a], kernel[b]);
    std::vector<RatVec> radical = rational_kernel(restricted);
    if (radical.size() == 1) {
      RatVec v(n);
      for (std::size_t a = 0; a < kernel.size(); ++a)
        for (std::size_t i = 0; i < n; ++i) v[i] += radical[0][a] * kernel[a][i];
      null_vector = v;
    }
  }
  if (!null_vector)
    fail(ErrorCode::kNoIntegralFixedNullVector, "spectral radius 1 but no rational fixed null vector");

  IntVec e = primitive(*null_vector);
  if (lattice.pair(lattice.basepoint_direction(), e) < 0)
    for (Int& x : e) x = -x;
  Parabolic p;
  p.fixed_null = e;
  p.xi = translation_datum(lattice, m, e).first;
  return Isometry{m, p};
}

}  // namespace k3h
