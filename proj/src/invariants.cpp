#include "k3h/invariants.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace k3h {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool usable(const StarSample& s) { return !s.failed && std::isfinite(s.height.value); }

double integrand(double h, std::size_t rank) { return std::pow(h, -static_cast<double>(rank - 2)); }

// d/dh of h^-(rank-2), in absolute value.
double integrand_slope(double h, std::size_t rank) {
  const double k = static_cast<double>(rank - 2);
  return k * std::pow(h, -k - 1.0);
}

void count_flags(const std::vector<StarSample>& samples, IntegralResult& r) {
  for (const auto& s : samples) {
    if (s.failed) ++r.failed;
    else if (!s.height.converged) ++r.non_converged;
  }
  r.flagged = 20 * (r.failed + r.non_converged) > samples.size();
}

// Mean of f over the usable samples among those selected, times 2 pi.
template <class Select, class F>
double periodic_mean(const std::vector<StarSample>& samples, Select select, F f) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (select(i) && usable(samples[i])) {
      sum += f(samples[i]);
      ++count;
    }
  return count ? kTwoPi * sum / static_cast<double>(count) : NAN;
}

void check_grid(const std::vector<StarSample>& samples, std::size_t rank) {
  if (samples.size() < 16) fail(ErrorCode::kInvalidArgument, "need at least 16 samples");
  if (rank < 3) fail(ErrorCode::kInvalidArgument, "rank must be at least 3");
}

}  // namespace

HeightOracle engine_oracle(const HeightEngine& engine, const SurfacePoint& p, const HeightOptions& options) {
  return [&engine, p, options](const IrrationalRay& ray) { return engine.canonical_boundary_height(ray, p, options); };
}

HeightOracle constant_oracle(double height) {
  return [height](const IrrationalRay&) {
    HeightValue hv;
    hv.value = height;
    hv.converged = true;
    return hv;
  };
}

std::vector<StarSample> star_set(const DiagonalFrame& frame, const HeightOracle& oracle, const StarOptions& options) {
  const std::size_t n = options.samples;
  if (n < 16) fail(ErrorCode::kInvalidArgument, "samples must be at least 16");
  if (frame.lattice().rank() != 3) fail(ErrorCode::kDimensionMismatch, "star sets are sampled on a circle (rank 3)");
  std::vector<StarSample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].theta = options.theta_offset + kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    out[i].alpha = frame.null_vector(ray_from_angle(out[i].theta));
  }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      StarSample& s = out[i];
      try {
        s.height = oracle(ray_from_angle(s.theta));
        s.radius = 1.0 / s.height.value;
      } catch (const std::exception& e) {
        s.failed = true;
        s.error = e.what();
        s.height.value = NAN;
        s.radius = NAN;
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return out;
}

IntegralResult total_height(const std::vector<StarSample>& samples, std::size_t rank) {
  check_grid(samples, rank);
  IntegralResult r;
  count_flags(samples, r);
  auto f = [rank](const StarSample& s) { return integrand(s.height.value, rank); };
  r.value = periodic_mean(samples, [](std::size_t) { return true; }, f);
  if (samples.size() % 2 == 0) {
    const double half = periodic_mean(samples, [](std::size_t i) { return i % 2 == 0; }, f);
    r.quadrature_error = std::fabs(r.value - half);
  }
  const double height_part = periodic_mean(samples, [](std::size_t) { return true; }, [rank](const StarSample& s) {
    return integrand_slope(s.height.value, rank) * s.height.error_bound;
  });
  r.error_bound = r.quadrature_error + height_part;
  if (!std::isfinite(r.value)) r.flagged = true;
  return r;
}

IntegralResult star_volume(const std::vector<StarSample>& samples, std::size_t rank) {
  check_grid(samples, rank);
  IntegralResult r;
  count_flags(samples, r);
  // 4-point Gauss-Legendre on [0, R] for r^(rank-3): exact up to rank 10.
  static const double nodes[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                  0.8611363115940526};
  static const double weights[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                    0.3478548451374538};
  auto radial = [rank](double radius) {
    double sum = 0.0;
    for (int j = 0; j < 4; ++j) {
      const double x = 0.5 * radius * (nodes[j] + 1.0);
      sum += weights[j] * std::pow(x, static_cast<double>(rank - 3));
    }
    return 0.5 * radius * sum;
  };
  // Periodic composite Simpson: weights 2/3 on even and 4/3 on odd indices.
  const std::size_t n = samples.size();
  const bool simpson = n % 2 == 0;
  double sum = 0.0, weight = 0.0, trap = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!usable(samples[i])) continue;
    const double w = simpson ? (i % 2 == 0 ? 2.0 / 3.0 : 4.0 / 3.0) : 1.0;
    const double v = radial(1.0 / samples[i].height.value);
    sum += w * v;
    weight += w;
    trap += v;
    ++count;
  }
  r.value = weight > 0 ? kTwoPi * sum / weight : NAN;
  const double trapezoid = count ? kTwoPi * trap / static_cast<double>(count) : NAN;
  r.quadrature_error = std::fabs(r.value - trapezoid);
  double height_part = 0.0;
  for (const auto& s : samples)
    if (usable(s)) height_part += integrand_slope(s.height.value, rank) / static_cast<double>(rank - 2) * s.height.error_bound;
  r.error_bound = r.quadrature_error + (count ? kTwoPi * height_part / static_cast<double>(count) : 0.0);
  if (!std::isfinite(r.value)) r.flagged = true;
  return r;
}

StarShape star_shape(const std::vector<StarSample>& samples) {
  StarShape shape;
  // Unconverged samples still carry a value with a finite error; only
  // failed samples and infinite bounds are left out.
  auto good = [](const StarSample& s) { return usable(s) && std::isfinite(s.height.error_bound); };
  for (const auto& s : samples)
    if (good(s) && (!(s.radius > 0) || !std::isfinite(s.radius))) shape.positive = false;
  // Jumps between grid neighbours only; a pair with an unusable end is skipped.
  std::vector<double> jumps;
  const std::size_t n = samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = samples[i];
    const auto& b = samples[(i + 1) % n];
    if (good(a) && good(b)) jumps.push_back(std::fabs(b.radius - a.radius));
  }
  if (jumps.size() < 2) return shape;
  shape.max_jump = *std::max_element(jumps.begin(), jumps.end());
  std::vector<double> sorted = jumps;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
  shape.median_jump = sorted[sorted.size() / 2];
  shape.continuous = shape.max_jump <= 10.0 * shape.median_jump;
  return shape;
}

std::vector<std::vector<int>> reduced_words(std::size_t max_length, int generators) {
  std::vector<std::vector<int>> out{{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_length; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (int g = 1; g <= generators; ++g) {
        if (!out[i].empty() && out[i].back() == g) continue;
        auto w = out[i];
        w.push_back(g);
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

InvarianceReport invariance_report(const HeightEngine& engine, const SurfacePoint& p, std::size_t depth,
                                   const std::function<HeightOracle(const SurfacePoint&)>& oracle_for,
                                   const StarOptions& star) {
  if (depth > 4) fail(ErrorCode::kInvalidArgument, "invariance depth must be at most 4");
  InvarianceReport report;
  for (const auto& word : reduced_words(depth)) {
    InvarianceRow row;
    row.word = word;
    const OrbitResult o = orbit(engine.surface(), word, p);
    if (o.status != OrbitStatus::kComplete) {
      row.skipped = true;
      row.error = o.message;
      report.rows.push_back(std::move(row));
      continue;
    }
    row.point = o.points.back();
    row.total = total_height(star_set(engine.frame(), oracle_for(row.point), star));
    report.rows.push_back(std::move(row));
  }
  const auto& ref = report.rows.front();
  if (ref.skipped) fail(ErrorCode::kDegenerateFiber, "start point is on a degenerate fiber");
  for (const auto& row : report.rows) {
    if (row.skipped) continue;
    const double dev = std::fabs(row.total.value - ref.total.value) / ref.total.value;
    report.max_deviation = std::max(report.max_deviation, std::isfinite(dev) ? dev : INFINITY);
  }
  return report;
}

InvarianceReport invariance_report(const HeightEngine& engine, const SurfacePoint& p, std::size_t depth,
                                   const HeightOptions& options, const StarOptions& star) {
  return invariance_report(
      engine, p, depth, [&](const SurfacePoint& q) { return engine_oracle(engine, q, options); }, star);
}

std::string star_csv(const std::vector<StarSample>& samples) {
  std::string out = "theta,alpha0,alpha1,alpha2,height,err,converged,radius\n";
  for (const auto& s : samples) {
    out += format_real(s.theta);
    for (double a : s.alpha) out += "," + format_real(a);
    out += "," + format_real(s.height.value) + "," + format_real(s.failed ? NAN : s.height.error_bound) + "," +
           (s.height.converged && !s.failed ? "true" : "false") + "," + format_real(s.radius) + "\n";
  }
  return out;
}

}  // namespace k3h
