#include "k3h/arith.hpp"

#include <cmath>
#include <cstdio>

namespace k3h {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotIsometry: return "NotIsometry";
    case ErrorCode::kNoIntegralFixedNullVector: return "NoIntegralFixedNullVector";
    case ErrorCode::kNonParabolicInput: return "NonParabolicInput";
    case ErrorCode::kXiNotOrthogonalToE: return "XiNotOrthogonalToE";
    case ErrorCode::kNonPositiveVector: return "NonPositiveVector";
    case ErrorCode::kMaxLettersExceeded: return "MaxLettersExceeded";
    case ErrorCode::kNotReducible: return "NotReducible";
    case ErrorCode::kDegenerateFiber: return "DegenerateFiber";
    case ErrorCode::kBitGuardExceeded: return "BitGuardExceeded";
    case ErrorCode::kNotOnSurface: return "NotOnSurface";
    case ErrorCode::kNonConvergedSamples: return "NonConvergedSamples";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

RatVec to_rat(const IntVec& v) {
  RatVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
  return out;
}

RatMatrix to_rat(const IntMatrix& m) {
  std::vector<Rat> data(m.data().size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = Rat(m.data()[i]);
  return RatMatrix(m.rows(), m.cols(), std::move(data));
}

IntMatrix to_int(const RatMatrix& m) {
  std::vector<Int> data(m.data().size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Rat& q = m.data()[i];
    if (q.get_den() != 1) fail(ErrorCode::kInvalidArgument, "matrix entry " + to_string(q) + " is not integral");
    data[i] = q.get_num();
  }
  return IntMatrix(m.rows(), m.cols(), std::move(data));
}

std::vector<double> to_double(const RatVec& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
  return out;
}

std::vector<double> to_double(const IntVec& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
  return out;
}

HiVec to_hi(const IntVec& v) {
  HiVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = HiReal(v[i].get_mpz_t());
  return out;
}

IntMatrix matrix_power(const IntMatrix& m, unsigned k) {
  IntMatrix result = IntMatrix::identity(m.rows());
  IntMatrix base = m;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return result;
}

IntVec primitive(const RatVec& v) {
  Int den = 1;
  for (const Rat& q : v) den = lcm(den, Int(q.get_den()));
  IntVec out(v.size());
  Int g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rat scaled = v[i] * den;
    out[i] = scaled.get_num();
    g = gcd(g, out[i]);
  }
  if (g == 0) fail(ErrorCode::kInvalidArgument, "primitive of zero vector");
  for (Int& x : out) x /= g;
  return out;
}

std::vector<RatVec> rational_kernel(const RatMatrix& m) {
  RatMatrix a = m;
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a(p, c) == 0) ++p;
    if (p == rows) continue;
    for (std::size_t j = 0; j < cols; ++j) std::swap(a(r, j), a(p, j));
    Rat inv = 1 / a(r, c);
    for (std::size_t j = 0; j < cols; ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      Rat f = a(i, c);
      for (std::size_t j = 0; j < cols; ++j) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<RatVec> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    bool is_pivot = false;
    for (std::size_t pc : pivots) is_pivot = is_pivot || pc == free;
    if (is_pivot) continue;
    RatVec v(cols);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a(i, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

double log_abs(const Int& a) {
  if (a == 0) return -INFINITY;
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, a.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

std::string to_string(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Rat parse_rational(const std::string& text) {
  auto bad = [&] { fail(ErrorCode::kParseError, "not a rational number: '" + text + "'"); };
  if (text.empty()) bad();
  const auto slash = text.find('/');
  auto parse_int = [&](const std::string& s) {
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (start == s.size()) bad();
    for (std::size_t i = start; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') bad();
    return Int(s[0] == '+' ? s.substr(1) : s, 10);
  };
  if (slash == std::string::npos) return Rat(parse_int(text));
  Int num = parse_int(text.substr(0, slash));
  Int den = parse_int(text.substr(slash + 1));
  if (den == 0) bad();
  Rat q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace k3h
