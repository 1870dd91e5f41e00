#include "sbrel/sb_math.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sbrel/errors.hpp"

namespace sbrel {
namespace {

void check_reliability(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("reliability must lie in [0, 1], got " + std::to_string(x));
  }
}

}  // namespace

LengthFactor::LengthFactor(std::int64_t num, std::int64_t den) {
  if (num <= 0 || den <= 0) {
    throw DomainError("length factor needs positive integers, got " + std::to_string(num) + "/" +
                      std::to_string(den));
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

LengthFactor operator*(const LengthFactor& a, const LengthFactor& b) {
  // Cross-reduce first to keep the products small.
  const std::int64_t g1 = std::gcd(a.num_, b.den_);
  const std::int64_t g2 = std::gcd(b.num_, a.den_);
  return LengthFactor((a.num_ / g1) * (b.num_ / g2), (a.den_ / g2) * (b.den_ / g1));
}

double sb(double x, double n) {
  check_reliability(x);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw DomainError("length factor must be positive and finite, got " + std::to_string(n));
  }
  const double y = n * x / (1.0 + (n - 1.0) * x);
  // Rounding can push the result a hair outside [0, 1] near the endpoints.
  return std::clamp(y, 0.0, 1.0);
}

double sb(double x, LengthFactor n) {
  check_reliability(x);
  // n*x/(1+(n-1)x) with n = p/q rewritten as p*x/(q + (p-q)*x) so the
  // factor is never rounded before it meets x.
  const double p = static_cast<double>(n.numerator());
  const double q = static_cast<double>(n.denominator());
  const double y = p * x / (q + (p - q) * x);
  return std::clamp(y, 0.0, 1.0);
}

double sb_inverse(double x, LengthFactor n) { return sb(x, n.inverse()); }

double predict(double rho, std::int64_t from_len, std::int64_t to_len) {
  if (from_len < 1 || to_len < 1) {
    throw DomainError("test lengths must be >= 1, got " + std::to_string(from_len) + " -> " +
                      std::to_string(to_len));
  }
  return sb(rho, LengthFactor::ratio(to_len, from_len));
}

}  // namespace sbrel
