#include "sbrel/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sbrel/errors.hpp"

namespace sbrel {

double pairwise_sum(std::span<const double> v) {
  constexpr std::size_t kBlock = 16;
  if (v.size() <= kBlock) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double mean(std::span<const double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return pairwise_sum(v) / static_cast<double>(v.size());
}

double median(std::span<const double> v) { return quantile(v, 0.5); }

double sample_sd(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  // Identical values give exactly zero rather than rounding noise from the mean.
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); })) return 0.0;
  const double m = mean(v);
  std::vector<double> sq(v.size());
  std::transform(v.begin(), v.end(), sq.begin(), [m](double x) { return (x - m) * (x - m); });
  return std::sqrt(pairwise_sum(sq) / static_cast<double>(v.size() - 1));
}

double quantile(std::span<const double> v, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  const double pos = p * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  // At p = 0.5 with an even count this is the midpoint of the two middle values.
  return s[lo] + frac * (s[hi] - s[lo]);
}

}  // namespace sbrel
