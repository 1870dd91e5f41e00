#pragma once

#include <cstdint>

namespace sbrel {

/// Ratio of a target test length to a base length, kept as an exact
/// fraction of positive integers so chained predictions across a length
/// grid do not accumulate rounding in the factor itself.
class LengthFactor {
 public:
  /// Throws DomainError unless num > 0 and den > 0.
  explicit LengthFactor(std::int64_t num, std::int64_t den = 1);

  static LengthFactor ratio(std::int64_t to_len, std::int64_t from_len) {
    return LengthFactor(to_len, from_len);
  }

  std::int64_t numerator() const noexcept { return num_; }
  std::int64_t denominator() const noexcept { return den_; }
  double value() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  LengthFactor inverse() const noexcept { return LengthFactor(den_, num_, Reduced{}); }

  friend LengthFactor operator*(const LengthFactor& a, const LengthFactor& b);
  friend bool operator==(const LengthFactor&, const LengthFactor&) = default;

 private:
  struct Reduced {};
  LengthFactor(std::int64_t num, std::int64_t den, Reduced) noexcept : num_(num), den_(den) {}

  std::int64_t num_;
  std::int64_t den_;
};

/// Spearman-Brown function n*x / (1 + (n - 1)*x).
///
/// Reliabilities must lie in [0, 1]. x = 1 maps to 1 for every factor,
/// including shortening (n < 1); the closed form handles it without a
/// special case.
double sb(double x, LengthFactor n);

/// Same formula for a real-valued factor n > 0.
double sb(double x, double n);

/// Inverse in x for fixed n; equals sb(x, 1/n).
double sb_inverse(double x, LengthFactor n);

/// Predicts the reliability at `to_len` from a (mean) reliability observed at
/// `from_len`. Forward when to_len > from_len, backward otherwise.
double predict(double rho, std::int64_t from_len, std::int64_t to_len);

}  // namespace sbrel
