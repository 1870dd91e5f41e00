#pragma once

#include <span>
#include <vector>

namespace sbrel {

/// Sum by recursive halving. The result depends only on the order of `v`,
/// so reductions over a fixed-order buffer are reproducible.
double pairwise_sum(std::span<const double> v);

double mean(std::span<const double> v);

/// Median with the midpoint convention for even counts. Empty input -> NaN.
double median(std::span<const double> v);

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_sd(std::span<const double> v);

/// Linear-interpolation quantile (R type 7) for p in [0, 1].
double quantile(std::span<const double> v, double p);

}  // namespace sbrel
