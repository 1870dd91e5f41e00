#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sbrel/random_stream.hpp"
#include "sbrel/test_form.hpp"

namespace sbrel {

/// Nested forms: forms[g] holds the first lengths[g] draws of one sequence.
struct FormTrajectory {
  std::vector<std::size_t> lengths;
  std::vector<std::size_t> items;  // all max(lengths) draws

  TestForm form(std::size_t g) const;
  std::size_t size() const noexcept { return lengths.size(); }
};

/// n uniform draws with replacement from {0, ..., pool_size - 1}.
TestForm sample_form(std::size_t pool_size, std::size_t n, const RandomStream& stream);

/// One sequence of max(lengths) draws shared by every length on the grid.
/// Equals sample_form(pool_size, max(lengths), stream) for the same stream.
FormTrajectory sample_trajectory(std::size_t pool_size, std::span<const std::size_t> lengths,
                                 const RandomStream& stream);

/// 10, 15, ..., 50 unless overridden.
std::vector<std::size_t> length_grid(std::size_t first, std::size_t last, std::size_t step);

}  // namespace sbrel
