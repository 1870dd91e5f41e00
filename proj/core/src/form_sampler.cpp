#include "sbrel/form_sampler.hpp"

#include <string>

#include "sbrel/errors.hpp"

namespace sbrel {

TestForm FormTrajectory::form(std::size_t g) const {
  return TestForm{std::vector<std::size_t>(items.begin(),
                                           items.begin() + static_cast<std::ptrdiff_t>(lengths.at(g)))};
}

TestForm sample_form(std::size_t pool_size, std::size_t n, const RandomStream& stream) {
  if (pool_size == 0) throw DomainError("cannot sample from an empty pool");
  if (n == 0) throw DomainError("form length must be >= 1");
  Engine rng = stream.engine();
  std::uniform_int_distribution<std::size_t> pick(0, pool_size - 1);
  TestForm f;
  f.items.resize(n);
  for (auto& i : f.items) i = pick(rng);
  return f;
}

FormTrajectory sample_trajectory(std::size_t pool_size, std::span<const std::size_t> lengths,
                                 const RandomStream& stream) {
  if (lengths.empty()) throw DomainError("length grid is empty");
  for (std::size_t g = 0; g < lengths.size(); ++g) {
    if (lengths[g] == 0 || (g > 0 && lengths[g] <= lengths[g - 1])) {
      throw DomainError("length grid must be positive and strictly increasing");
    }
  }
  FormTrajectory t;
  t.lengths.assign(lengths.begin(), lengths.end());
  t.items = sample_form(pool_size, lengths.back(), stream).items;
  return t;
}

std::vector<std::size_t> length_grid(std::size_t first, std::size_t last, std::size_t step) {
  if (first == 0 || step == 0 || last < first) {
    throw DomainError("length grid needs 0 < first <= last and step > 0");
  }
  std::vector<std::size_t> g;
  for (std::size_t n = first; n <= last; n += step) g.push_back(n);
  return g;
}

}  // namespace sbrel
