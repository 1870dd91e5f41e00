#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sbrel {

using Engine = std::mt19937_64;

/// Hierarchical seed derivation. A stream is a 64-bit key obtained by mixing
/// the master seed with a path of labels (case id, purpose, replicate index);
/// each child step is a hash, so results never depend on how many siblings
/// exist or in which order threads reach them.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t master_seed);

  RandomStream child(std::string_view label) const;
  RandomStream child(std::uint64_t index) const;

  std::uint64_t key() const noexcept { return key_; }

  /// Fresh engine positioned at the start of this stream.
  Engine engine() const;

 private:
  struct FromKey {};
  RandomStream(std::uint64_t key, FromKey) noexcept : key_(key) {}

  std::uint64_t key_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t fnv1a64(std::string_view s) noexcept;

}  // namespace sbrel
