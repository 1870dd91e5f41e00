#include "sbrel/random_stream.hpp"

namespace sbrel {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RandomStream::RandomStream(std::uint64_t master_seed) : key_(splitmix64(master_seed)) {}

RandomStream RandomStream::child(std::string_view label) const {
  // Tag strings and integers differently so child("7") != child(7).
  return RandomStream(splitmix64(key_ ^ splitmix64(fnv1a64(label) ^ 0x5354524eULL)), FromKey{});
}

RandomStream RandomStream::child(std::uint64_t index) const {
  return RandomStream(splitmix64(key_ ^ splitmix64(index * 0x2545f4914f6cdd1dULL + 1)), FromKey{});
}

Engine RandomStream::engine() const {
  std::seed_seq seq{static_cast<std::uint32_t>(key_), static_cast<std::uint32_t>(key_ >> 32)};
  return Engine(seq);
}

}  // namespace sbrel
