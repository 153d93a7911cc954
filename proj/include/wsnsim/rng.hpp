#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace wsnsim {

// splitmix64, used to turn one master seed into independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

// Seed for a named stream (e.g. "deploy", "protocol/fuzzy") derived from the
// run's master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stream) {
  std::uint64_t s = master ^ fnv1a(stream);
  return splitmix64(s);
}

// Deterministic uniform source. mt19937_64 output is pinned by the standard
// and doubles are built by explicit bit manipulation, so a given seed yields
// the same stream on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform in [0, 1), 53-bit resolution
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // uniform index in [0, n); n must be > 0
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace wsnsim
