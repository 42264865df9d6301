#pragma once

#include <cstdint>
#include <random>

namespace nse {

using RandomStream = std::mt19937_64;

enum class StreamRole : std::uint64_t {
  signal = 0x5349474e,  // field realization, one per replicate
  noise = 0x4e4f4953,   // pixel noise, one per (replicate, scale)
  test = 0x54455354,
};

/// Master seed plus a keyed derivation of independent substreams.
///
/// The substream for (replicate, role, index) is seeded from a SplitMix64
/// hash of the tuple, so draws depend only on the key and never on which
/// worker thread consumes them.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  RandomStream stream(std::uint64_t replicate, StreamRole role, std::uint64_t index = 0) const {
    std::uint64_t key = mix(seed_);
    key = mix(key ^ replicate);
    key = mix(key ^ static_cast<std::uint64_t>(role));
    key = mix(key ^ index);
    return RandomStream(key);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
};

}  // namespace nse
