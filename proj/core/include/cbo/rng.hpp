#pragma once

#include <array>
#include <cstdint>

namespace cbo {

// Philox4x32-10 keyed counter permutation. Stateless: one call maps a
// (counter, key) pair to four pseudo-random 32-bit words, so draws can be
// indexed rather than sequenced and parallel workers never share state.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key);

// One logical random stream, identified by (seed, stream). Each stream owns
// the full 2^64 counter block space; distinct (seed, stream) pairs are
// independent by construction. Consumption order is the only mutable state.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  // Uniform on [0,1) with 53 random bits.
  double uniform();
  // Uniform on (0,1]; safe as a log() argument.
  double uniform_pos();
  // Standard normal via Box-Muller; generates pairs, caches the second.
  double normal();

  std::uint64_t block_index() const { return block_; }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> words_{};
  int word_pos_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace cbo
