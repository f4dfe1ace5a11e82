// Copyright 2026 The BanditLab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BANDITLAB_RNG_HPP_
#define BANDITLAB_RNG_HPP_

#include <array>
#include <cstdint>
#include <string_view>

namespace banditlab {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32-10 block function (Salmon, Moraes, Dror, Shaw, "Parallel random
// numbers: as easy as 1, 2, 3", SC'11). Output matches the Random123
// known-answer vectors.
inline PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  constexpr std::uint32_t kMulA = 0xD2511F53u;
  constexpr std::uint32_t kMulB = 0xCD9E8D57u;
  constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  constexpr std::uint32_t kWeylB = 0xBB67AE85u;
  const auto round = [&ctr](std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k0,
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k1,
           static_cast<std::uint32_t>(p0)};
  };
  round(key[0], key[1]);
#if defined(__GNUC__)
#pragma GCC unroll 9
#endif
  for (int r = 1; r < 10; ++r) {
    key[0] += kWeylA;
    key[1] += kWeylB;
    round(key[0], key[1]);
  }
  return ctr;
}

// SplitMix64 finalizer; used to turn labels and indices into stream ids.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// FNV-1a 64-bit hash of a byte string.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

// Maps a 64-bit word to a double strictly inside (0, 1): the top 52 bits
// select a cell of width 2^-52 and the result is the cell midpoint. With 52
// bits the midpoint k + 1/2 is exact, so the top cell stays below 1.
constexpr double to_open_unit(std::uint64_t word) {
  return (static_cast<double>(word >> 12) + 0.5) * 0x1.0p-52;
}

/// A counter-based random stream.
///
/// The stream is identified by (master_seed, stream_id, lane). Word n of the
/// stream is a pure function of those values and n, so the sequence is
/// bit-reproducible on any platform and streams can be consumed in any order
/// or in parallel. The Philox key holds the master seed; the 128-bit counter
/// holds the stream id (64 bits), the lane (8 bits) and the block index
/// (56 bits). Each block yields two 64-bit words.
///
/// Consumption contract: every uniform, every standard normal and every
/// J-distributed draw uses exactly one word.
class RngStream {
 public:
  static constexpr std::uint32_t kLaneCount = 256;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id,
            std::uint32_t lane = 0);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint32_t lane() const { return lane_; }

  // Fresh stream sharing seed and id but drawing from another lane, starting
  // at position 0.
  RngStream substream(std::uint32_t lane) const;

  // Number of words consumed so far.
  std::uint64_t position() const { return position_; }
  void advance(std::uint64_t words) { position_ += words; }

  std::uint64_t word_at(std::uint64_t pos) {
    const std::uint64_t block = pos >> 1;
    if (block != cached_block_) refill(block);
    return (pos & 1) ? (static_cast<std::uint64_t>(cache_[3]) << 32 | cache_[2])
                     : (static_cast<std::uint64_t>(cache_[1]) << 32 | cache_[0]);
  }
  double uniform_at(std::uint64_t pos) { return to_open_unit(word_at(pos)); }

  std::uint64_t next_u64() { return word_at(position_++); }
  double next_uniform() { return to_open_unit(next_u64()); }

 private:
  void refill(std::uint64_t block);

  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint32_t lane_;
  std::uint64_t position_ = 0;
  std::uint64_t cached_block_ = ~0ull;
  PhiloxCounter cache_{};
};

}  // namespace banditlab

#endif  // BANDITLAB_RNG_HPP_
