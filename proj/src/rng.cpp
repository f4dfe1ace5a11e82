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

#include "banditlab/rng.hpp"

#include "banditlab/errors.hpp"

namespace banditlab {

namespace {
constexpr std::uint64_t kBlockIndexMask = (1ull << 56) - 1;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id,
                     std::uint32_t lane)
    : master_seed_(master_seed), stream_id_(stream_id), lane_(lane) {
  if (lane >= kLaneCount) {
    throw ContractViolation("RngStream lane must be < 256");
  }
}

RngStream RngStream::substream(std::uint32_t lane) const {
  return RngStream(master_seed_, stream_id_, lane);
}

void RngStream::refill(std::uint64_t block) {
  if (block > kBlockIndexMask) {
    throw ContractViolation("RngStream exhausted (2^57 words)");
  }
  const PhiloxCounter ctr = {
      static_cast<std::uint32_t>(block),
      static_cast<std::uint32_t>(block >> 32) | (lane_ << 24),
      static_cast<std::uint32_t>(stream_id_),
      static_cast<std::uint32_t>(stream_id_ >> 32)};
  const PhiloxKey key = {static_cast<std::uint32_t>(master_seed_),
                         static_cast<std::uint32_t>(master_seed_ >> 32)};
  cache_ = philox4x32_10(ctr, key);
  cached_block_ = block;
}

}  // namespace banditlab
