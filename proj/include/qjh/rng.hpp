// Copyright 2026 The qjh Authors
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

#pragma once

#include <array>
#include <cstdint>

namespace qjh {

/// Philox4x64-10 counter-based generator (Salmon et al., SC'11). Output is
/// a pure function of (counter, key), so any stream position can be
/// reproduced without replaying earlier draws.
struct Philox4x64 {
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static Counter generate(Counter counter, Key key);
};

/// Sequential view of one Philox stream. Key = {stream_seed, 0}; block i is
/// Philox(counter = {i, 0, 0, 0}) and its four words are consumed in order.
class PhiloxStream {
 public:
  explicit PhiloxStream(std::uint64_t stream_seed) : key_{stream_seed, 0} {}

  std::uint64_t next_u64();
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  Philox4x64::Key key_;
  std::uint64_t block_ = 0;
  Philox4x64::Counter buffer_{};
  int used_ = 4;
};

/// Per-trajectory stream seed: base XOR trajectory index.
constexpr std::uint64_t derive_stream_seed(std::uint64_t base, std::uint64_t index) {
  return base ^ index;
}

}  // namespace qjh
