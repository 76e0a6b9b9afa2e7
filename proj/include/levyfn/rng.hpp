/*
   Copyright 2026 The levyfn Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace levyfn {

/// Philox4x32-10 counter-based generator.
/// The stream is fully determined by (key, counter); there is no hidden state
/// shared between instances, so substreams can be handed to any worker.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(Key key, Counter counter = {0, 0, 0, 0}) : key_(key), counter_(counter) {}

  /// Substream keyed by (seed, stream id).
  static Philox4x32 substream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// One block of the raw bijection.
  static Counter block(Counter counter, Key key);

 private:
  Key key_;
  Counter counter_;
  Counter buffer_{};
  int used_ = 4;
};

/// Uniform double in the open interval (0, 1) from 53 random bits.
double uniform_open(Philox4x32& gen);

/// SplitMix64 finalizer; used to decorrelate (seed, id) pairs.
std::uint64_t mix64(std::uint64_t x);

}  // namespace levyfn
