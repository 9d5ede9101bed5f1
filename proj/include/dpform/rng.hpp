// Copyright 2026 The dpform Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPFORM_RNG_HPP
#define DPFORM_RNG_HPP

#include <array>
#include <cstdint>

namespace dpform::rng {

// Philox-4x32 counter-based generator, 10 rounds (Salmon et al. 2011).
// A block is a pure function of (counter, key), so substreams can be
// addressed directly and sampled in any order or in parallel with
// bit-identical results.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  static Counter block(Counter counter, Key key);
};

// Stream of i.i.d. standard normal deviates addressed by
// (seed, run, t, stream). Blocks are consumed in increasing order through
// the fourth counter word; two normals are produced per block via
// Box-Muller. Streams with distinct addresses are independent.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint32_t run, std::uint32_t t,
                 std::uint32_t stream);

  double next();

 private:
  Philox4x32::Key key_;
  Philox4x32::Counter counter_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dpform::rng

#endif  // DPFORM_RNG_HPP
