//
// Copyright 2026 The drodp Authors
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
//

#ifndef DRODP_RNG_H_
#define DRODP_RNG_H_

#include <cstdint>
#include <string_view>
#include <vector>

namespace drodp {

// Counter-based pseudorandom generator (splitmix64 output function over a
// per-stream key plus running counter).  Streams are split by label: a child
// stream's key is a mix of the parent key and the label, so
// Rng(seed).Split(a).Split(b) is a deterministic function of (seed, a, b) and
// distinct label paths yield statistically independent streams.  Optimizers
// key sub-streams by (estimator id, iteration), which keeps noise draws
// independent of batch-sampling draws and makes traces bit-reproducible.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  // Derives an independent sub-stream. The child's draws do not affect the
  // parent's counter.
  Rng Split(uint64_t label) const;
  Rng Split(std::string_view label) const;

  uint64_t NextU64();

  // Uniform on [0, 1), 53-bit resolution.
  double NextUniform();

  // Standard normal via Box-Muller on two uniforms (no cached second value,
  // so the draw count per call is fixed at two).
  double NextGaussian();

  // Uniform on {0, ..., bound-1}, unbiased (rejection sampling). bound >= 1.
  int64_t NextInt(int64_t bound);

  // Draws `count` distinct indices from {0, ..., population-1} by partial
  // Fisher-Yates; order is the draw order.
  std::vector<int> SampleWithoutReplacement(int population, int count);

 private:
  Rng(uint64_t key, uint64_t counter) : key_(key), counter_(counter) {}

  uint64_t key_;
  uint64_t counter_;
};

}  // namespace drodp

#endif  // DRODP_RNG_H_
