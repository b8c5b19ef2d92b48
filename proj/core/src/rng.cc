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

#include "drodp/rng.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace drodp {
namespace {

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer.
uint64_t Mix(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

uint64_t HashLabel(std::string_view label) {
  // FNV-1a, then finalized.
  uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return Mix(h);
}

}  // namespace

Rng::Rng(uint64_t seed) : key_(Mix(seed ^ kGolden)), counter_(0) {}

Rng Rng::Split(uint64_t label) const {
  return Rng(Mix(key_ ^ Mix(label * kGolden + 1)), 0);
}

Rng Rng::Split(std::string_view label) const {
  return Rng(Mix(key_ ^ HashLabel(label)), 0);
}

uint64_t Rng::NextU64() {
  counter_ += kGolden;
  return Mix(key_ ^ counter_);
}

double Rng::NextUniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double Rng::NextGaussian() {
  const double u1 = 1.0 - NextUniform();  // (0, 1], keeps log finite
  const double u2 = NextUniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

int64_t Rng::NextInt(int64_t bound) {
  if (bound < 1) throw std::invalid_argument("Rng::NextInt: bound must be >= 1");
  const uint64_t n = static_cast<uint64_t>(bound);
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t draw;
  do {
    draw = NextU64();
  } while (draw >= limit);
  return static_cast<int64_t>(draw % n);
}

std::vector<int> Rng::SampleWithoutReplacement(int population, int count) {
  if (count < 0 || count > population) {
    throw std::invalid_argument(
        "Rng::SampleWithoutReplacement: count must be in [0, population]");
  }
  std::vector<int> idx(population);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < count; ++i) {
    const int j = i + static_cast<int>(NextInt(population - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  return idx;
}

}  // namespace drodp
