// Copyright 2026 The Authors.
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

//
// Seeded, portable random number generation.
//
// All randomized code in this library draws from xoshiro256** seeded through
// splitmix64, so results are bit-identical across platforms and standard
// library versions (std::uniform_int_distribution and friends are not
// portable). Substreams are derived from (seed, purpose, index) so that the
// draws of one solver iteration never depend on how many random numbers an
// earlier iteration consumed. The plain and lazy stochastic-greedy variants
// rely on this to sample identical candidate batches.

#ifndef SUBMOD_RNG_HPP_
#define SUBMOD_RNG_HPP_

#include <array>
#include <cstdint>
#include <vector>

namespace submod {

// splitmix64 (Steele/Lea/Vigna). Advances `x` and returns the next output.
inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Substream purposes. Kept distinct so e.g. the candidate sample of
// iteration 3 and the Bernoulli keep-mask never collide.
enum class RngStream : std::uint64_t {
  kSampleBatch = 1,   // per-iteration candidate batch (index = iteration)
  kPermutation = 2,   // random-selection permutation
  kKeepMask = 3,      // sample-greedy Bernoulli subsample
  kProbe = 4,         // refcheck Monte Carlo draws (index = trial)
  kGenerate = 5,      // synthetic dataset / scenario generation
};

// xoshiro256** 1.0 (Blackman/Vigna, public domain reference algorithm).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : state_) w = splitmix64(x);
  }

  // Derives an independent generator from (seed, purpose, index).
  static Rng substream(std::uint64_t seed, RngStream purpose,
                       std::uint64_t index = 0) {
    std::uint64_t x = seed;
    x = splitmix64(x) ^ static_cast<std::uint64_t>(purpose);
    x = splitmix64(x) ^ index;
    return Rng(splitmix64(x));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Unbiased integer in [0, bound) via Lemire's multiply-shift rejection.
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next()) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }
  std::array<std::uint64_t, 4> state_;
};

// Moves a uniform random `count`-subset to the front of `items`
// (partial Fisher-Yates). Order of the first `count` entries is random.
template <typename T>
void partial_shuffle(std::vector<T>& items, std::size_t count, Rng& rng) {
  const std::size_t n = items.size();
  if (count > n) count = n;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(items[i], items[j]);
  }
}

}  // namespace submod

#endif  // SUBMOD_RNG_HPP_
