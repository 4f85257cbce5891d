// Copyright 2026 The safearea Authors.
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

#ifndef SAFEAREA_RNG_HPP_
#define SAFEAREA_RNG_HPP_

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace safearea {

// splitmix64 finalizer. Used for seeding and for deriving substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of the substream addressed by `path` under `master`. Distinct paths
// give statistically independent streams; the mapping is a pure function so
// replication i always sees the same stream regardless of scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t state = master;
  std::uint64_t h = splitmix64(state);
  for (std::uint64_t p : path) {
    state = h ^ (p + 0x632be59bd9b4e019ULL);
    h = splitmix64(state);
  }
  return h;
}

// Well-known stream tags. Keeping them in one place stops two subsystems
// from accidentally sharing a stream.
namespace stream {
inline constexpr std::uint64_t kNoise = 1;
inline constexpr std::uint64_t kCovariate = 2;
inline constexpr std::uint64_t kParticles = 3;
inline constexpr std::uint64_t kReplication = 4;
inline constexpr std::uint64_t kConstant = 5;
inline constexpr std::uint64_t kChunk = 6;
inline constexpr std::uint64_t kGeometry = 7;
}  // namespace stream

// xoshiro256** with explicit, copyable state. All variates are produced by
// code in this file so results are bit-identical across standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) noexcept { reseed(seed); }

  void reseed(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
    has_spare_ = false;
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on the open interval (0, 1).
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n), n > 0 (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t n) noexcept;

  // Standard normal (Marsaglia polar method).
  double normal() noexcept;

  // Independent child stream addressed by `tag`; does not advance *this.
  Rng child(std::uint64_t tag) const noexcept {
    return Rng(derive_seed(s_[0] ^ rotl(s_[2], 13), {tag}));
  }

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace safearea

#endif  // SAFEAREA_RNG_HPP_
