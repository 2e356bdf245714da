// Copyright 2025 The lpgnn-lab Authors
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

#ifndef LPGNN_RNG_HPP_
#define LPGNN_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace lpgnn {

// Seeded random stream with deterministic derivation of sub-streams.
// One root seed is split into named per-purpose streams so that, e.g.,
// the encoder draws for node v are independent of whether an attack
// consumed randomness earlier in the pipeline.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(scramble(seed)) {}

  // Derives an independent stream from this stream's seed and a purpose
  // tag plus up to two indices (typically a node id and a repeat index).
  Rng stream(std::string_view purpose, std::uint64_t a = 0,
             std::uint64_t b = 0) const {
    std::uint64_t s = seed_;
    s = combine(s, hash(purpose));
    s = combine(s, a + 1);
    s = combine(s, b + 1);
    return Rng(s);
  }

  std::uint64_t seed() const { return seed_; }
  std::mt19937_64& gen() { return gen_; }

  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(gen_);
  }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  // Inclusive bounds.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen_);
  }
  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }
  double normal(double mean = 0.0, double stddev = 1.0) {
    return std::normal_distribution<double>(mean, stddev)(gen_);
  }

 private:
  static std::uint64_t scramble(std::uint64_t x) {
    // splitmix64 finalizer.
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }
  static std::uint64_t combine(std::uint64_t a, std::uint64_t b) {
    return scramble(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
  }
  static std::uint64_t hash(std::string_view s) {
    // FNV-1a.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace lpgnn

#endif  // LPGNN_RNG_HPP_
