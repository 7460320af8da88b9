// Copyright 2026 The rismimo Authors.
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

#ifndef RISMIMO_RNG_HPP
#define RISMIMO_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace rismimo {

// splitmix64; used both as a stream generator and to derive substream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a substream seed from (seed, a, b). Evaluation-order independent:
// the result depends only on the arguments.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s = h ^ (a * 0xd6e8feb86659fd93ULL);
  h = splitmix64(s);
  s = h ^ (b * 0xa5a3564e2e1d8bafULL);
  return splitmix64(s);
}

// Small deterministic stream. Not std::mt19937_64 so that draws are
// bit-identical across standard library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    // Rejection-free modulo is fine here: n is tiny versus 2^64.
    return next_u64() % n;
  }

  // Standard normal via Box-Muller (polar-free form, deterministic).
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  // Circularly-symmetric complex Gaussian with unit variance (E|z|^2 = 1).
  std::complex<double> next_cgaussian() {
    const double s = M_SQRT1_2;
    return {s * next_gaussian(), s * next_gaussian()};
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rismimo

#endif  // RISMIMO_RNG_HPP
