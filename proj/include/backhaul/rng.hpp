/* backhaul-sim
 * Copyright (C) 2026 the backhaul-sim developers
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License. */

#pragma once

#include <cstdint>
#include <random>

namespace backhaul {

// Deterministic seed derivation. Every randomized routine receives an explicit
// 64-bit seed; experiment drivers derive per-trial seeds from a master seed so
// that runs are reproducible byte-for-byte and trials are order-independent.
//
// Scheme: splitmix64 finalizer applied twice,
//   derive_seed(base, stream, counter) = mix(mix(base + GAMMA*stream) + counter)
// with GAMMA = 0x9E3779B97F4A7C15 (the splitmix64 increment). Distinct
// (stream, counter) pairs give statistically independent seeds.

constexpr std::uint64_t kSeedGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                    std::uint64_t counter = 0) {
    return mix64(mix64(base + kSeedGamma * stream) + counter);
}

// All stochastic sampling goes through one engine type so that a seed pins the
// produced sequence across modules and platforms.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// Uniform double in [0, 1) built from the raw engine output (53 mantissa
// bits). Used instead of std::uniform_real_distribution so sequences do not
// depend on the standard library implementation.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(rng);
}

// Uniform integer in [0, n): rejection sampling on the raw engine, unbiased
// and implementation-independent.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

}  // namespace backhaul
