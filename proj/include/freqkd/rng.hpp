// Copyright 2026 The freqkd Authors
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

#include <cstdint>
#include <random>

namespace freqkd {

using Rng = std::mt19937_64;

/// Purpose tags that keep independent random streams from overlapping.
enum class StreamTag : std::uint64_t {
    AliceChoice = 1,
    BobSetting = 2,
    Physics = 3,
    Disclosure = 4,
    Routing = 5,
    LeafChoice = 6,
    Property = 7,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic engine for the stream identified by (seed, tag, a, b).
/// Distinct keys give statistically independent engines; the same key always
/// reproduces the same sequence.
inline Rng make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t a = 0,
                       std::uint64_t b = 0) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ static_cast<std::uint64_t>(tag));
    h = mix64(h ^ a);
    h = mix64(h ^ (b * 0xd6e8feb86659fd93ULL));
    return Rng(h);
}

/// Uniform double in [0, 1) drawn with the standard distribution.
inline double uniform01(Rng &rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

} // namespace freqkd
