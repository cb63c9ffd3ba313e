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

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace freqkd::testing {

/// True if `count` successes out of `n` trials sit within `sigmas` binomial
/// standard deviations of probability `p`.
inline bool within_binomial(std::uint64_t count, std::uint64_t n, double p,
                            double sigmas = 4.0) {
    const double mean = static_cast<double>(n) * p;
    const double sd = std::sqrt(std::max(0.0, static_cast<double>(n) * p * (1.0 - p)));
    return std::abs(static_cast<double>(count) - mean) <= sigmas * sd + 1e-9;
}

} // namespace freqkd::testing
