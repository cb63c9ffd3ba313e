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

#include "freqkd/bench_types.hpp"

#include <stdexcept>

namespace freqkd {

std::string_view to_string(AliceChoice c) {
    switch (c) {
    case AliceChoice::NoFilter:
        return "NoFilter";
    case AliceChoice::FilterOmega:
        return "FilterOmega";
    case AliceChoice::FilterOmegaDelta:
        return "FilterOmegaDelta";
    }
    return "?";
}

std::string_view to_string(BobSetting s) {
    return s == BobSetting::AomOn ? "AomOn" : "AomOff";
}

std::optional<int> intended_bit(AliceChoice c) {
    switch (c) {
    case AliceChoice::FilterOmega:
        return 0;
    case AliceChoice::FilterOmegaDelta:
        return 1;
    case AliceChoice::NoFilter:
        break;
    }
    return std::nullopt;
}

double mean_photons(const Source &source) {
    if (const auto *weak = std::get_if<WeakCoherent>(&source)) {
        return weak->mu;
    }
    return 1.0;
}

void validate(const BobKitConfig &cfg) {
    if (cfg.armDelayBins < 1) {
        throw std::invalid_argument("armDelayBins must be >= 1");
    }
    if (const auto *weak = std::get_if<WeakCoherent>(&cfg.source)) {
        if (!(weak->mu > 0.0)) {
            throw std::invalid_argument("weak coherent mean photon number must be > 0");
        }
    }
    validate(cfg.detD1);
    validate(cfg.detD2);
}

void validate(const AliceKitConfig &cfg) {
    if (!(cfg.filterAmpTransmittance > 0.0 && cfg.filterAmpTransmittance <= 1.0)) {
        throw std::invalid_argument("filterAmpTransmittance must lie in (0, 1]");
    }
    if (!(cfg.tapRatio >= 0.0 && cfg.tapRatio < 1.0)) {
        throw std::invalid_argument("tapRatio must lie in [0, 1)");
    }
    if (cfg.switchSettlingBins < 0) {
        throw std::invalid_argument("switchSettlingBins must be >= 0");
    }
    validate(cfg.detD3);
}

void validate(const ChannelConfig &cfg) {
    if (!(cfg.ampTransmittance > 0.0 && cfg.ampTransmittance <= 1.0)) {
        throw std::invalid_argument("channel ampTransmittance must lie in (0, 1]");
    }
    if (cfg.oneWayDelayBins < 0) {
        throw std::invalid_argument("oneWayDelayBins must be >= 0");
    }
}

} // namespace freqkd
