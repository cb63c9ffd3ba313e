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

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>

#include "freqkd/mode_engine.hpp"

namespace freqkd {

/// What the sender puts into the channel for one pulse.
enum class AliceChoice : std::uint8_t { NoFilter = 0, FilterOmega = 1, FilterOmegaDelta = 2 };
inline constexpr std::array<AliceChoice, 3> kAllChoices{
    AliceChoice::NoFilter, AliceChoice::FilterOmega, AliceChoice::FilterOmegaDelta};

enum class BobSetting : std::uint8_t { AomOn = 0, AomOff = 1 };
inline constexpr std::array<BobSetting, 2> kAllSettings{BobSetting::AomOn,
                                                        BobSetting::AomOff};

std::string_view to_string(AliceChoice c);
std::string_view to_string(BobSetting s);

/// Key bit carried by a filter choice; empty for NoFilter.
std::optional<int> intended_bit(AliceChoice c);

struct SinglePhoton {};
struct WeakCoherent {
    double mu = 0.1;
};
using Source = std::variant<SinglePhoton, WeakCoherent>;

/// Mean photon number of a source (1 for a single photon).
double mean_photons(const Source &source);

struct BobKitConfig {
    /// Phase of the return-pass modulator relative to the forward pass.
    double aomPhase = 0.0;
    int armDelayBins = 1;
    Source source = WeakCoherent{0.1};
    DetectorModel detD1;
    DetectorModel detD2;
};

struct AliceKitConfig {
    /// Amplitude transmittance of the pass band, per traversal.
    double filterAmpTransmittance = 1.0;
    /// Intensity fraction the monitor beam splitter sends to D3, per traversal.
    double tapRatio = 0.0;
    bool attenuatorEnabled = false;
    DetectorModel detD3;
    /// Time the filter switch needs to settle; pulses must be spaced at least
    /// this far apart.
    int switchSettlingBins = 0;
};

struct ChannelConfig {
    double ampTransmittance = 1.0;
    int oneWayDelayBins = 0;
};

/// Throw std::invalid_argument naming the violated range.
void validate(const BobKitConfig &cfg);
void validate(const AliceKitConfig &cfg);
void validate(const ChannelConfig &cfg);

/// One pulse's classical record.
struct PulseRecord {
    std::uint64_t index = 0;
    AliceChoice choice = AliceChoice::NoFilter;
    BobSetting setting = BobSetting::AomOn;
    ClickOutcome click = ClickOutcome::None;
    int d3Photons = 0;
    std::int64_t emitBin = 0;
    std::int64_t returnBin = 0;
    /// Receiver identified by the hub (network mode only).
    std::optional<int> leafId;
    std::optional<int> intendedBit;
    /// Bob's reading for a single click with the modulator off.
    std::optional<int> decodedBit;

    bool operator==(const PulseRecord &) const = default;
};

} // namespace freqkd
