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
/**
 * @file
 * Eavesdropper strategies on the channel and the bright-probe attack on the
 * sender's filter.
 */

#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "freqkd/bench_types.hpp"
#include "freqkd/mode_engine.hpp"
#include "freqkd/rng.hpp"

namespace freqkd {

enum class Leg : std::uint8_t { Forward, Return };
enum class AttackLocation : std::uint8_t { Forward, Return, Both };

struct NoEve {
    bool operator==(const NoEve &) const = default;
};

/// Frequency-basis measurement followed by re-emission of the result.
struct InterceptResendFreq {
    AttackLocation location = AttackLocation::Return;
    double probability = 1.0;
    bool operator==(const InterceptResendFreq &) const = default;
};

/// Beam splitter of intensity reflectivity q on the return leg.
struct PassiveTap {
    double reflectivity = 0.5;
    bool operator==(const PassiveTap &) const = default;
};

/// A bright pulse injected towards the sender on every round.
struct StrongProbe {
    double meanPhotons = 100.0;
    bool operator==(const StrongProbe &) const = default;
};

using EveStrategy = std::variant<NoEve, InterceptResendFreq, PassiveTap, StrongProbe>;

void validate(const EveStrategy &eve);

/// Parses "none", "intercept:<forward|return|both>:<p>", "tap:<q>",
/// "probe:<mean>". Throws std::invalid_argument on malformed input.
EveStrategy parse_eve(const std::string &spec);
std::string format_eve(const EveStrategy &eve);

struct EveLogEntry {
    bool attacked = false;
    std::optional<FrequencyBin> measuredFreq;
    int tappedPhotons = 0;
    std::optional<AliceChoice> probeReadout;

    bool operator==(const EveLogEntry &) const = default;
};

using EveLog = std::vector<EveLogEntry>;

/// One possible result of an attack, with its probability.
struct AttackBranch {
    double probability = 1.0;
    PureState state;
    EveLogEntry log;
};

/**
 * Exact branch decomposition of an attack on one leg.
 *
 * Intercept-resend projects onto each frequency bin; the surviving component
 * is rescaled to the norm of the incoming state, so a measurement neither
 * creates nor removes photons and the collapsed mode keeps the time bin and
 * polarization a legitimate pulse of that frequency has. Probabilities sum
 * to one.
 */
std::vector<AttackBranch> attack_branches(const PureState &s, const EveStrategy &eve,
                                          Leg leg);

/// Samples one branch. For PassiveTap the tapped-photon count is drawn from
/// the diverted intensity.
std::pair<PureState, EveLogEntry> attack_state(const PureState &s,
                                               const EveStrategy &eve, Leg leg,
                                               Rng &rng);

struct ProbeResult {
    AliceChoice readout = AliceChoice::NoFilter;
    int d3ExtraPhotons = 0;
    int reflectedBase = 0;
    int reflectedShifted = 0;
};

/**
 * Bright-probe readout of the sender's filter setting.
 *
 * The probe carries half its mean photon number in each frequency bin. Each
 * bin returns Poisson-thinned through the sender's kit. Seeing both bins reads
 * as NoFilter; a single bin reads as the filter passing it; no photons leaves
 * a uniform guess. The inbound monitor tap adds Poisson(r * mean) photons to D3.
 */
ProbeResult probe_alice(const StrongProbe &probe, AliceChoice choice,
                        const AliceKitConfig &alice, Rng &rng);

/// Intensity reflectance of the sender's kit for light in one frequency bin.
double kit_reflectance(AliceChoice choice, const AliceKitConfig &alice,
                       FrequencyBin freq);

/// Mean number of reflected photons in `freq` when `mean_in` photons per bin
/// reach the sender.
double reflected_mean_photons(AliceChoice choice, const AliceKitConfig &alice,
                              FrequencyBin freq, double mean_in);

/// Poisson draw of the reflected photons in one bin.
int sample_reflected_photons(AliceChoice choice, const AliceKitConfig &alice,
                             FrequencyBin freq, double mean_in, Rng &rng);

/// Welch two-sample z statistic for mean(a) - mean(b).
/// Returns 0 when both samples have zero variance and equal means.
double two_sample_mean_z(std::span<const int> a, std::span<const int> b);

} // namespace freqkd
