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
 * Session orchestration: the pulse loop, sifting into control / key /
 * discarded groups, the two eavesdropping alarms and sampled QBER.
 */

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "freqkd/adversary.hpp"
#include "freqkd/bench_types.hpp"
#include "freqkd/optics_bench.hpp"
#include "freqkd/rng.hpp"

namespace freqkd {

struct SessionParams {
    std::uint64_t numPulses = 100000;
    /// Indexed by AliceChoice.
    std::array<double, 3> aliceChoiceProbs{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    double bobOnProb = 0.5;
    BobKitConfig bob;
    AliceKitConfig alice;
    ChannelConfig channel;
    EveStrategy eve = NoEve{};
    std::uint64_t seed = 1;
    double disclosureFraction = 0.2;
    /// Emission spacing; must cover the filter switch settling time.
    int pulsePeriodBins = 1;
    int intensityWindow = 1000;
    double intensityK = 5.0;
    double interferenceSigmas = 3.0;
};

/// Throws std::invalid_argument naming the violated invariant.
void validate(const SessionParams &p);

struct Transcript {
    SessionParams params;
    std::vector<PulseRecord> records;
    EveLog eveLog;
};

/// Draws choices and settings and samples every pulse. Pulse i uses rng
/// streams keyed by i only, so the transcript does not depend on evaluation
/// order.
Transcript run_session(const SessionParams &p);

AliceChoice draw_choice(const std::array<double, 3> &probs, Rng &rng);
BobSetting draw_setting(double on_prob, Rng &rng);

struct SiftResult {
    std::vector<std::uint8_t> keyAlice;
    std::vector<std::uint8_t> keyBob;
    /// Control group: NoFilter with the modulator on.
    std::uint64_t group1D1 = 0;
    std::uint64_t group1D2 = 0;
    /// Key group size before any disclosure.
    std::uint64_t group2Count = 0;
    std::uint64_t group3Count = 0;
    std::uint64_t noClickCount = 0;
    std::uint64_t noFilterOffCount = 0;
    std::uint64_t doubleClickCount = 0;
    std::uint64_t numPulses = 0;

    [[nodiscard]] std::uint64_t group1Count() const { return group1D1 + group1D2; }
};

SiftResult sift(std::span<const PulseRecord> records);

struct InterferenceAlarm {
    bool alarm = false;
    /// Control group empty: no decision possible.
    bool indeterminate = false;
    double d2Fraction = 0.0;
    double expectedFraction = 0.0;
    double threshold = 0.0;
    std::uint64_t groupSize = 0;
};

/// Alarm iff the control-group D2 fraction exceeds `expected_fraction` by
/// more than `sigmas` binomial standard deviations.
InterferenceAlarm interference_alarm(const SiftResult &s, double expected_fraction,
                                     double sigmas = 3.0);

/// D2 share of clicks in the control group for an honest channel.
double expected_control_d2_fraction(const BobKitConfig &bob, const AliceKitConfig &alice,
                                    const ChannelConfig &ch);

InterferenceAlarm interference_alarm(const SiftResult &s, const SessionParams &p);

struct IntensityAlarm {
    bool alarm = false;
    /// No monitor tap: the alarm can never fire.
    bool blind = false;
    double baselineMean = 0.0;
    double maxWindowMean = 0.0;
    std::uint64_t windows = 0;
    std::uint64_t alarmedWindows = 0;
    std::uint64_t totalD3 = 0;
};

/// Splits the records into consecutive windows of `window` pulses (the last
/// one may be shorter) and raises the alarm if any window's mean D3 count
/// exceeds `baseline` by more than k * sqrt(baseline / n).
IntensityAlarm intensity_alarm(std::span<const PulseRecord> records, double baseline,
                               bool blind, int window, double k);

IntensityAlarm intensity_alarm(const Transcript &t, int window, double k);

/// Expected clean D3 count per pulse for the configured kit and choice mix.
double baseline_d3_mean(const SessionParams &p);

struct QberEstimate {
    double qber = 0.0;
    std::uint64_t disclosed = 0;
    std::uint64_t errors = 0;
    bool emptyKey = false;
};

/// Discloses ceil(f * len) random key positions, removes them from both keys
/// and returns the mismatch fraction among them.
QberEstimate qber_estimate(SiftResult &s, double f, Rng &rng);

struct AlarmReport {
    InterferenceAlarm interference;
    IntensityAlarm intensity;
    QberEstimate qber;

    [[nodiscard]] bool any() const { return interference.alarm || intensity.alarm; }
};

struct SessionOutcome {
    SiftResult sift;
    AlarmReport alarms;
};

/// Sifting, alarms and disclosure for one receiver's records. `stream` keys
/// the disclosure rng so separate receivers draw independent positions.
SessionOutcome evaluate_session(std::span<const PulseRecord> records,
                                const SessionParams &p, std::uint64_t stream);

} // namespace freqkd
