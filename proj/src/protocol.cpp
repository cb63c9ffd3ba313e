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

#include "freqkd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "freqkd/numfmt.hpp"

namespace freqkd {

void validate(const SessionParams &p) {
    if (p.numPulses < 1) {
        throw std::invalid_argument("numPulses must be >= 1");
    }
    double sum = 0.0;
    for (double q : p.aliceChoiceProbs) {
        if (!(q >= 0.0 && q <= 1.0)) {
            throw std::invalid_argument("aliceChoiceProbs entries must lie in [0, 1]");
        }
        sum += q;
    }
    if (std::abs(sum - 1.0) > kTolerance) {
        throw std::invalid_argument("aliceChoiceProbs: probabilities sum to 1 required, got " +
                                    format_number(sum));
    }
    if (!(p.bobOnProb >= 0.0 && p.bobOnProb <= 1.0)) {
        throw std::invalid_argument("bobOnProb must lie in [0, 1]");
    }
    if (!(p.disclosureFraction >= 0.0 && p.disclosureFraction <= 1.0)) {
        throw std::invalid_argument("disclosureFraction must lie in [0, 1]");
    }
    if (p.pulsePeriodBins < 1) {
        throw std::invalid_argument("pulsePeriodBins must be >= 1");
    }
    if (p.pulsePeriodBins < p.alice.switchSettlingBins) {
        throw std::invalid_argument(
            "pulsePeriodBins must cover alice.switchSettlingBins (filter switch rate cap)");
    }
    if (p.intensityWindow < 1) {
        throw std::invalid_argument("intensityWindow must be >= 1");
    }
    if (!(p.intensityK > 0.0) || !(p.interferenceSigmas > 0.0)) {
        throw std::invalid_argument("alarm thresholds must be > 0");
    }
    validate(p.bob);
    validate(p.alice);
    validate(p.channel);
    validate(p.eve);
}

AliceChoice draw_choice(const std::array<double, 3> &probs, Rng &rng) {
    double u = uniform01(rng);
    for (AliceChoice c : kAllChoices) {
        const double q = probs[static_cast<std::size_t>(c)];
        if (u < q) {
            return c;
        }
        u -= q;
    }
    // Rounding slack lands on the last choice with nonzero probability.
    for (auto it = kAllChoices.rbegin(); it != kAllChoices.rend(); ++it) {
        if (probs[static_cast<std::size_t>(*it)] > 0.0) {
            return *it;
        }
    }
    return AliceChoice::NoFilter;
}

BobSetting draw_setting(double on_prob, Rng &rng) {
    return uniform01(rng) < on_prob ? BobSetting::AomOn : BobSetting::AomOff;
}

Transcript run_session(const SessionParams &p) {
    validate(p);
    const PulseSimulator sim(p.bob, p.alice, p.channel, p.eve);
    Transcript t;
    t.params = p;
    t.records.resize(p.numPulses);
    t.eveLog.resize(p.numPulses);
    for (std::uint64_t i = 0; i < p.numPulses; ++i) {
        Rng choice_rng = make_stream(p.seed, StreamTag::AliceChoice, i);
        Rng setting_rng = make_stream(p.seed, StreamTag::BobSetting, i);
        Rng physics_rng = make_stream(p.seed, StreamTag::Physics, i);
        const AliceChoice choice = draw_choice(p.aliceChoiceProbs, choice_rng);
        const BobSetting setting = draw_setting(p.bobOnProb, setting_rng);
        const auto emit = static_cast<std::int64_t>(i) * p.pulsePeriodBins;
        t.records[i] = sim.sample(i, emit, choice, setting, physics_rng, &t.eveLog[i]);
    }
    return t;
}

SiftResult sift(std::span<const PulseRecord> records) {
    SiftResult s;
    s.numPulses = records.size();
    for (const auto &r : records) {
        if (r.click == ClickOutcome::None) {
            ++s.noClickCount;
            continue;
        }
        if (r.click == ClickOutcome::Double) {
            ++s.doubleClickCount;
            continue;
        }
        const bool filtered = r.choice != AliceChoice::NoFilter;
        if (!filtered && r.setting == BobSetting::AomOn) {
            (r.click == ClickOutcome::D1 ? s.group1D1 : s.group1D2) += 1;
        } else if (filtered && r.setting == BobSetting::AomOff) {
            ++s.group2Count;
            s.keyAlice.push_back(static_cast<std::uint8_t>(*intended_bit(r.choice)));
            s.keyBob.push_back(r.click == ClickOutcome::D1 ? 0 : 1);
        } else if (filtered) {
            ++s.group3Count;
        } else {
            ++s.noFilterOffCount;
        }
    }
    return s;
}

InterferenceAlarm interference_alarm(const SiftResult &s, double expected_fraction,
                                     double sigmas) {
    InterferenceAlarm a;
    a.expectedFraction = expected_fraction;
    a.groupSize = s.group1Count();
    if (a.groupSize == 0) {
        a.indeterminate = true;
        return a;
    }
    const double n = static_cast<double>(a.groupSize);
    a.d2Fraction = static_cast<double>(s.group1D2) / n;
    const double p0 = expected_fraction;
    a.threshold = p0 + sigmas * std::sqrt(p0 * (1.0 - p0) / n);
    a.alarm = a.d2Fraction > a.threshold;
    return a;
}

double expected_control_d2_fraction(const BobKitConfig &bob, const AliceKitConfig &alice,
                                    const ChannelConfig &ch) {
    const OutcomeDistribution d =
        round_trip_distribution(AliceChoice::NoFilter, BobSetting::AomOn, bob, alice, ch);
    const double clicks = d.pD1 + d.pD2;
    return clicks > 0.0 ? d.pD2 / clicks : 0.0;
}

InterferenceAlarm interference_alarm(const SiftResult &s, const SessionParams &p) {
    return interference_alarm(s, expected_control_d2_fraction(p.bob, p.alice, p.channel),
                              p.interferenceSigmas);
}

double baseline_d3_mean(const SessionParams &p) {
    return PulseSimulator(p.bob, p.alice, p.channel, NoEve{})
        .baseline_d3_mean(p.aliceChoiceProbs);
}

IntensityAlarm intensity_alarm(std::span<const PulseRecord> records, double baseline,
                               bool blind, int window, double k) {
    if (window < 1) {
        throw std::invalid_argument("intensity window must be >= 1");
    }
    IntensityAlarm a;
    a.blind = blind;
    a.baselineMean = baseline;
    const auto w = static_cast<std::size_t>(window);
    for (std::size_t start = 0; start < records.size(); start += w) {
        const std::size_t end = std::min(records.size(), start + w);
        std::uint64_t count = 0;
        for (std::size_t i = start; i < end; ++i) {
            count += static_cast<std::uint64_t>(records[i].d3Photons);
        }
        a.totalD3 += count;
        const double n = static_cast<double>(end - start);
        const double mean = static_cast<double>(count) / n;
        a.maxWindowMean = std::max(a.maxWindowMean, mean);
        ++a.windows;
        if (!blind && mean > baseline + k * std::sqrt(baseline / n)) {
            ++a.alarmedWindows;
        }
    }
    a.alarm = a.alarmedWindows > 0;
    return a;
}

IntensityAlarm intensity_alarm(const Transcript &t, int window, double k) {
    return intensity_alarm(t.records, baseline_d3_mean(t.params),
                           t.params.alice.tapRatio == 0.0, window, k);
}

QberEstimate qber_estimate(SiftResult &s, double f, Rng &rng) {
    if (!(f >= 0.0 && f <= 1.0)) {
        throw std::invalid_argument("disclosure fraction must lie in [0, 1]");
    }
    QberEstimate q;
    const std::size_t len = s.keyAlice.size();
    if (len == 0) {
        q.emptyKey = true;
        return q;
    }
    const auto count =
        std::min(len, static_cast<std::size_t>(std::ceil(f * static_cast<double>(len))));
    // Partial Fisher-Yates: the first `count` slots become the disclosed set.
    std::vector<std::size_t> order(len);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, len - 1);
        std::swap(order[i], order[pick(rng)]);
    }
    std::vector<bool> disclosed(len, false);
    for (std::size_t i = 0; i < count; ++i) {
        disclosed[order[i]] = true;
        if (s.keyAlice[order[i]] != s.keyBob[order[i]]) {
            ++q.errors;
        }
    }
    q.disclosed = count;
    q.qber = count > 0 ? static_cast<double>(q.errors) / static_cast<double>(count) : 0.0;

    std::vector<std::uint8_t> keep_a;
    std::vector<std::uint8_t> keep_b;
    keep_a.reserve(len - count);
    keep_b.reserve(len - count);
    for (std::size_t i = 0; i < len; ++i) {
        if (!disclosed[i]) {
            keep_a.push_back(s.keyAlice[i]);
            keep_b.push_back(s.keyBob[i]);
        }
    }
    s.keyAlice = std::move(keep_a);
    s.keyBob = std::move(keep_b);
    return q;
}

SessionOutcome evaluate_session(std::span<const PulseRecord> records,
                                const SessionParams &p, std::uint64_t stream) {
    SessionOutcome out;
    out.sift = sift(records);
    out.alarms.interference = interference_alarm(out.sift, p);
    out.alarms.intensity = intensity_alarm(records, baseline_d3_mean(p),
                                           p.alice.tapRatio == 0.0, p.intensityWindow,
                                           p.intensityK);
    Rng disclosure = make_stream(p.seed, StreamTag::Disclosure, stream);
    out.alarms.qber = qber_estimate(out.sift, p.disclosureFraction, disclosure);
    return out;
}

} // namespace freqkd
