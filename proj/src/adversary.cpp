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

#include "freqkd/adversary.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "freqkd/numfmt.hpp"
#include "freqkd/optics_bench.hpp"

namespace freqkd {

namespace {

bool leg_matches(AttackLocation location, Leg leg) {
    switch (location) {
    case AttackLocation::Both:
        return true;
    case AttackLocation::Forward:
        return leg == Leg::Forward;
    case AttackLocation::Return:
        return leg == Leg::Return;
    }
    return false;
}

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.emplace_back(trim(std::string_view(text).substr(start, pos - start)));
        if (pos == std::string::npos) {
            break;
        }
        start = pos + 1;
    }
    return parts;
}

} // namespace

void validate(const EveStrategy &eve) {
    if (const auto *ir = std::get_if<InterceptResendFreq>(&eve)) {
        if (!(ir->probability >= 0.0 && ir->probability <= 1.0)) {
            throw std::invalid_argument("intercept probability must lie in [0, 1]");
        }
    } else if (const auto *tap = std::get_if<PassiveTap>(&eve)) {
        if (!(tap->reflectivity >= 0.0 && tap->reflectivity < 1.0)) {
            throw std::invalid_argument("tap reflectivity must lie in [0, 1)");
        }
    } else if (const auto *probe = std::get_if<StrongProbe>(&eve)) {
        if (!(probe->meanPhotons > 0.0)) {
            throw std::invalid_argument("probe mean photon number must be > 0");
        }
    }
}

EveStrategy parse_eve(const std::string &spec) {
    const auto parts = split(spec, ':');
    const std::string &kind = parts.front();
    EveStrategy eve;
    if (kind == "none" && parts.size() == 1) {
        eve = NoEve{};
    } else if (kind == "intercept" && parts.size() == 3) {
        InterceptResendFreq ir;
        if (parts[1] == "forward") {
            ir.location = AttackLocation::Forward;
        } else if (parts[1] == "return") {
            ir.location = AttackLocation::Return;
        } else if (parts[1] == "both") {
            ir.location = AttackLocation::Both;
        } else {
            throw std::invalid_argument("unknown attack location '" + parts[1] + "'");
        }
        ir.probability = parse_double(parts[2]);
        eve = ir;
    } else if (kind == "tap" && parts.size() == 2) {
        eve = PassiveTap{parse_double(parts[1])};
    } else if (kind == "probe" && parts.size() == 2) {
        eve = StrongProbe{parse_double(parts[1])};
    } else {
        throw std::invalid_argument("malformed eve spec '" + spec +
                                    "' (expected none, intercept:<leg>:<p>, "
                                    "tap:<q> or probe:<mean>)");
    }
    validate(eve);
    return eve;
}

std::string format_eve(const EveStrategy &eve) {
    if (const auto *ir = std::get_if<InterceptResendFreq>(&eve)) {
        const char *loc = ir->location == AttackLocation::Forward  ? "forward"
                          : ir->location == AttackLocation::Return ? "return"
                                                                   : "both";
        return std::string("intercept:") + loc + ":" + format_number(ir->probability);
    }
    if (const auto *tap = std::get_if<PassiveTap>(&eve)) {
        return "tap:" + format_number(tap->reflectivity);
    }
    if (const auto *probe = std::get_if<StrongProbe>(&eve)) {
        return "probe:" + format_number(probe->meanPhotons);
    }
    return "none";
}

std::vector<AttackBranch> attack_branches(const PureState &s, const EveStrategy &eve,
                                          Leg leg) {
    if (const auto *ir = std::get_if<InterceptResendFreq>(&eve)) {
        const double total = s.norm_squared();
        if (!leg_matches(ir->location, leg) || ir->probability == 0.0 || total == 0.0) {
            return {AttackBranch{1.0, s, {}}};
        }
        std::vector<AttackBranch> out;
        if (ir->probability < 1.0) {
            out.push_back(AttackBranch{1.0 - ir->probability, s, {}});
        }
        for (FrequencyBin f : {FrequencyBin::Base, FrequencyBin::Shifted}) {
            auto in_bin = [f](const ModeLabel &m) { return m.freq == f; };
            const double w = s.weight(in_bin);
            if (w == 0.0) {
                continue;
            }
            EveLogEntry log;
            log.attacked = true;
            log.measuredFreq = f;
            out.push_back(AttackBranch{ir->probability * w / total,
                                       s.restricted(in_bin).scaled(std::sqrt(total / w)),
                                       log});
        }
        return out;
    }
    if (const auto *tap = std::get_if<PassiveTap>(&eve)) {
        if (leg != Leg::Return) {
            return {AttackBranch{1.0, s, {}}};
        }
        EveLogEntry log;
        log.attacked = tap->reflectivity > 0.0;
        return {AttackBranch{1.0, s.scaled(std::sqrt(1.0 - tap->reflectivity)), log}};
    }
    // NoEve and StrongProbe leave the signal untouched.
    return {AttackBranch{1.0, s, {}}};
}

std::pair<PureState, EveLogEntry> attack_state(const PureState &s,
                                               const EveStrategy &eve, Leg leg,
                                               Rng &rng) {
    auto branches = attack_branches(s, eve, leg);
    std::size_t pick = branches.size() - 1;
    if (branches.size() > 1) {
        double u = uniform01(rng);
        for (std::size_t i = 0; i < branches.size(); ++i) {
            if (u < branches[i].probability) {
                pick = i;
                break;
            }
            u -= branches[i].probability;
        }
    }
    auto &chosen = branches[pick];
    if (const auto *tap = std::get_if<PassiveTap>(&eve); tap && leg == Leg::Return) {
        const double p_tapped = tap->reflectivity * s.norm_squared();
        chosen.log.tappedPhotons = uniform01(rng) < p_tapped ? 1 : 0;
    }
    return {std::move(chosen.state), chosen.log};
}

double kit_reflectance(AliceChoice choice, const AliceKitConfig &alice,
                       FrequencyBin freq) {
    const auto in = make_single_mode_state({freq, Path::Channel, 0, Polarization::H});
    return alice_transform(in, choice, alice).reflected.norm_squared();
}

double reflected_mean_photons(AliceChoice choice, const AliceKitConfig &alice,
                              FrequencyBin freq, double mean_in) {
    return mean_in * kit_reflectance(choice, alice, freq);
}

int sample_reflected_photons(AliceChoice choice, const AliceKitConfig &alice,
                             FrequencyBin freq, double mean_in, Rng &rng) {
    const double mean = reflected_mean_photons(choice, alice, freq, mean_in);
    if (mean <= 0.0) {
        return 0;
    }
    return std::poisson_distribution<int>(mean)(rng);
}

ProbeResult probe_alice(const StrongProbe &probe, AliceChoice choice,
                        const AliceKitConfig &alice, Rng &rng) {
    if (!(probe.meanPhotons > 0.0)) {
        throw std::invalid_argument("probe mean photon number must be > 0");
    }
    ProbeResult out;
    const double per_bin = probe.meanPhotons / 2.0;
    out.reflectedBase =
        sample_reflected_photons(choice, alice, FrequencyBin::Base, per_bin, rng);
    out.reflectedShifted =
        sample_reflected_photons(choice, alice, FrequencyBin::Shifted, per_bin, rng);
    const double tapped = alice.tapRatio * probe.meanPhotons;
    out.d3ExtraPhotons = tapped > 0.0 ? std::poisson_distribution<int>(tapped)(rng) : 0;

    if (out.reflectedBase > 0 && out.reflectedShifted > 0) {
        out.readout = AliceChoice::NoFilter;
    } else if (out.reflectedBase > 0) {
        out.readout = AliceChoice::FilterOmega;
    } else if (out.reflectedShifted > 0) {
        out.readout = AliceChoice::FilterOmegaDelta;
    } else {
        out.readout = kAllChoices[std::uniform_int_distribution<int>(0, 2)(rng)];
    }
    return out;
}

double two_sample_mean_z(std::span<const int> a, std::span<const int> b) {
    if (a.size() < 2 || b.size() < 2) {
        throw std::invalid_argument("two-sample test needs at least two values per sample");
    }
    auto moments = [](std::span<const int> x) {
        const double n = static_cast<double>(x.size());
        const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
        double ss = 0.0;
        for (int v : x) {
            ss += (v - mean) * (v - mean);
        }
        return std::pair{mean, ss / (n - 1.0) / n};
    };
    const auto [mean_a, var_a] = moments(a);
    const auto [mean_b, var_b] = moments(b);
    const double se = std::sqrt(var_a + var_b);
    if (se == 0.0) {
        if (mean_a == mean_b) {
            return 0.0;
        }
        return mean_a > mean_b ? HUGE_VAL : -HUGE_VAL;
    }
    return (mean_a - mean_b) / se;
}

} // namespace freqkd
