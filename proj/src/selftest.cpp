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

#include "freqkd/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "freqkd/network.hpp"
#include "freqkd/optics_bench.hpp"
#include "freqkd/protocol.hpp"

namespace freqkd {

namespace {

struct Expected {
    AliceChoice choice;
    BobSetting setting;
    double pD1, pD2, pNone;
};

constexpr Expected kCanonical[] = {
    {AliceChoice::NoFilter, BobSetting::AomOn, 1.0, 0.0, 0.0},
    {AliceChoice::NoFilter, BobSetting::AomOff, 0.5, 0.5, 0.0},
    {AliceChoice::FilterOmega, BobSetting::AomOn, 0.25, 0.25, 0.5},
    {AliceChoice::FilterOmega, BobSetting::AomOff, 0.5, 0.0, 0.5},
    {AliceChoice::FilterOmegaDelta, BobSetting::AomOn, 0.25, 0.25, 0.5},
    {AliceChoice::FilterOmegaDelta, BobSetting::AomOff, 0.0, 0.5, 0.5},
};

std::string fmt3(double a, double b, double c) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.6f / %.6f / %.6f", a, b, c);
    return buf;
}

PureState random_state(Rng &rng) {
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> path(0, 2);
    PureState s;
    for (int i = 0; i < 4; ++i) {
        const ModeLabel m{i % 2 == 0 ? FrequencyBin::Base : FrequencyBin::Shifted,
                          static_cast<Path>(path(rng)), i / 2,
                          i % 3 == 0 ? Polarization::H : Polarization::V};
        s.add(m, {g(rng), g(rng)});
    }
    return s.scaled(1.0 / s.norm());
}

} // namespace

std::vector<SelftestCheck> run_selftest(const SelftestHooks &hooks) {
    std::vector<SelftestCheck> checks;

    BobKitConfig bob;
    bob.source = SinglePhoton{};
    bob.aomPhase = hooks.aomPhase;
    const AliceKitConfig alice;
    const ChannelConfig ch;

    for (const auto &row : kCanonical) {
        const auto d = round_trip_distribution(row.choice, row.setting, bob, alice, ch);
        const bool ok = std::abs(d.pD1 - row.pD1) <= kTolerance &&
                        std::abs(d.pD2 - row.pD2) <= kTolerance &&
                        std::abs(d.pNone - row.pNone) <= kTolerance;
        checks.push_back({"canonical-table (" + std::string(to_string(row.choice)) + ", " +
                              std::string(to_string(row.setting)) + ")",
                          ok,
                          "got " + fmt3(d.pD1, d.pD2, d.pNone) + ", expected " +
                              fmt3(row.pD1, row.pD2, row.pNone)});
    }

    {
        Rng rng = make_stream(0x5e1f, StreamTag::Property);
        const LinearMap maps[] = {
            coupler_map(Path::LongArm, Path::ShortArm, {}, 0.7),
            shift_time_map(Path::LongArm, 3),
            relabel_map(Path::Channel, Path::Channel, true),
            tap_map(Path::Channel, Path::MonitorPort, 0.3),
        };
        double worst = 0.0;
        for (int trial = 0; trial < 200; ++trial) {
            const PureState s = random_state(rng);
            for (const auto &m : maps) {
                worst = std::max(worst, std::abs(apply_map(m, s).norm() - s.norm()));
            }
        }
        checks.push_back({"unitarity", worst <= kTolerance,
                          "max norm drift " + std::to_string(worst)});
    }

    {
        SessionParams p;
        p.numPulses = 4000;
        p.seed = 7;
        p.bob.source = WeakCoherent{0.5};
        p.bob.detD1.dark = hooks.darkProbability;
        p.bob.detD2.dark = hooks.darkProbability;
        const Transcript t = run_session(p);
        const SiftResult s = sift(t.records);
        const std::uint64_t total = s.group1Count() + s.group2Count + s.group3Count +
                                    s.noClickCount + s.noFilterOffCount +
                                    s.doubleClickCount;
        checks.push_back({"partition", total == p.numPulses,
                          std::to_string(total) + " of " + std::to_string(p.numPulses) +
                              " pulses accounted, " + std::to_string(s.doubleClickCount) +
                              " double clicks"});
    }

    {
        SessionParams p;
        p.numPulses = 4000;
        p.seed = 11;
        p.bob = bob;
        const Transcript t = run_session(p);
        const SiftResult s = sift(t.records);
        checks.push_back({"key-agreement", s.keyAlice == s.keyBob && s.group1D2 == 0,
                          std::to_string(s.keyAlice.size()) + " sifted bits, " +
                              std::to_string(s.group1D2) + " control-group D2 clicks"});
    }

    {
        Topology topo;
        topo.timingResolutionBins = 5;
        for (int i = 0; i < 8; ++i) {
            topo.leaves.push_back({i, 10 * (i + 1), 1.0});
        }
        bool ok = true;
        try {
            validate_topology(topo);
            Rng rng = make_stream(3, StreamTag::Routing);
            for (int i = 0; i < 2000 && ok; ++i) {
                const int leaf = route_pulse(topo, rng);
                const auto it = std::find_if(topo.leaves.begin(), topo.leaves.end(),
                                             [&](const Leaf &l) { return l.id == leaf; });
                ok = identify_receiver(it->roundTripBins, topo) == leaf;
            }
        } catch (const std::exception &) {
            ok = false;
        }
        checks.push_back({"network-bijection", ok, "8 leaves, 2000 routed pulses"});
    }
    return checks;
}

} // namespace freqkd
