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

#include "freqkd/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

namespace freqkd {

void validate_topology(const Topology &t) {
    using Kind = TopologyError::Kind;
    if (t.leaves.empty()) {
        throw TopologyError(Kind::EmptyTopology, "topology has no leaves");
    }
    if (t.timingResolutionBins < 1) {
        throw TopologyError(Kind::InvalidLeaf, "timingResolutionBins must be >= 1");
    }
    std::set<int> ids;
    double total = 0.0;
    for (const auto &leaf : t.leaves) {
        if (!ids.insert(leaf.id).second) {
            throw TopologyError(Kind::InvalidLeaf,
                                "duplicate leaf id " + std::to_string(leaf.id));
        }
        if (leaf.id < 0) {
            throw TopologyError(Kind::InvalidLeaf, "leaf ids must be >= 0");
        }
        if (leaf.roundTripBins < 0) {
            throw TopologyError(Kind::InvalidLeaf, "roundTripBins must be >= 0");
        }
        if (!(leaf.splitterWeight >= 0.0) || !std::isfinite(leaf.splitterWeight)) {
            throw TopologyError(Kind::InvalidLeaf, "splitterWeight must be >= 0");
        }
        total += leaf.splitterWeight;
    }
    if (!(total > 0.0)) {
        throw TopologyError(Kind::InvalidLeaf, "splitter weights must not all be zero");
    }
    for (std::size_t i = 0; i < t.leaves.size(); ++i) {
        for (std::size_t j = i + 1; j < t.leaves.size(); ++j) {
            const int gap = std::abs(t.leaves[i].roundTripBins - t.leaves[j].roundTripBins);
            if (gap < t.timingResolutionBins) {
                throw TopologyError(
                    Kind::DuplicateRange,
                    "leaves " + std::to_string(t.leaves[i].id) + " and " +
                        std::to_string(t.leaves[j].id) +
                        " are closer than the timing resolution "
                        "(round-trip ranges must be distinct)");
            }
        }
    }
}

int route_pulse(const Topology &t, Rng &rng) {
    double total = 0.0;
    for (const auto &leaf : t.leaves) {
        total += leaf.splitterWeight;
    }
    double u = uniform01(rng) * total;
    for (const auto &leaf : t.leaves) {
        if (u < leaf.splitterWeight) {
            return leaf.id;
        }
        u -= leaf.splitterWeight;
    }
    for (auto it = t.leaves.rbegin(); it != t.leaves.rend(); ++it) {
        if (it->splitterWeight > 0.0) {
            return it->id;
        }
    }
    return t.leaves.back().id;
}

std::optional<int> identify_receiver(std::int64_t arrival_bin, const Topology &t) {
    std::optional<int> found;
    for (const auto &leaf : t.leaves) {
        const std::int64_t gap = arrival_bin - leaf.roundTripBins;
        if (std::abs(gap) < t.timingResolutionBins) {
            if (found) {
                return std::nullopt;
            }
            found = leaf.id;
        }
    }
    return found;
}

bool NetworkSessionResult::any_alarm() const {
    return std::any_of(perLeaf.begin(), perLeaf.end(),
                       [](const auto &kv) { return kv.second.outcome.alarms.any(); });
}

NetworkSessionResult run_network_session(const SessionParams &p, const Topology &t) {
    validate(p);
    validate_topology(t);
    const PulseSimulator sim(p.bob, p.alice, p.channel, p.eve);

    std::map<int, int> round_trip;
    for (const auto &leaf : t.leaves) {
        round_trip[leaf.id] = leaf.roundTripBins;
    }

    Transcript tr;
    tr.params = p;
    tr.records.resize(p.numPulses);
    tr.eveLog.resize(p.numPulses);
    Rng routing = make_stream(p.seed, StreamTag::Routing);
    for (std::uint64_t i = 0; i < p.numPulses; ++i) {
        const int leaf = route_pulse(t, routing);
        Rng choice_rng = make_stream(p.seed, StreamTag::LeafChoice,
                                     static_cast<std::uint64_t>(leaf), i);
        Rng setting_rng = make_stream(p.seed, StreamTag::BobSetting, i);
        Rng physics_rng = make_stream(p.seed, StreamTag::Physics, i);
        const AliceChoice choice = draw_choice(p.aliceChoiceProbs, choice_rng);
        const BobSetting setting = draw_setting(p.bobOnProb, setting_rng);
        const auto emit = static_cast<std::int64_t>(i) * p.pulsePeriodBins;

        PulseRecord rec = sim.sample(i, emit, choice, setting, physics_rng, &tr.eveLog[i]);
        rec.returnBin = emit + round_trip[leaf];
        rec.leafId = identify_receiver(rec.returnBin - rec.emitBin, t);
        tr.records[i] = rec;
    }
    return evaluate_network(std::move(tr), t);
}

NetworkSessionResult evaluate_network(Transcript transcript, const Topology &t) {
    NetworkSessionResult out;
    std::map<int, std::vector<PulseRecord>> groups;
    for (const auto &leaf : t.leaves) {
        groups[leaf.id];
    }
    for (const auto &rec : transcript.records) {
        if (rec.leafId) {
            groups[*rec.leafId].push_back(rec);
        } else {
            ++out.unidentifiedCount;
        }
    }
    for (auto &[id, records] : groups) {
        LeafResult lr;
        lr.pulses = records.size();
        lr.outcome = evaluate_session(records, transcript.params,
                                      static_cast<std::uint64_t>(id) + 1);
        out.perLeaf.emplace(id, std::move(lr));
    }
    out.transcript = std::move(transcript);
    return out;
}

} // namespace freqkd
