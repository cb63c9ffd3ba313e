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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "freqkd/protocol.hpp"
#include "freqkd/rng.hpp"

namespace freqkd {

// One-to-any distribution over a passive branch network. The hub hosts the
// only source, modulator and detector pair; every leaf hosts a filter kit
// with a Faraday mirror. A photon reaches exactly one leaf, and the hub tells
// leaves apart by round-trip time.

struct Leaf {
    int id = 0;
    int roundTripBins = 0;
    double splitterWeight = 1.0;
};

struct Topology {
    std::vector<Leaf> leaves;
    int timingResolutionBins = 1;
};

class TopologyError : public std::invalid_argument {
  public:
    enum class Kind { EmptyTopology, DuplicateRange, InvalidLeaf };

    TopologyError(Kind kind, const std::string &what)
        : std::invalid_argument(what), kind_(kind) {}

    [[nodiscard]] Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

/// Throws TopologyError unless every pair of leaves is at least
/// timingResolutionBins apart, ids are unique and weights form a distribution.
void validate_topology(const Topology &t);

/// Leaf id reached by one photon, drawn in proportion to splitterWeight.
int route_pulse(const Topology &t, Rng &rng);

/// The unique leaf whose round trip lies strictly within the timing
/// resolution of `arrival_bin`; empty if none or several match.
std::optional<int> identify_receiver(std::int64_t arrival_bin, const Topology &t);

struct LeafResult {
    std::uint64_t pulses = 0;
    SessionOutcome outcome;
};

struct NetworkSessionResult {
    Transcript transcript;
    std::map<int, LeafResult> perLeaf;
    std::uint64_t unidentifiedCount = 0;

    [[nodiscard]] bool any_alarm() const;
};

NetworkSessionResult run_network_session(const SessionParams &p, const Topology &t);

/// Groups a network transcript by identified leaf and evaluates each group.
NetworkSessionResult evaluate_network(Transcript transcript, const Topology &t);

} // namespace freqkd
