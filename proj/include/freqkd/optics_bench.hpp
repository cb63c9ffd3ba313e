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
 * The one-to-one round trip assembled from mode-engine components.
 *
 * Receiver kit (forward): the source photon enters the modulator on the D1
 * port. The undiffracted Base wave goes to the short arm; the diffracted
 * Shifted wave goes to the long arm, is delayed, rotated to V and reflected
 * onto the channel by the polarizing splitter.
 *
 * Sender kit: monitor tap, optional filter, Faraday mirror (polarization
 * flip), filter again, optional attenuator, monitor tap again.
 *
 * Receiver kit (return): the splitter sends V light (Base) into the long arm
 * and H light (Shifted) into the short arm, so both components arrive at the
 * modulator in the same time bin. With the modulator on they interfere; with
 * it off the long arm feeds D1 and the short arm feeds D2.
 */

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "freqkd/adversary.hpp"
#include "freqkd/bench_types.hpp"
#include "freqkd/mode_engine.hpp"
#include "freqkd/rng.hpp"

namespace freqkd {

/// State on the channel as it reaches the sender.
PureState forward_pass(const BobKitConfig &bob, const ChannelConfig &ch);

struct AliceOutput {
    PureState reflected;
    /// Photon probability diverted to the monitor over both tap traversals.
    double d3Expected = 0.0;
};

AliceOutput alice_transform(const PureState &s, AliceChoice choice,
                            const AliceKitConfig &alice);

/// Loss and delay of the return trip through the channel.
PureState channel_return(const PureState &s, const ChannelConfig &ch);

/// State on the detector ports. Throws std::logic_error if the two arms
/// would reach the modulator in different time bins.
PureState return_state(const PureState &s, const BobKitConfig &bob,
                       BobSetting setting);

/// Exact single-photon readout of the return pass.
OutcomeDistribution return_pass(const PureState &s, const BobKitConfig &bob,
                                BobSetting setting);

/// Where a single photon ends up, before detector efficiency.
struct PhotonFates {
    double d1 = 0.0;
    double d2 = 0.0;
    double monitor = 0.0;
    double lost = 1.0;
};

/// Click statistics of a pulse whose photons independently follow `fates`.
OutcomeDistribution click_distribution(const PhotonFates &fates, const Source &source,
                                       const DetectorModel &d1, const DetectorModel &d2);

/// Per-photon fates averaged over the adversary's branches.
PhotonFates round_trip_fates(AliceChoice choice, BobSetting setting,
                             const BobKitConfig &bob, const AliceKitConfig &alice,
                             const ChannelConfig &ch, const EveStrategy &eve);

/// Exact outcome distribution of the full round trip (no sampling).
OutcomeDistribution round_trip_distribution(AliceChoice choice, BobSetting setting,
                                            const BobKitConfig &bob,
                                            const AliceKitConfig &alice,
                                            const ChannelConfig &ch,
                                            const EveStrategy &eve = NoEve{});

/// Bins between emission and the interfering arrival at the detectors.
int round_trip_bins(const BobKitConfig &bob, const ChannelConfig &ch);

/// Bob's bit for a single click with the modulator off.
std::optional<int> decoded_bit(BobSetting setting, ClickOutcome click);

/**
 * @brief Samples pulses for a fixed configuration.
 *
 * All optics are evaluated once at construction: for every adversary branch
 * on each leg and every (choice, setting) the exact photon fates are cached.
 * Sampling then only draws branch indices, photon numbers and clicks, so the
 * object is immutable and can be shared by threads that own separate rngs.
 */
class PulseSimulator {
  public:
    PulseSimulator(BobKitConfig bob, AliceKitConfig alice, ChannelConfig ch,
                   EveStrategy eve);

    PulseRecord sample(std::uint64_t index, std::int64_t emit_bin, AliceChoice choice,
                       BobSetting setting, Rng &rng, EveLogEntry *log = nullptr) const;

    [[nodiscard]] PhotonFates fates(AliceChoice choice, BobSetting setting) const;
    [[nodiscard]] OutcomeDistribution exact(AliceChoice choice,
                                            BobSetting setting) const;

    /// Expected D3 count per pulse without any probe, averaged over `choice_probs`.
    [[nodiscard]] double
    baseline_d3_mean(const std::array<double, 3> &choice_probs) const;

    [[nodiscard]] int round_trip() const { return round_trip_; }

    [[nodiscard]] const BobKitConfig &bob() const { return bob_; }
    [[nodiscard]] const AliceKitConfig &alice() const { return alice_; }
    [[nodiscard]] const ChannelConfig &channel() const { return channel_; }
    [[nodiscard]] const EveStrategy &eve() const { return eve_; }

  private:
    struct ReturnBranch {
        double probability;
        EveLogEntry log;
        std::array<PhotonFates, 2> fates; // by setting
        double tapProbability;
    };
    struct ForwardBranch {
        double probability;
        EveLogEntry log;
        std::array<std::vector<ReturnBranch>, 3> returns; // by choice
    };

    BobKitConfig bob_;
    AliceKitConfig alice_;
    ChannelConfig channel_;
    EveStrategy eve_;
    int round_trip_ = 0;
    std::vector<ForwardBranch> tree_;
};

/// Samples one pulse. Convenience wrapper that builds a PulseSimulator.
PulseRecord sample_pulse(std::uint64_t index, AliceChoice choice, BobSetting setting,
                         const BobKitConfig &bob, const AliceKitConfig &alice,
                         const ChannelConfig &ch, const EveStrategy &eve, Rng &rng);

} // namespace freqkd
