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

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "freqkd/mode_engine.hpp"
#include "test_support.hpp"

using namespace freqkd;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

ModeLabel mode(FrequencyBin f, Path p = Path::Channel, int t = 0,
               Polarization pol = Polarization::H) {
    return {f, p, t, pol};
}

PureState superposition() {
    PureState s;
    s.add(mode(FrequencyBin::Base), kInvSqrt2);
    s.add(mode(FrequencyBin::Shifted), kInvSqrt2);
    return s;
}

PureState random_state(Rng &rng, int terms) {
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> path(0, kPathCount - 1);
    std::uniform_int_distribution<int> time(0, 3);
    std::uniform_int_distribution<int> bit(0, 1);
    PureState s;
    for (int i = 0; i < terms; ++i) {
        s.add({static_cast<FrequencyBin>(bit(rng)), static_cast<Path>(path(rng)), time(rng),
               static_cast<Polarization>(bit(rng))},
              {g(rng), g(rng)});
    }
    return s.empty() ? s : s.scaled(1.0 / s.norm());
}

} // namespace

TEST(ModeEngine, SingleModeStateIsNormalized) {
    const auto s = make_single_mode_state(mode(FrequencyBin::Base));
    EXPECT_NEAR(s.norm_squared(), 1.0, kTolerance);
    EXPECT_NEAR(std::abs(overlap(s, s)), 1.0, kTolerance);
}

TEST(ModeEngine, InvalidLabelRejected) {
    EXPECT_THROW(make_single_mode_state({static_cast<FrequencyBin>(7), Path::Channel, 0,
                                         Polarization::H}),
                 std::invalid_argument);
    EXPECT_THROW(make_single_mode_state(mode(FrequencyBin::Base, Path::Channel, -1)),
                 std::invalid_argument);
}

TEST(ModeEngine, OverlapExamples) {
    const auto w = make_single_mode_state(mode(FrequencyBin::Base));
    const auto wd = make_single_mode_state(mode(FrequencyBin::Shifted));
    EXPECT_NEAR(std::abs(overlap(w, superposition()) - kInvSqrt2), 0.0, kTolerance);
    EXPECT_NEAR(std::abs(overlap(w, wd)), 0.0, kTolerance);
    EXPECT_NEAR(overlap(superposition(), superposition()).real(), 1.0, kTolerance);
}

TEST(ModeEngine, OverlapIsConjugateLinearInFirstArgument) {
    PureState a;
    a.add(mode(FrequencyBin::Base), Amplitude(0.0, 1.0));
    const auto b = make_single_mode_state(mode(FrequencyBin::Base));
    EXPECT_NEAR(std::abs(overlap(a, b) - Amplitude(0.0, -1.0)), 0.0, kTolerance);
}

TEST(ModeEngine, TooManyModesRejected) {
    PureState s;
    for (int t = 0; t < static_cast<int>(kMaxOccupiedModes); ++t) {
        s.add(mode(FrequencyBin::Base, Path::Channel, t), 0.1);
    }
    EXPECT_THROW(s.add(mode(FrequencyBin::Base, Path::Channel, 99), 0.1), std::length_error);
}

TEST(ModeEngine, IdentityLeavesStateUnchanged) {
    const auto s = superposition();
    const auto out = apply_map(LinearMap::identity(), s);
    EXPECT_NEAR(std::abs(overlap(out, s)), 1.0, kTolerance);
    EXPECT_EQ(out.size(), s.size());
}

TEST(ModeEngine, CouplerSplitsEvenly) {
    const auto m = coupler_map(Path::ShortArm, Path::LongArm, {FrequencyRule::preserve(),
                                                               FrequencyRule::preserve()});
    const auto out =
        apply_map(m, make_single_mode_state(mode(FrequencyBin::Base, Path::ShortArm)));
    EXPECT_NEAR(std::abs(out.amplitude(mode(FrequencyBin::Base, Path::ShortArm))), kInvSqrt2,
                kTolerance);
    EXPECT_NEAR(std::abs(out.amplitude(mode(FrequencyBin::Base, Path::LongArm))), kInvSqrt2,
                kTolerance);
    EXPECT_NEAR(out.norm_squared(), 1.0, kTolerance);
}

TEST(ModeEngine, CouplerRecombinesInPhaseInputs) {
    const CouplerFrequencyRule keep{FrequencyRule::preserve(), FrequencyRule::preserve()};
    PureState in;
    in.add(mode(FrequencyBin::Base, Path::ShortArm), kInvSqrt2);
    in.add(mode(FrequencyBin::Base, Path::LongArm), kInvSqrt2);
    const auto out = apply_map(coupler_map(Path::ShortArm, Path::LongArm, keep, 0.0), in);
    EXPECT_NEAR(std::abs(out.amplitude(mode(FrequencyBin::Base, Path::ShortArm))), 1.0,
                kTolerance);
    EXPECT_NEAR(std::abs(out.amplitude(mode(FrequencyBin::Base, Path::LongArm))), 0.0,
                kTolerance);
}

TEST(ModeEngine, CouplerMatchesDenseMatrix) {
    // Column j of (1/sqrt2)[[1, e^{i phi}], [e^{-i phi}, -1]].
    const double phi = 0.83;
    const CouplerFrequencyRule keep{FrequencyRule::preserve(), FrequencyRule::preserve()};
    const auto m = coupler_map(Path::ShortArm, Path::LongArm, keep, phi);
    const Amplitude dense[2][2] = {{kInvSqrt2, std::polar(kInvSqrt2, phi)},
                                   {std::polar(kInvSqrt2, -phi), -kInvSqrt2}};
    const Path ports[2] = {Path::ShortArm, Path::LongArm};
    for (int j = 0; j < 2; ++j) {
        const auto out = apply_map(m, make_single_mode_state(mode(FrequencyBin::Base, ports[j])));
        for (int i = 0; i < 2; ++i) {
            EXPECT_NEAR(std::abs(out.amplitude(mode(FrequencyBin::Base, ports[i])) - dense[i][j]),
                        0.0, kTolerance);
        }
    }
}

TEST(ModeEngine, CouplerFrequencyRuleShiftsDiffractedLeg) {
    const auto out = apply_map(coupler_map(Path::ShortArm, Path::LongArm),
                               make_single_mode_state(mode(FrequencyBin::Base, Path::ShortArm)));
    EXPECT_NEAR(std::norm(out.amplitude(mode(FrequencyBin::Base, Path::ShortArm))), 0.5,
                kTolerance);
    EXPECT_NEAR(std::norm(out.amplitude(mode(FrequencyBin::Shifted, Path::LongArm))), 0.5,
                kTolerance);
    // Frequency closure: every output label stays in the two-bin alphabet.
    for (const auto &t : out.terms()) {
        EXPECT_NO_THROW(validate(t.mode));
    }
}

TEST(ModeEngine, CouplerColumnsOrthonormal) {
    std::vector<ModeLabel> inputs;
    for (auto f : {FrequencyBin::Base, FrequencyBin::Shifted}) {
        for (auto p : {Path::ShortArm, Path::LongArm, Path::Channel}) {
            for (auto pol : {Polarization::H, Polarization::V}) {
                inputs.push_back(mode(f, p, 1, pol));
            }
        }
    }
    EXPECT_TRUE(columns_orthonormal(coupler_map(Path::ShortArm, Path::LongArm, {}, 1.1),
                                    inputs));
    EXPECT_FALSE(columns_orthonormal(projector_map(FrequencyBin::Base), inputs));
}

TEST(ModeEngine, ProjectorExamples) {
    const auto p = projector_map(FrequencyBin::Base, 1.0);
    const auto w = make_single_mode_state(mode(FrequencyBin::Base));
    EXPECT_NEAR(std::abs(overlap(apply_map(p, w), w)), 1.0, kTolerance);
    EXPECT_NEAR(apply_map(p, make_single_mode_state(mode(FrequencyBin::Shifted))).norm(), 0.0,
                kTolerance);
    EXPECT_NEAR(apply_map(p, superposition()).norm_squared(), 0.5, kTolerance);
}

TEST(ModeEngine, ProjectorTransmittanceScalesAmplitude) {
    const auto out = apply_map(projector_map(FrequencyBin::Base, 0.5),
                               make_single_mode_state(mode(FrequencyBin::Base)));
    EXPECT_NEAR(out.norm_squared(), 0.25, kTolerance);
    EXPECT_THROW(projector_map(FrequencyBin::Base, 1.5), std::invalid_argument);
}

TEST(ModeEngine, TimeShiftAndPolarizationFlip) {
    const auto s = make_single_mode_state(mode(FrequencyBin::Base, Path::LongArm));
    const auto same = apply_map(shift_time_map(Path::LongArm, 0), s);
    EXPECT_NEAR(std::abs(overlap(same, s)), 1.0, kTolerance);

    const auto shifted = apply_map(shift_time_map(Path::LongArm, 1), s);
    EXPECT_NEAR(std::abs(shifted.amplitude(mode(FrequencyBin::Base, Path::LongArm, 1))), 1.0,
                kTolerance);

    const auto flip = relabel_map(Path::LongArm, Path::LongArm, true);
    const auto once = apply_map(flip, s);
    EXPECT_NEAR(std::abs(once.amplitude(
                    mode(FrequencyBin::Base, Path::LongArm, 0, Polarization::V))),
                1.0, kTolerance);
    EXPECT_NEAR(std::abs(overlap(apply_map(flip, once), s)), 1.0, kTolerance);
}

TEST(ModeEngine, ComposeAppliesRightMapFirst) {
    const auto s = make_single_mode_state(mode(FrequencyBin::Base, Path::ShortArm));
    const auto f = relabel_map(Path::ShortArm, Path::LongArm, false);
    const auto g = shift_time_map(Path::ShortArm, 2);
    const auto out = apply_map(compose(f, g), s);
    EXPECT_NEAR(std::abs(out.amplitude(mode(FrequencyBin::Base, Path::LongArm, 2))), 1.0,
                kTolerance);
    const auto via_chain = apply_map(chain({g, f}), s);
    EXPECT_NEAR(std::abs(overlap(out, via_chain)), 1.0, kTolerance);
}

TEST(ModeEngine, RandomStatesProperties) {
    Rng rng = make_stream(42, StreamTag::Property);
    const std::vector<LinearMap> unitaries = {
        coupler_map(Path::ShortArm, Path::LongArm, {}, 0.3),
        coupler_map(Path::Det1Port, Path::Det2Port),
        shift_time_map(Path::Channel, 2),
        relabel_map(Path::ShortArm, Path::LongArm, true),
        tap_map(Path::Channel, Path::MonitorPort, 0.37),
    };
    const std::vector<LinearMap> contractions = {
        projector_map(FrequencyBin::Base, 0.8),
        projector_map(FrequencyBin::Shifted),
        attenuation_map(Path::Channel, 0.6),
    };
    for (int trial = 0; trial < 300; ++trial) {
        const PureState s = random_state(rng, 5);
        for (const auto &m : unitaries) {
            ASSERT_TRUE(m.isometry());
            EXPECT_NEAR(apply_map(m, s).norm(), s.norm(), kTolerance);
        }
        for (const auto &m : contractions) {
            EXPECT_LE(apply_map(m, s).norm(), s.norm() + kTolerance);
        }
        // Projector idempotence.
        const auto p = projector_map(FrequencyBin::Shifted);
        const auto once = apply_map(p, s);
        const auto twice = apply_map(p, once);
        EXPECT_NEAR(std::abs(overlap(once, once) - overlap(once, twice)), 0.0, kTolerance);
    }
}

TEST(ModeEngine, DistributionExamples) {
    const PortAssignment ports{{Path::Det1Port, DetectorPort::D1},
                               {Path::Det2Port, DetectorPort::D2}};
    const DetectorModel ideal;

    auto d = distribution(make_single_mode_state(mode(FrequencyBin::Base, Path::Det1Port)),
                          ports, ideal);
    EXPECT_NEAR(d.pD1, 1.0, kTolerance);
    EXPECT_NEAR(d.pD2, 0.0, kTolerance);
    EXPECT_NEAR(d.pNone, 0.0, kTolerance);

    PureState split;
    split.add(mode(FrequencyBin::Base, Path::Det1Port), kInvSqrt2);
    split.add(mode(FrequencyBin::Shifted, Path::Det2Port), kInvSqrt2);
    d = distribution(split, ports, ideal);
    EXPECT_NEAR(d.pD1, 0.5, kTolerance);
    EXPECT_NEAR(d.pD2, 0.5, kTolerance);
    EXPECT_NEAR(d.pNone, 0.0, kTolerance);

    d = distribution(PureState{}, ports, ideal);
    EXPECT_NEAR(d.pD1, 0.0, kTolerance);
    EXPECT_NEAR(d.pD2, 0.0, kTolerance);
    EXPECT_NEAR(d.pNone, 1.0, kTolerance);
}

TEST(ModeEngine, DistributionSumsToOneWithImperfectDetectors) {
    Rng rng = make_stream(5, StreamTag::Property);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = uniform01(rng);
        const double b = uniform01(rng) * (1.0 - a);
        const DetectorModel d1{uniform01(rng), 0.3 * uniform01(rng)};
        const DetectorModel d2{uniform01(rng), 0.3 * uniform01(rng)};
        const auto d = combine_single_photon(a, b, d1, d2);
        EXPECT_NEAR(d.pD1 + d.pD2 + d.pNone + d.pDouble, 1.0, 1e-12);
        EXPECT_GE(d.pD1, 0.0);
        EXPECT_GE(d.pD2, 0.0);
        EXPECT_GE(d.pNone, 0.0);
        EXPECT_GE(d.pDouble, 0.0);
    }
}

TEST(ModeEngine, DarkCountsProduceClicksOnVacuum) {
    const PortAssignment ports{{Path::Det1Port, DetectorPort::D1},
                               {Path::Det2Port, DetectorPort::D2}};
    const auto d = distribution(PureState{}, ports, DetectorModel{1.0, 0.1});
    EXPECT_NEAR(d.pD1, 0.09, kTolerance);
    EXPECT_NEAR(d.pD2, 0.09, kTolerance);
    EXPECT_NEAR(d.pDouble, 0.01, kTolerance);
    EXPECT_NEAR(d.pNone, 0.81, kTolerance);
}

TEST(ModeEngine, SampleDetectionExamples) {
    Rng rng = make_stream(1, StreamTag::Physics);
    OutcomeDistribution certain;
    certain.pD1 = 1.0;
    certain.pNone = 0.0;
    for (int i = 0; i < 1000; ++i) {
        ASSERT_EQ(sample_detection(certain, rng), ClickOutcome::D1);
    }

    OutcomeDistribution half;
    half.pD1 = 0.5;
    half.pD2 = 0.5;
    half.pNone = 0.0;
    constexpr std::uint64_t n = 100000;
    std::uint64_t d1 = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        d1 += sample_detection(half, rng) == ClickOutcome::D1 ? 1 : 0;
    }
    EXPECT_TRUE(freqkd::testing::within_binomial(d1, n, 0.5)) << d1;
}

TEST(ModeEngine, SampleDetectionIsSeedDeterministic) {
    OutcomeDistribution d;
    d.pD1 = 0.3;
    d.pD2 = 0.3;
    d.pDouble = 0.1;
    d.pNone = 0.3;
    Rng a = make_stream(9, StreamTag::Physics, 4);
    Rng b = make_stream(9, StreamTag::Physics, 4);
    for (int i = 0; i < 500; ++i) {
        ASSERT_EQ(sample_detection(d, a), sample_detection(d, b));
    }
}

TEST(ModeEngine, InvalidDetectorRejected) {
    EXPECT_THROW(validate(DetectorModel{1.2, 0.0}), std::invalid_argument);
    EXPECT_THROW(validate(DetectorModel{1.0, -0.1}), std::invalid_argument);
}
