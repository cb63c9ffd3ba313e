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
 * Discrete-mode single-photon states and linear-optical transfer maps.
 *
 * A photon is described by complex amplitudes over a small set of optical
 * modes. Each mode is labelled by frequency bin, spatial path, time bin and
 * polarization. Optical components are linear maps between modes; a map is
 * stored as a rule producing the output column for any input mode, so maps
 * compose without enumerating the (unbounded) time-bin domain.
 */

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "freqkd/rng.hpp"

namespace freqkd {

using Amplitude = std::complex<double>;

/// Slack used by every amplitude-exact comparison in the engine.
inline constexpr double kTolerance = 1e-12;

/// Upper bound on simultaneously occupied modes for one photon.
inline constexpr std::size_t kMaxOccupiedModes = 16;

/// Base is the optical carrier; Shifted is carrier plus the rf drive.
enum class FrequencyBin : std::uint8_t { Base = 0, Shifted = 1 };

enum class Path : std::uint8_t {
    Channel = 0,
    ShortArm,
    LongArm,
    Det1Port,
    Det2Port,
    MonitorPort,
    EvePort,
    Lost,
};
inline constexpr int kPathCount = 8;

enum class Polarization : std::uint8_t { H = 0, V = 1 };

std::string_view to_string(FrequencyBin f);
std::string_view to_string(Path p);
std::string_view to_string(Polarization p);

FrequencyBin other(FrequencyBin f);
Polarization flipped(Polarization p);

struct ModeLabel {
    FrequencyBin freq = FrequencyBin::Base;
    Path path = Path::Channel;
    /// Time bin in units of the interferometer arm delay.
    int time = 0;
    Polarization pol = Polarization::H;

    auto operator<=>(const ModeLabel &) const = default;
};

/// Throws std::invalid_argument if any field is outside its closed set.
void validate(const ModeLabel &label);

struct Term {
    ModeLabel mode;
    Amplitude amp;
};

/**
 * @brief Amplitudes of one photon over occupied modes.
 *
 * The norm may be below one; the deficit is the probability that the photon
 * was lost. Terms are kept sorted by label and exact zeros are dropped.
 */
class PureState {
  public:
    PureState() = default;

    /// Adds `amp` to the amplitude already on `mode`.
    void add(const ModeLabel &mode, Amplitude amp);

    [[nodiscard]] Amplitude amplitude(const ModeLabel &mode) const;
    [[nodiscard]] double norm_squared() const;
    [[nodiscard]] double norm() const;
    [[nodiscard]] double loss_probability() const;
    [[nodiscard]] bool empty() const { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    [[nodiscard]] std::span<const Term> terms() const { return terms_; }

    [[nodiscard]] PureState scaled(Amplitude factor) const;

    /// Keeps only the terms for which `keep` returns true.
    [[nodiscard]] PureState
    restricted(const std::function<bool(const ModeLabel &)> &keep) const;

    /// Squared norm of the terms for which `select` returns true.
    [[nodiscard]] double
    weight(const std::function<bool(const ModeLabel &)> &select) const;

  private:
    std::vector<Term> terms_;
};

PureState make_single_mode_state(const ModeLabel &label);

/// <a|b>, conjugate-linear in the first argument.
Amplitude overlap(const PureState &a, const PureState &b);

/**
 * @brief Sparse linear transfer operator between optical modes.
 *
 * The rule returns the image of one input mode as a list of output terms.
 * `isometry()` records that the columns are orthonormal.
 */
class LinearMap {
  public:
    using Column = std::vector<Term>;
    using Rule = std::function<Column(const ModeLabel &)>;

    LinearMap(Rule rule, bool isometry);

    static LinearMap identity();

    [[nodiscard]] Column column(const ModeLabel &in) const;
    [[nodiscard]] bool isometry() const { return isometry_; }

  private:
    std::shared_ptr<const Rule> rule_;
    bool isometry_;
};

/// f after g.
LinearMap compose(const LinearMap &f, const LinearMap &g);

/// Composes maps in the order given: the first element acts first.
LinearMap chain(std::initializer_list<LinearMap> stages);

/// Output terms landing on the same mode are summed.
PureState apply_map(const LinearMap &m, const PureState &s);

/// Image table of a frequency relabelling, indexed by input bin.
struct FrequencyRule {
    std::array<FrequencyBin, 2> image{FrequencyBin::Base, FrequencyBin::Shifted};

    static FrequencyRule preserve();
    /// Base <-> Shifted. Used for the diffracted order of the modulator.
    static FrequencyRule swap();

    [[nodiscard]] FrequencyBin operator()(FrequencyBin f) const {
        return image[static_cast<std::size_t>(f)];
    }
};

struct CouplerFrequencyRule {
    FrequencyRule transmitted = FrequencyRule::preserve();
    FrequencyRule diffracted = FrequencyRule::swap();
};

/**
 * @brief 50/50 frequency-translating coupler acting in place on two paths.
 *
 * With a, b the input amplitudes on `port_a` and `port_b`:
 *   a' = (a + e^{i phase} b) / sqrt 2,   b' = (e^{-i phase} a - b) / sqrt 2.
 * The same-port legs use `rule.transmitted`, the cross legs `rule.diffracted`.
 * Throws std::invalid_argument if the ports coincide or a rule is not a
 * bijection of {Base, Shifted}.
 */
LinearMap coupler_map(Path port_a, Path port_b, CouplerFrequencyRule rule = {},
                      double phase = 0.0);

/// Narrow-band filter: scales modes in `keep` by `amp_transmittance` and
/// removes every other frequency.
LinearMap projector_map(FrequencyBin keep, double amp_transmittance = 1.0);

/// Delays every mode on `path` by `k` time bins.
LinearMap shift_time_map(Path path, int k);

/// Exchanges paths `from` and `to`, optionally flipping polarization on both.
/// With `from == to` this is a pure polarization flip on that path.
LinearMap relabel_map(Path from, Path to, bool pol_flip);

/// Amplitude loss on one path (`amp` in [0, 1]).
LinearMap attenuation_map(Path path, double amp);

/// Beam-splitter tap diverting intensity fraction `r` from `from` into `to`.
/// Modeled as the real rotation [[sqrt(1-r), -sqrt r], [sqrt r, sqrt(1-r)]].
LinearMap tap_map(Path from, Path to, double r);

/// Checks column orthonormality of `m` on the given input modes.
bool columns_orthonormal(const LinearMap &m, std::span<const ModeLabel> inputs,
                         double tol = kTolerance);

struct DetectorModel {
    double efficiency = 1.0;
    /// Dark-click probability per gate.
    double dark = 0.0;
};

/// Throws std::invalid_argument unless efficiency is in [0,1] and dark in [0,1).
void validate(const DetectorModel &det);

enum class DetectorPort : std::uint8_t { D1, D2, D3, None };
using PortAssignment = std::map<Path, DetectorPort>;

/**
 * Exact click statistics of one gate.
 *
 * pD1 and pD2 are single-detector clicks. Gates where both detectors fire are
 * reported in pDouble and are also counted inside pNone, since a double click
 * carries no usable bit; pD1 + pD2 + pNone is therefore always one.
 */
struct OutcomeDistribution {
    double pD1 = 0.0;
    double pD2 = 0.0;
    double pNone = 1.0;
    double pDouble = 0.0;
    /// Expected photon number at the monitor port.
    double d3Expected = 0.0;
};

/// Combines per-detector "photon detected" probabilities for a photon that
/// can reach at most one detector with independent dark clicks.
OutcomeDistribution combine_single_photon(double p_photon_d1, double p_photon_d2,
                                          const DetectorModel &d1,
                                          const DetectorModel &d2);

/// Born-rule readout of a single photon state. Throws std::invalid_argument
/// if an occupied path is missing from `ports`.
OutcomeDistribution distribution(const PureState &s, const PortAssignment &ports,
                                 const DetectorModel &d1, const DetectorModel &d2);

inline OutcomeDistribution distribution(const PureState &s,
                                        const PortAssignment &ports,
                                        const DetectorModel &det) {
    return distribution(s, ports, det, det);
}

enum class ClickOutcome : std::uint8_t { D1, D2, None, Double };

std::string_view to_string(ClickOutcome c);

/// One draw from `dist`. Consumes exactly one uniform variate from `rng`.
ClickOutcome sample_detection(const OutcomeDistribution &dist, Rng &rng);

} // namespace freqkd
