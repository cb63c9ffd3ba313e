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

#include "freqkd/mode_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace freqkd {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

bool valid_freq(FrequencyBin f) {
    return static_cast<unsigned>(f) <= 1U;
}

} // namespace

std::string_view to_string(FrequencyBin f) {
    switch (f) {
    case FrequencyBin::Base:
        return "Base";
    case FrequencyBin::Shifted:
        return "Shifted";
    }
    return "?";
}

std::string_view to_string(Path p) {
    switch (p) {
    case Path::Channel:
        return "channel";
    case Path::ShortArm:
        return "short-arm";
    case Path::LongArm:
        return "long-arm";
    case Path::Det1Port:
        return "det1-port";
    case Path::Det2Port:
        return "det2-port";
    case Path::MonitorPort:
        return "monitor-port";
    case Path::EvePort:
        return "eve-port";
    case Path::Lost:
        return "lost";
    }
    return "?";
}

std::string_view to_string(Polarization p) {
    return p == Polarization::H ? "H" : "V";
}

std::string_view to_string(ClickOutcome c) {
    switch (c) {
    case ClickOutcome::D1:
        return "D1";
    case ClickOutcome::D2:
        return "D2";
    case ClickOutcome::None:
        return "none";
    case ClickOutcome::Double:
        return "double";
    }
    return "?";
}

FrequencyBin other(FrequencyBin f) {
    return f == FrequencyBin::Base ? FrequencyBin::Shifted : FrequencyBin::Base;
}

Polarization flipped(Polarization p) {
    return p == Polarization::H ? Polarization::V : Polarization::H;
}

void validate(const ModeLabel &label) {
    if (!valid_freq(label.freq)) {
        throw std::invalid_argument("mode label: frequency bin out of range");
    }
    if (static_cast<int>(label.path) >= kPathCount) {
        throw std::invalid_argument("mode label: invalid path identifier");
    }
    if (static_cast<unsigned>(label.pol) > 1U) {
        throw std::invalid_argument("mode label: invalid polarization");
    }
    if (label.time < 0) {
        throw std::invalid_argument("mode label: negative time bin");
    }
}

// ---------------------------------------------------------------------------
// PureState

void PureState::add(const ModeLabel &mode, Amplitude amp) {
    auto it = std::lower_bound(
        terms_.begin(), terms_.end(), mode,
        [](const Term &t, const ModeLabel &m) { return t.mode < m; });
    if (it != terms_.end() && it->mode == mode) {
        it->amp += amp;
        if (it->amp == Amplitude{}) {
            terms_.erase(it);
        }
        return;
    }
    if (amp == Amplitude{}) {
        return;
    }
    if (terms_.size() >= kMaxOccupiedModes) {
        throw std::length_error("pure state: too many occupied modes");
    }
    terms_.insert(it, Term{mode, amp});
}

Amplitude PureState::amplitude(const ModeLabel &mode) const {
    auto it = std::lower_bound(
        terms_.begin(), terms_.end(), mode,
        [](const Term &t, const ModeLabel &m) { return t.mode < m; });
    if (it != terms_.end() && it->mode == mode) {
        return it->amp;
    }
    return {};
}

double PureState::norm_squared() const {
    double sum = 0.0;
    for (const auto &t : terms_) {
        sum += std::norm(t.amp);
    }
    return sum;
}

double PureState::norm() const { return std::sqrt(norm_squared()); }

double PureState::loss_probability() const {
    return std::max(0.0, 1.0 - norm_squared());
}

PureState PureState::scaled(Amplitude factor) const {
    PureState out;
    if (factor == Amplitude{}) {
        return out;
    }
    out.terms_ = terms_;
    for (auto &t : out.terms_) {
        t.amp *= factor;
    }
    return out;
}

PureState
PureState::restricted(const std::function<bool(const ModeLabel &)> &keep) const {
    PureState out;
    for (const auto &t : terms_) {
        if (keep(t.mode)) {
            out.terms_.push_back(t);
        }
    }
    return out;
}

double
PureState::weight(const std::function<bool(const ModeLabel &)> &select) const {
    double sum = 0.0;
    for (const auto &t : terms_) {
        if (select(t.mode)) {
            sum += std::norm(t.amp);
        }
    }
    return sum;
}

PureState make_single_mode_state(const ModeLabel &label) {
    validate(label);
    PureState s;
    s.add(label, 1.0);
    return s;
}

Amplitude overlap(const PureState &a, const PureState &b) {
    Amplitude sum{};
    for (const auto &t : a.terms()) {
        sum += std::conj(t.amp) * b.amplitude(t.mode);
    }
    return sum;
}

// ---------------------------------------------------------------------------
// LinearMap

LinearMap::LinearMap(Rule rule, bool isometry)
    : rule_(std::make_shared<const Rule>(std::move(rule))), isometry_(isometry) {}

LinearMap LinearMap::identity() {
    return LinearMap([](const ModeLabel &m) { return Column{{m, 1.0}}; }, true);
}

LinearMap::Column LinearMap::column(const ModeLabel &in) const {
    return (*rule_)(in);
}

LinearMap compose(const LinearMap &f, const LinearMap &g) {
    auto rule = [f, g](const ModeLabel &in) {
        LinearMap::Column out;
        for (const auto &mid : g.column(in)) {
            for (const auto &t : f.column(mid.mode)) {
                Amplitude amp = mid.amp * t.amp;
                auto it = std::find_if(out.begin(), out.end(),
                                       [&](const Term &o) { return o.mode == t.mode; });
                if (it != out.end()) {
                    it->amp += amp;
                } else {
                    out.push_back(Term{t.mode, amp});
                }
            }
        }
        return out;
    };
    return LinearMap(std::move(rule), f.isometry() && g.isometry());
}

LinearMap chain(std::initializer_list<LinearMap> stages) {
    LinearMap acc = LinearMap::identity();
    bool first = true;
    for (const auto &stage : stages) {
        acc = first ? stage : compose(stage, acc);
        first = false;
    }
    return acc;
}

PureState apply_map(const LinearMap &m, const PureState &s) {
    PureState out;
    for (const auto &t : s.terms()) {
        for (const auto &img : m.column(t.mode)) {
            out.add(img.mode, t.amp * img.amp);
        }
    }
    return out;
}

FrequencyRule FrequencyRule::preserve() { return {}; }

FrequencyRule FrequencyRule::swap() {
    return FrequencyRule{{FrequencyBin::Shifted, FrequencyBin::Base}};
}

namespace {

void validate_rule(const FrequencyRule &rule) {
    if (!valid_freq(rule.image[0]) || !valid_freq(rule.image[1])) {
        throw std::invalid_argument(
            "frequency rule maps outside {Base, Shifted}");
    }
    if (rule.image[0] == rule.image[1]) {
        throw std::invalid_argument("frequency rule is not a bijection");
    }
}

} // namespace

LinearMap coupler_map(Path port_a, Path port_b, CouplerFrequencyRule rule,
                      double phase) {
    if (port_a == port_b) {
        throw std::invalid_argument("coupler ports must differ");
    }
    validate_rule(rule.transmitted);
    validate_rule(rule.diffracted);
    const Amplitude up = std::polar(kInvSqrt2, phase);
    const Amplitude down = std::polar(kInvSqrt2, -phase);
    auto fn = [=](const ModeLabel &in) -> LinearMap::Column {
        if (in.path != port_a && in.path != port_b) {
            return {{in, 1.0}};
        }
        ModeLabel same = in;
        ModeLabel cross = in;
        same.freq = rule.transmitted(in.freq);
        cross.freq = rule.diffracted(in.freq);
        if (in.path == port_a) {
            cross.path = port_b;
            return {{same, kInvSqrt2}, {cross, down}};
        }
        cross.path = port_a;
        return {{cross, up}, {same, -kInvSqrt2}};
    };
    return LinearMap(std::move(fn), true);
}

LinearMap projector_map(FrequencyBin keep, double amp_transmittance) {
    if (!(amp_transmittance >= 0.0 && amp_transmittance <= 1.0)) {
        throw std::invalid_argument("filter transmittance must lie in [0, 1]");
    }
    auto fn = [=](const ModeLabel &in) -> LinearMap::Column {
        if (in.freq != keep || amp_transmittance == 0.0) {
            return {};
        }
        return {{in, amp_transmittance}};
    };
    return LinearMap(std::move(fn), false);
}

LinearMap shift_time_map(Path path, int k) {
    if (k < 0) {
        throw std::invalid_argument("time shift must be non-negative");
    }
    auto fn = [=](const ModeLabel &in) -> LinearMap::Column {
        ModeLabel out = in;
        if (in.path == path) {
            out.time += k;
        }
        return {{out, 1.0}};
    };
    return LinearMap(std::move(fn), true);
}

LinearMap relabel_map(Path from, Path to, bool pol_flip) {
    auto fn = [=](const ModeLabel &in) -> LinearMap::Column {
        if (in.path != from && in.path != to) {
            return {{in, 1.0}};
        }
        ModeLabel out = in;
        out.path = in.path == from ? to : from;
        if (pol_flip) {
            out.pol = flipped(in.pol);
        }
        return {{out, 1.0}};
    };
    return LinearMap(std::move(fn), true);
}

LinearMap attenuation_map(Path path, double amp) {
    if (!(amp >= 0.0 && amp <= 1.0)) {
        throw std::invalid_argument("attenuation factor must lie in [0, 1]");
    }
    auto fn = [=](const ModeLabel &in) -> LinearMap::Column {
        if (in.path != path) {
            return {{in, 1.0}};
        }
        if (amp == 0.0) {
            return {};
        }
        return {{in, amp}};
    };
    return LinearMap(std::move(fn), amp == 1.0);
}

LinearMap tap_map(Path from, Path to, double r) {
    if (!(r >= 0.0 && r <= 1.0)) {
        throw std::invalid_argument("tap ratio must lie in [0, 1]");
    }
    if (from == to) {
        throw std::invalid_argument("tap ports must differ");
    }
    const double keep = std::sqrt(1.0 - r);
    const double divert = std::sqrt(r);
    auto fn = [=](const ModeLabel &in) -> LinearMap::Column {
        if (in.path != from && in.path != to) {
            return {{in, 1.0}};
        }
        ModeLabel a = in;
        ModeLabel b = in;
        a.path = from;
        b.path = to;
        LinearMap::Column col;
        if (in.path == from) {
            if (keep != 0.0) col.push_back({a, keep});
            if (divert != 0.0) col.push_back({b, divert});
        } else {
            if (divert != 0.0) col.push_back({a, -divert});
            if (keep != 0.0) col.push_back({b, keep});
        }
        return col;
    };
    return LinearMap(std::move(fn), true);
}

bool columns_orthonormal(const LinearMap &m, std::span<const ModeLabel> inputs,
                         double tol) {
    std::vector<PureState> cols;
    cols.reserve(inputs.size());
    for (const auto &in : inputs) {
        PureState c;
        for (const auto &t : m.column(in)) {
            c.add(t.mode, t.amp);
        }
        cols.push_back(std::move(c));
    }
    for (std::size_t i = 0; i < cols.size(); ++i) {
        for (std::size_t j = i; j < cols.size(); ++j) {
            const Amplitude expected = (i == j) ? 1.0 : 0.0;
            if (std::abs(overlap(cols[i], cols[j]) - expected) > tol) {
                return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Detection

void validate(const DetectorModel &det) {
    if (!(det.efficiency >= 0.0 && det.efficiency <= 1.0)) {
        throw std::invalid_argument("detector efficiency must lie in [0, 1]");
    }
    if (!(det.dark >= 0.0 && det.dark < 1.0)) {
        throw std::invalid_argument("dark-click probability must lie in [0, 1)");
    }
}

OutcomeDistribution combine_single_photon(double p_photon_d1, double p_photon_d2,
                                          const DetectorModel &d1,
                                          const DetectorModel &d2) {
    // Round-off can push the summed weights a few ulps past 1.
    const double a = std::clamp(p_photon_d1, 0.0, 1.0);
    const double b = std::clamp(p_photon_d2, 0.0, 1.0 - a);
    const double c = 1.0 - a - b;
    OutcomeDistribution out;
    out.pD1 = a * (1.0 - d2.dark) + c * d1.dark * (1.0 - d2.dark);
    out.pD2 = b * (1.0 - d1.dark) + c * d2.dark * (1.0 - d1.dark);
    out.pDouble = a * d2.dark + b * d1.dark + c * d1.dark * d2.dark;
    out.pNone = c * (1.0 - d1.dark) * (1.0 - d2.dark);
    return out;
}

OutcomeDistribution distribution(const PureState &s, const PortAssignment &ports,
                                 const DetectorModel &d1, const DetectorModel &d2) {
    validate(d1);
    validate(d2);
    double at_d1 = 0.0;
    double at_d2 = 0.0;
    double at_d3 = 0.0;
    for (const auto &t : s.terms()) {
        auto it = ports.find(t.mode.path);
        if (it == ports.end()) {
            throw std::invalid_argument("occupied path '" +
                                        std::string(to_string(t.mode.path)) +
                                        "' has no detector assignment");
        }
        const double w = std::norm(t.amp);
        switch (it->second) {
        case DetectorPort::D1:
            at_d1 += w;
            break;
        case DetectorPort::D2:
            at_d2 += w;
            break;
        case DetectorPort::D3:
            at_d3 += w;
            break;
        case DetectorPort::None:
            break;
        }
    }
    OutcomeDistribution out = combine_single_photon(
        d1.efficiency * at_d1, d2.efficiency * at_d2, d1, d2);
    out.d3Expected = at_d3;
    return out;
}

ClickOutcome sample_detection(const OutcomeDistribution &dist, Rng &rng) {
    const double u = uniform01(rng);
    if (u < dist.pD1) {
        return ClickOutcome::D1;
    }
    if (u < dist.pD1 + dist.pD2) {
        return ClickOutcome::D2;
    }
    if (u < dist.pD1 + dist.pD2 + dist.pDouble) {
        return ClickOutcome::Double;
    }
    return ClickOutcome::None;
}

} // namespace freqkd
