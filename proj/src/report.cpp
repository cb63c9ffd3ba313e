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

#include "freqkd/report.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "freqkd/numfmt.hpp"

namespace freqkd {

namespace {

constexpr std::string_view kMagic = "# freqkd transcript v1";
constexpr std::string_view kColumns =
    "index,choice,setting,click,d3Count,emitBin,returnBin,leafId,intendedBit,decodedBit";

template <typename T>
std::string opt(const std::optional<T> &v) {
    return v ? std::to_string(*v) : std::string();
}

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) {
            return out;
        }
        start = pos + 1;
    }
}

AliceChoice parse_choice(std::string_view s) {
    for (AliceChoice c : kAllChoices) {
        if (to_string(c) == s) {
            return c;
        }
    }
    throw std::invalid_argument("unknown choice '" + std::string(s) + "'");
}

BobSetting parse_setting(std::string_view s) {
    for (BobSetting b : kAllSettings) {
        if (to_string(b) == s) {
            return b;
        }
    }
    throw std::invalid_argument("unknown setting '" + std::string(s) + "'");
}

ClickOutcome parse_click(std::string_view s) {
    for (ClickOutcome c :
         {ClickOutcome::D1, ClickOutcome::D2, ClickOutcome::None, ClickOutcome::Double}) {
        if (to_string(c) == s) {
            return c;
        }
    }
    throw std::invalid_argument("unknown click '" + std::string(s) + "'");
}

std::optional<int> parse_opt_int(std::string_view s) {
    if (s.empty()) {
        return std::nullopt;
    }
    return static_cast<int>(parse_int(s));
}

Summary sift_json(const SiftResult &s) {
    Summary g;
    g["group1D1"] = s.group1D1;
    g["group1D2"] = s.group1D2;
    g["group2"] = s.group2Count;
    g["group3"] = s.group3Count;
    g["noClick"] = s.noClickCount;
    g["noFilterOff"] = s.noFilterOffCount;
    g["doubleClick"] = s.doubleClickCount;
    return g;
}

Summary outcome_json(const SessionOutcome &o, std::uint64_t pulses) {
    const auto &s = o.sift;
    const auto &a = o.alarms;
    Summary j;
    j["pulses"] = pulses;
    j["siftedKeyLength"] = s.group2Count;
    j["finalKeyLength"] = s.keyAlice.size();
    j["keyFractionPerPulse"] =
        pulses > 0 ? static_cast<double>(s.group2Count) / static_cast<double>(pulses) : 0.0;
    j["groups"] = sift_json(s);
    j["group1D2Fraction"] = a.interference.d2Fraction;
    j["qberSample"] = a.qber.qber;
    j["disclosedBits"] = a.qber.disclosed;
    j["disclosedErrors"] = a.qber.errors;
    j["emptyKey"] = a.qber.emptyKey;

    Summary alarms;
    alarms["interferenceAlarm"] = a.interference.alarm;
    alarms["interferenceIndeterminate"] = a.interference.indeterminate;
    alarms["expectedD2Fraction"] = a.interference.expectedFraction;
    alarms["interferenceThreshold"] = a.interference.threshold;
    alarms["intensityAlarm"] = a.intensity.alarm;
    alarms["monitorBlind"] = a.intensity.blind;
    j["alarms"] = alarms;

    Summary d3;
    d3["total"] = a.intensity.totalD3;
    d3["meanPerPulse"] = pulses > 0 ? static_cast<double>(a.intensity.totalD3) /
                                          static_cast<double>(pulses)
                                    : 0.0;
    d3["baselineMean"] = a.intensity.baselineMean;
    d3["maxWindowMean"] = a.intensity.maxWindowMean;
    d3["windows"] = a.intensity.windows;
    d3["alarmedWindows"] = a.intensity.alarmedWindows;
    j["d3"] = d3;
    return j;
}

} // namespace

void write_transcript(std::ostream &os, const RunConfig &cfg,
                      std::span<const PulseRecord> records) {
    os << kMagic << '\n';
    for (const auto &[key, value] : config_entries(cfg)) {
        os << "# " << key << " = " << value << '\n';
    }
    os << kColumns << '\n';
    for (const auto &r : records) {
        os << r.index << ',' << to_string(r.choice) << ',' << to_string(r.setting) << ','
           << to_string(r.click) << ',' << r.d3Photons << ',' << r.emitBin << ','
           << r.returnBin << ',' << opt(r.leafId) << ',' << opt(r.intendedBit) << ','
           << opt(r.decodedBit) << '\n';
    }
}

LoadedTranscript read_transcript(std::istream &is) {
    std::string line;
    int lineno = 0;
    if (!std::getline(is, line) || line != kMagic) {
        throw std::runtime_error("transcript line 1: missing '" + std::string(kMagic) + "'");
    }
    ++lineno;
    std::ostringstream cfg_text;
    bool header_seen = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.rfind("# ", 0) == 0) {
            cfg_text << line.substr(2) << '\n';
            continue;
        }
        if (line != kColumns) {
            throw std::runtime_error("transcript line " + std::to_string(lineno) +
                                     ": expected column header");
        }
        header_seen = true;
        break;
    }
    if (!header_seen) {
        throw std::runtime_error("transcript: no column header");
    }
    LoadedTranscript out;
    std::istringstream cfg_in(cfg_text.str());
    out.config = parse_config(cfg_in);

    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        try {
            const auto f = split_csv(line);
            if (f.size() != 10) {
                throw std::invalid_argument("expected 10 columns");
            }
            PulseRecord r;
            r.index = parse_uint(f[0]);
            r.choice = parse_choice(f[1]);
            r.setting = parse_setting(f[2]);
            r.click = parse_click(f[3]);
            r.d3Photons = static_cast<int>(parse_int(f[4]));
            r.emitBin = parse_int(f[5]);
            r.returnBin = parse_int(f[6]);
            r.leafId = parse_opt_int(f[7]);
            r.intendedBit = parse_opt_int(f[8]);
            r.decodedBit = parse_opt_int(f[9]);
            out.records.push_back(r);
        } catch (const std::invalid_argument &e) {
            throw std::runtime_error("transcript line " + std::to_string(lineno) + ": " +
                                     e.what());
        }
    }
    return out;
}

LoadedTranscript read_transcript(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open transcript '" + path.string() + "'");
    }
    return read_transcript(in);
}

void write_eve_log(std::ostream &os, const EveLog &log) {
    os << "index,attacked,measuredFreq,tappedPhotons,probeReadout\n";
    for (std::size_t i = 0; i < log.size(); ++i) {
        const auto &e = log[i];
        os << i << ',' << (e.attacked ? 1 : 0) << ','
           << (e.measuredFreq ? to_string(*e.measuredFreq) : "") << ',' << e.tappedPhotons
           << ',' << (e.probeReadout ? to_string(*e.probeReadout) : "") << '\n';
    }
}

Summary summarize(const RunConfig &cfg, std::span<const PulseRecord> records) {
    Summary j;
    j["mode"] = std::string(to_string(cfg.mode));
    j["seed"] = cfg.session.seed;
    j["numPulses"] = records.size();
    j["mu"] = mean_photons(cfg.session.bob.source);

    Summary echo;
    for (const auto &[key, value] : config_entries(cfg)) {
        echo[key] = value;
    }
    j["config"] = echo;

    if (cfg.mode == RunMode::Network) {
        Transcript t;
        t.params = cfg.session;
        t.records.assign(records.begin(), records.end());
        const NetworkSessionResult net = evaluate_network(std::move(t), *cfg.topology);
        j["unidentifiedCount"] = net.unidentifiedCount;
        bool interference = false;
        bool intensity = false;
        std::uint64_t key_total = 0;
        Summary leaves;
        for (const auto &[id, leaf] : net.perLeaf) {
            leaves[std::to_string(id)] = outcome_json(leaf.outcome, leaf.pulses);
            interference = interference || leaf.outcome.alarms.interference.alarm;
            intensity = intensity || leaf.outcome.alarms.intensity.alarm;
            key_total += leaf.outcome.sift.group2Count;
        }
        j["siftedKeyLength"] = key_total;
        j["alarms"] = {{"interferenceAlarm", interference}, {"intensityAlarm", intensity}};
        j["perLeaf"] = leaves;
        return j;
    }

    const SessionOutcome o = evaluate_session(records, cfg.session, 0);
    const Summary body = outcome_json(o, records.size());
    for (const auto &[key, value] : body.items()) {
        j[key] = value;
    }
    return j;
}

bool summary_has_alarm(const Summary &summary) {
    const auto &a = summary.at("alarms");
    return a.at("interferenceAlarm").get<bool>() || a.at("intensityAlarm").get<bool>();
}

std::string render_table(const RunConfig &cfg) {
    BobKitConfig bob = cfg.session.bob;
    bob.source = SinglePhoton{};
    std::ostringstream os;
    os << "# exact single-photon outcome probabilities\n";
    os << "choice            setting   pD1       pD2       pNone     d3Expected\n";
    char buf[160];
    for (AliceChoice c : kAllChoices) {
        for (BobSetting s : kAllSettings) {
            const OutcomeDistribution d = round_trip_distribution(
                c, s, bob, cfg.session.alice, cfg.session.channel, cfg.session.eve);
            std::snprintf(buf, sizeof buf, "%-17s %-9s %.6f  %.6f  %.6f  %.6f\n",
                          std::string(to_string(c)).c_str(), std::string(to_string(s)).c_str(),
                          d.pD1, d.pD2, d.pNone, d.d3Expected);
            os << buf;
        }
    }
    return os.str();
}

} // namespace freqkd
