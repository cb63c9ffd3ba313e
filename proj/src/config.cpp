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

#include "freqkd/config.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "freqkd/numfmt.hpp"

namespace freqkd {

std::string_view to_string(RunMode m) {
    switch (m) {
    case RunMode::Simulate:
        return "simulate";
    case RunMode::Table:
        return "table";
    case RunMode::Network:
        return "network";
    case RunMode::Selftest:
        return "selftest";
    }
    return "?";
}

RunMode parse_mode(std::string_view text) {
    for (RunMode m : {RunMode::Simulate, RunMode::Table, RunMode::Network, RunMode::Selftest}) {
        if (to_string(m) == text) {
            return m;
        }
    }
    throw std::invalid_argument("unknown mode '" + std::string(text) + "'");
}

ConfigError::ConfigError(int line, std::string field, const std::string &what)
    : std::runtime_error(
          (line > 0 ? "config line " + std::to_string(line) + ": " : std::string("config: ")) +
          (field.empty() ? std::string() : field + ": ") + what),
      line_(line), field_(std::move(field)) {}

namespace {

using Getter = std::function<std::optional<std::string>(const RunConfig &)>;
using Setter = std::function<void(RunConfig &, std::string_view)>;

struct Field {
    std::string key;
    Getter get;
    Setter set;
};

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

bool parse_bool(std::string_view v) {
    v = trim(v);
    if (v == "true" || v == "1" || v == "yes") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no") {
        return false;
    }
    throw std::invalid_argument("not a boolean: '" + std::string(v) + "'");
}

int parse_int32(std::string_view v) {
    const long long x = parse_int(v);
    if (x < INT32_MIN || x > INT32_MAX) {
        throw std::invalid_argument("integer out of range");
    }
    return static_cast<int>(x);
}

std::vector<std::string_view> split_list(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(trim(text.substr(start, pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

Topology &topology(RunConfig &c) {
    if (!c.topology) {
        c.topology.emplace();
    }
    return *c.topology;
}

template <typename T>
Field number_field(std::string key, std::function<T &(RunConfig &)> ref) {
    Getter get = [ref](const RunConfig &c) -> std::optional<std::string> {
        const T &value = ref(const_cast<RunConfig &>(c));
        if constexpr (std::is_same_v<T, double>) {
            return format_number(value);
        } else {
            return std::to_string(value);
        }
    };
    Setter set = [ref](RunConfig &c, std::string_view v) {
        if constexpr (std::is_same_v<T, double>) {
            ref(c) = parse_double(v);
        } else if constexpr (std::is_same_v<T, int>) {
            ref(c) = parse_int32(v);
        } else {
            ref(c) = parse_uint(v);
        }
    };
    return Field{std::move(key), std::move(get), std::move(set)};
}

void add_detector(std::vector<Field> &fields, const std::string &prefix,
                  std::function<DetectorModel &(RunConfig &)> ref) {
    fields.push_back(number_field<double>(
        prefix + ".efficiency", [ref](RunConfig &c) -> double & { return ref(c).efficiency; }));
    fields.push_back(number_field<double>(
        prefix + ".dark", [ref](RunConfig &c) -> double & { return ref(c).dark; }));
}

const std::vector<Field> &fields() {
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back({"mode",
                     [](const RunConfig &c) { return std::string(to_string(c.mode)); },
                     [](RunConfig &c, std::string_view v) { c.mode = parse_mode(trim(v)); }});
        f.push_back(number_field<std::uint64_t>(
            "numPulses", [](RunConfig &c) -> std::uint64_t & { return c.session.numPulses; }));
        f.push_back({"aliceChoiceProbs",
                     [](const RunConfig &c) {
                         const auto &p = c.session.aliceChoiceProbs;
                         return format_number(p[0]) + ", " + format_number(p[1]) + ", " +
                                format_number(p[2]);
                     },
                     [](RunConfig &c, std::string_view v) {
                         const auto parts = split_list(v, ',');
                         if (parts.size() != 3) {
                             throw std::invalid_argument(
                                 "expected three probabilities (NoFilter, FilterOmega, "
                                 "FilterOmegaDelta)");
                         }
                         for (std::size_t i = 0; i < 3; ++i) {
                             c.session.aliceChoiceProbs[i] = parse_double(parts[i]);
                         }
                     }});
        f.push_back(number_field<double>(
            "bobOnProb", [](RunConfig &c) -> double & { return c.session.bobOnProb; }));
        f.push_back(number_field<std::uint64_t>(
            "seed", [](RunConfig &c) -> std::uint64_t & { return c.session.seed; }));
        f.push_back(number_field<double>("disclosureFraction", [](RunConfig &c) -> double & {
            return c.session.disclosureFraction;
        }));
        f.push_back(number_field<int>(
            "pulsePeriodBins", [](RunConfig &c) -> int & { return c.session.pulsePeriodBins; }));
        f.push_back(number_field<int>(
            "intensityWindow", [](RunConfig &c) -> int & { return c.session.intensityWindow; }));
        f.push_back(number_field<double>(
            "intensityK", [](RunConfig &c) -> double & { return c.session.intensityK; }));
        f.push_back(number_field<double>("interferenceSigmas", [](RunConfig &c) -> double & {
            return c.session.interferenceSigmas;
        }));

        f.push_back(number_field<double>(
            "bob.aomPhase", [](RunConfig &c) -> double & { return c.session.bob.aomPhase; }));
        f.push_back(number_field<int>("bob.armDelayBins", [](RunConfig &c) -> int & {
            return c.session.bob.armDelayBins;
        }));
        f.push_back({"bob.source",
                     [](const RunConfig &c) {
                         return std::string(
                             std::holds_alternative<SinglePhoton>(c.session.bob.source)
                                 ? "single"
                                 : "weak");
                     },
                     [](RunConfig &c, std::string_view v) {
                         v = trim(v);
                         if (v == "single") {
                             c.session.bob.source = SinglePhoton{};
                         } else if (v == "weak") {
                             if (!std::holds_alternative<WeakCoherent>(c.session.bob.source)) {
                                 c.session.bob.source = WeakCoherent{};
                             }
                         } else {
                             throw std::invalid_argument("expected 'single' or 'weak'");
                         }
                     }});
        f.push_back({"bob.mu",
                     [](const RunConfig &c) -> std::optional<std::string> {
                         if (const auto *w = std::get_if<WeakCoherent>(&c.session.bob.source)) {
                             return format_number(w->mu);
                         }
                         return std::nullopt;
                     },
                     [](RunConfig &c, std::string_view v) {
                         auto *w = std::get_if<WeakCoherent>(&c.session.bob.source);
                         if (w == nullptr) {
                             throw std::invalid_argument("requires bob.source = weak");
                         }
                         w->mu = parse_double(v);
                     }});
        add_detector(f, "bob.detD1", [](RunConfig &c) -> DetectorModel & {
            return c.session.bob.detD1;
        });
        add_detector(f, "bob.detD2", [](RunConfig &c) -> DetectorModel & {
            return c.session.bob.detD2;
        });

        f.push_back(number_field<double>("alice.filterAmpTransmittance",
                                         [](RunConfig &c) -> double & {
                                             return c.session.alice.filterAmpTransmittance;
                                         }));
        f.push_back(number_field<double>(
            "alice.tapRatio", [](RunConfig &c) -> double & { return c.session.alice.tapRatio; }));
        f.push_back({"alice.attenuatorEnabled",
                     [](const RunConfig &c) {
                         return fmt_bool(c.session.alice.attenuatorEnabled);
                     },
                     [](RunConfig &c, std::string_view v) {
                         c.session.alice.attenuatorEnabled = parse_bool(v);
                     }});
        add_detector(f, "alice.detD3", [](RunConfig &c) -> DetectorModel & {
            return c.session.alice.detD3;
        });
        f.push_back(number_field<int>("alice.switchSettlingBins", [](RunConfig &c) -> int & {
            return c.session.alice.switchSettlingBins;
        }));

        f.push_back(number_field<double>("channel.ampTransmittance", [](RunConfig &c) -> double & {
            return c.session.channel.ampTransmittance;
        }));
        f.push_back(number_field<int>("channel.oneWayDelayBins", [](RunConfig &c) -> int & {
            return c.session.channel.oneWayDelayBins;
        }));

        f.push_back({"eve", [](const RunConfig &c) { return format_eve(c.session.eve); },
                     [](RunConfig &c, std::string_view v) {
                         c.session.eve = parse_eve(std::string(trim(v)));
                     }});

        f.push_back({"topology.leaves",
                     [](const RunConfig &c) -> std::optional<std::string> {
                         if (!c.topology) {
                             return std::nullopt;
                         }
                         std::string out;
                         for (const auto &leaf : c.topology->leaves) {
                             if (!out.empty()) {
                                 out += ", ";
                             }
                             out += std::to_string(leaf.id) + ":" +
                                    std::to_string(leaf.roundTripBins) + ":" +
                                    format_number(leaf.splitterWeight);
                         }
                         return out;
                     },
                     [](RunConfig &c, std::string_view v) {
                         auto &t = topology(c);
                         t.leaves.clear();
                         if (trim(v).empty()) {
                             return;
                         }
                         for (auto item : split_list(v, ',')) {
                             const auto parts = split_list(item, ':');
                             if (parts.size() != 3) {
                                 throw std::invalid_argument(
                                     "leaf entries are id:roundTripBins:splitterWeight");
                             }
                             t.leaves.push_back(Leaf{parse_int32(parts[0]),
                                                     parse_int32(parts[1]),
                                                     parse_double(parts[2])});
                         }
                     }});
        f.push_back({"topology.timingResolutionBins",
                     [](const RunConfig &c) -> std::optional<std::string> {
                         if (!c.topology) {
                             return std::nullopt;
                         }
                         return std::to_string(c.topology->timingResolutionBins);
                     },
                     [](RunConfig &c, std::string_view v) {
                         topology(c).timingResolutionBins = parse_int32(v);
                     }});
        return f;
    }();
    return table;
}

} // namespace

void validate(const RunConfig &cfg) {
    try {
        validate(cfg.session);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(0, "", e.what());
    }
    if (cfg.mode == RunMode::Network && !cfg.topology) {
        throw ConfigError(0, "topology.leaves", "network mode requires a topology");
    }
    if (cfg.topology) {
        try {
            validate_topology(*cfg.topology);
        } catch (const TopologyError &e) {
            throw ConfigError(0, "topology.leaves", e.what());
        }
    }
}

RunConfig parse_config(std::istream &in, RunMode mode) {
    std::map<std::string, std::pair<std::string, int>> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(lineno, "", "expected 'key = value'");
        }
        const std::string key(trim(text.substr(0, eq)));
        const std::string value(trim(text.substr(eq + 1)));
        if (key.empty()) {
            throw ConfigError(lineno, "", "missing key");
        }
        const bool known = std::any_of(fields().begin(), fields().end(),
                                       [&](const Field &f) { return f.key == key; });
        if (!known) {
            throw ConfigError(lineno, key, "unknown key");
        }
        if (!values.emplace(key, std::pair{value, lineno}).second) {
            throw ConfigError(lineno, key, "duplicate key");
        }
    }

    RunConfig cfg;
    cfg.mode = mode;
    for (const auto &field : fields()) {
        auto it = values.find(field.key);
        if (it == values.end()) {
            continue;
        }
        try {
            field.set(cfg, it->second.first);
        } catch (const std::invalid_argument &e) {
            throw ConfigError(it->second.second, field.key, e.what());
        }
    }
    if (values.count("mode") == 0) {
        cfg.mode = mode;
    }
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::filesystem::path &path, RunMode mode) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(0, "", "cannot open '" + path.string() + "'");
    }
    return parse_config(in, mode);
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig &cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto &field : fields()) {
        if (auto v = field.get(cfg)) {
            out.emplace_back(field.key, *v);
        }
    }
    return out;
}

std::string serialize_config(const RunConfig &cfg) {
    std::ostringstream os;
    for (const auto &[key, value] : config_entries(cfg)) {
        os << key << " = " << value << '\n';
    }
    return os.str();
}

} // namespace freqkd
