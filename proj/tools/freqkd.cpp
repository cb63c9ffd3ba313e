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

// Command-line front end.
//
// Exit codes: 0 clean run, 2 an alarm fired (or a self-test check failed),
// 1 error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "freqkd/config.hpp"
#include "freqkd/network.hpp"
#include "freqkd/report.hpp"
#include "freqkd/selftest.hpp"

namespace fs = std::filesystem;
using namespace freqkd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitAlarm = 2;

constexpr const char *kOutDirEnv = "FREQKD_OUT_DIR";

struct RunOverrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> pulses;
    std::optional<std::string> eve;
    std::optional<std::string> out;
};

RunConfig load_with_overrides(const RunOverrides &o, RunMode mode) {
    RunConfig cfg;
    cfg.mode = mode;
    if (!o.config.empty()) {
        cfg = load_config(o.config, mode);
        cfg.mode = mode;
    }
    if (o.seed) {
        cfg.session.seed = *o.seed;
    }
    if (o.pulses) {
        cfg.session.numPulses = *o.pulses;
    }
    if (o.eve) {
        cfg.session.eve = parse_eve(*o.eve);
    }
    validate(cfg);
    return cfg;
}

fs::path output_dir(const RunOverrides &o) {
    if (o.out) {
        return *o.out;
    }
    if (const char *env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
        return env;
    }
    return ".";
}

void write_file(const fs::path &path, const std::string &content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    os << content;
    if (!os) {
        throw std::runtime_error("write failed for '" + path.string() + "'");
    }
}

int emit_outputs(const RunConfig &cfg, const Transcript &t, const fs::path &dir) {
    fs::create_directories(dir);
    std::ostringstream transcript;
    write_transcript(transcript, cfg, t.records);
    write_file(dir / "transcript.csv", transcript.str());

    std::ostringstream eve;
    write_eve_log(eve, t.eveLog);
    write_file(dir / "eve_log.csv", eve.str());

    const Summary summary = summarize(cfg, t.records);
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << '\n';
    return summary_has_alarm(summary) ? kExitAlarm : kExitOk;
}

void add_run_options(CLI::App *cmd, RunOverrides &o, bool config_required) {
    auto *cfg = cmd->add_option("--config", o.config, "Configuration file (key = value)");
    if (config_required) {
        cfg->required();
    }
    cmd->add_option("--seed", o.seed, "Override the seed");
    cmd->add_option("--pulses", o.pulses, "Override numPulses");
    cmd->add_option("--eve", o.eve,
                    "Eavesdropper: none | intercept:<forward|return|both>:<p> | tap:<q> | "
                    "probe:<mean>");
    cmd->add_option("--out", o.out,
                    std::string("Output directory (default: $") + kOutDirEnv + " or .)");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Frequency-coded plug-and-play key distribution simulator"};
    app.require_subcommand(1);

    RunOverrides sim_opts;
    auto *simulate = app.add_subcommand("simulate", "Run a one-to-one session");
    add_run_options(simulate, sim_opts, true);

    RunOverrides net_opts;
    auto *network = app.add_subcommand("network", "Run a one-to-any branch-network session");
    add_run_options(network, net_opts, true);

    std::string table_config;
    auto *table = app.add_subcommand("table", "Print the exact outcome matrix");
    table->add_option("--config", table_config, "Configuration file");

    SelftestHooks hooks;
    auto *selftest = app.add_subcommand("selftest", "Run the built-in invariant checks");
    selftest->add_option("--aom-phase", hooks.aomPhase, "Fault injection: return coupler phase")
        ->group("");
    selftest->add_option("--dark", hooks.darkProbability, "Fault injection: dark-click probability")
        ->group("");

    std::string transcript_path;
    auto *summarize_cmd =
        app.add_subcommand("summarize", "Regenerate the summary from a transcript file");
    summarize_cmd->add_option("--transcript", transcript_path, "Transcript CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            const RunConfig cfg = load_with_overrides(sim_opts, RunMode::Simulate);
            return emit_outputs(cfg, run_session(cfg.session), output_dir(sim_opts));
        }
        if (network->parsed()) {
            const RunConfig cfg = load_with_overrides(net_opts, RunMode::Network);
            const NetworkSessionResult result = run_network_session(cfg.session, *cfg.topology);
            return emit_outputs(cfg, result.transcript, output_dir(net_opts));
        }
        if (table->parsed()) {
            RunOverrides o;
            o.config = table_config;
            std::cout << render_table(load_with_overrides(o, RunMode::Table));
            return kExitOk;
        }
        if (selftest->parsed()) {
            bool all = true;
            for (const auto &check : run_selftest(hooks)) {
                std::cout << (check.passed ? "PASS " : "FAIL ") << check.name << ": "
                          << check.detail << '\n';
                all = all && check.passed;
            }
            return all ? kExitOk : kExitAlarm;
        }
        if (summarize_cmd->parsed()) {
            const LoadedTranscript t = read_transcript(fs::path(transcript_path));
            const Summary summary = summarize(t.config, t.records);
            std::cout << summary.dump(2) << '\n';
            return summary_has_alarm(summary) ? kExitAlarm : kExitOk;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
