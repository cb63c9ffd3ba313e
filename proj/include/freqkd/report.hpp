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
 * Transcript files, summary reports and the outcome table.
 *
 * A transcript is CSV with a `#`-prefixed preamble echoing the full run
 * configuration, so the summary can be regenerated from the file alone:
 *
 *     # freqkd transcript v1
 *     # numPulses = 100000
 *     ...
 *     index,choice,setting,click,d3Count,emitBin,returnBin,leafId,intendedBit,decodedBit
 *     0,FilterOmega,AomOff,D1,0,0,1,,0,0
 */

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "freqkd/config.hpp"

namespace freqkd {

using Summary = nlohmann::ordered_json;

void write_transcript(std::ostream &os, const RunConfig &cfg,
                      std::span<const PulseRecord> records);

struct LoadedTranscript {
    RunConfig config;
    std::vector<PulseRecord> records;
};

/// Throws std::runtime_error with the offending line number on malformed input.
LoadedTranscript read_transcript(std::istream &is);
LoadedTranscript read_transcript(const std::filesystem::path &path);

void write_eve_log(std::ostream &os, const EveLog &log);

/// Evaluates the records (one-to-one or per leaf, depending on the mode) and
/// renders the summary document.
Summary summarize(const RunConfig &cfg, std::span<const PulseRecord> records);

/// True if the summary reports any alarm.
bool summary_has_alarm(const Summary &summary);

/// Exact single-photon outcome matrix for all six (choice, setting) pairs.
std::string render_table(const RunConfig &cfg);

} // namespace freqkd
