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
 * Run configuration: a flat `key = value` text file whose keys mirror the
 * SessionParams and Topology field names (nested structs use dotted keys,
 * e.g. `alice.tapRatio`). Lines starting with `#` are comments.
 */

#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "freqkd/network.hpp"
#include "freqkd/protocol.hpp"

namespace freqkd {

enum class RunMode { Simulate, Table, Network, Selftest };

std::string_view to_string(RunMode m);
RunMode parse_mode(std::string_view text);

struct RunConfig {
    RunMode mode = RunMode::Simulate;
    SessionParams session;
    std::optional<Topology> topology;
};

/// Parse or semantic failure. `line()` is 0 for semantic errors that are not
/// tied to one line.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(int line, std::string field, const std::string &what);

    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] const std::string &field() const { return field_; }

  private:
    int line_;
    std::string field_;
};

/// Starts from the documented defaults and applies each key. Throws ConfigError.
RunConfig parse_config(std::istream &in, RunMode mode = RunMode::Simulate);
RunConfig load_config(const std::filesystem::path &path,
                      RunMode mode = RunMode::Simulate);

/// Semantic checks on a fully parsed config; throws ConfigError.
void validate(const RunConfig &cfg);

/// Every key with its current value, in a fixed order. Parsing the output of
/// serialize_config reproduces the config exactly.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig &cfg);
std::string serialize_config(const RunConfig &cfg);

} // namespace freqkd
