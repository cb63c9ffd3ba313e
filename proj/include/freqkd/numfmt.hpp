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

#include <string>
#include <string_view>

namespace freqkd {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_number(double v);

/// Strict parse of a whole string; throws std::invalid_argument.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);
unsigned long long parse_uint(std::string_view text);

std::string_view trim(std::string_view text);

} // namespace freqkd
