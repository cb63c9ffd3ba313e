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
#include <vector>

namespace freqkd {

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Fault injection for exercising the self-test itself.
struct SelftestHooks {
    double aomPhase = 0.0;
    double darkProbability = 0.0;
};

std::vector<SelftestCheck> run_selftest(const SelftestHooks &hooks = {});

} // namespace freqkd
