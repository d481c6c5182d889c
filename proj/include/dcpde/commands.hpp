// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License.  You
// may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

#pragma once

#include "dcpde/config.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dcpde {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDiverged = 3;

struct CliOptions {
    std::string config_path;
    std::string out_dir;             // overrides output.dir when set
    std::optional<long> seed;        // overrides training.seed
    std::vector<long> seeds;         // overrides the multi-seed set
};

auto cmd_run(const CliOptions& opts) -> int;
auto cmd_sweep(const CliOptions& opts) -> int;
auto cmd_ablate(const CliOptions& opts) -> int;
auto cmd_report(const CliOptions& opts) -> int;

}  // namespace dcpde
