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

#include "dcpde/commands.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>

#include <cstdlib>
#include <string>
#include <vector>

auto main(int argc, char** argv) -> int
{
    if (const char* threads = std::getenv("DCPDE_THREADS"))
        Eigen::setNbThreads(std::max(1, std::atoi(threads)));

    CLI::App app{"Derivative-constrained PDE network trainer"};
    app.require_subcommand(1);

    dcpde::CliOptions opts;
    long seed = 0;
    std::vector<long> seeds;
    auto add_common = [&](CLI::App* sub, bool multi_seed) {
        sub->add_option("--config", opts.config_path, "configuration file")
            ->required();
        sub->add_option("--out", opts.out_dir, "output directory override");
        sub->add_option("--seed", seed, "seed override");
        if (multi_seed)
            sub->add_option("--seeds", seeds, "comma-separated seed list")
                ->delimiter(',');
    };

    auto* run = app.add_subcommand("run", "train one configuration");
    add_common(run, false);
    auto* sweep = app.add_subcommand("sweep", "adaptive-parameter grid sweep");
    add_common(sweep, false);
    auto* ablate = app.add_subcommand("ablate", "method ablation over seeds");
    add_common(ablate, true);
    auto* report = app.add_subcommand("report", "cross-run comparison tables");
    add_common(report, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : dcpde::kExitUsage;
    }

    if (run->count("--seed") || sweep->count("--seed")) opts.seed = seed;
    opts.seeds = seeds;

    if (run->parsed()) return dcpde::cmd_run(opts);
    if (sweep->parsed()) return dcpde::cmd_sweep(opts);
    if (ablate->parsed()) return dcpde::cmd_ablate(opts);
    return dcpde::cmd_report(opts);
}
