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

#include "dcpde/balancing.hpp"
#include "dcpde/baselines.hpp"
#include "dcpde/losses.hpp"
#include "dcpde/network.hpp"
#include "dcpde/problems.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dcpde {

struct TrainConfig {
    std::string problem = "heat";
    std::string method = "dcpinn";
    int epochs = 10000;
    double lr_init = 1e-3;
    int lr_transition = 2000;
    double lr_decay = 0.9;
    double eta_m = 1e-2;
    int p_m = 100;
    int p_lambda = 1000;
    double weight_decay = 1e-6;
    std::uint64_t seed = 0;
    std::vector<int> hidden;  // empty selects the problem default
    int record_stride = 100;
    // penalty / augmented-Lagrangian outer loop
    int n_outer = 10;
    double penalty_init = 1.0;
    double penalty_growth = 2.0;
    double hinge_delta = 0.0;  // > 0 enables the softplus-smoothed hinge
    ProblemConfig problem_cfg;
};

struct TrainRecord {
    int epoch = 0;
    double wall_time_s = 0.0;
    std::vector<double> losses;   // aligned with TrainReport::category_names
    std::vector<double> lambdas;
    double total = 0.0;
};

struct TrainReport {
    std::vector<std::string> category_names;  // "0", "b", "f", "h1", ...
    std::vector<std::string> inequality_names;
    std::vector<TrainRecord> records;
    std::map<std::string, double> validation;
    NetworkParams params;
    bool diverged = false;
    double wall_time_s = 0.0;
};

auto known_methods() -> std::vector<std::string>;

auto lr_at(int epoch, double lr_init, int transition, double decay) -> double;

// Bias-corrected Adam with decoupled weight decay applied to the parameters
// before the moment-based delta.
struct AdamState {
    ParamGrad m;
    ParamGrad v;
    long step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;

    static auto make(const NetworkParams& params, double weight_decay)
        -> AdamState;
};
auto adam_step(AdamState& state, NetworkParams& params, const ParamGrad& grad,
               double lr) -> void;

auto train(const TrainConfig& cfg) -> TrainReport;

}  // namespace dcpde
