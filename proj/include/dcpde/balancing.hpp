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

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

namespace dcpde {

// Cap keeping the objective finite if a category's gradient collapses;
// never reached at the scales used by the benchmarks.
inline constexpr double kLambdaCap = 1e6;

// Self-adaptive weighting state: per-sample weights m per category and
// per-category scalars lambda, both initialised to 1.
struct BalancingState {
    std::map<std::string, Eigen::VectorXd> m;
    std::map<std::string, double> lambda;
    double eta_m = 1e-2;
    int p_m = 100;
    int p_lambda = 1000;

    static auto make(const std::vector<std::pair<std::string, long>>& categories,
                     double eta_m, int p_m, int p_lambda) -> BalancingState;
};

// Gradient-ascent update of per-sample weights: m' = m + eta_m * dL/dm.
auto update_individual(const Eigen::VectorXd& m,
                       const Eigen::VectorXd& grad_m,
                       double eta_m) -> Eigen::VectorXd;

// Gradient-magnitude-ratio update of category weights.  A category whose
// mean absolute parameter gradient is zero is reset to 1; otherwise
// lambda' = lambda + (sum of all means) / own mean.
auto update_category(const std::map<std::string, double>& lambda,
                     const std::map<std::string, double>& mean_abs_grads)
    -> std::map<std::string, double>;

// True iff this epoch triggers a periodic update.
auto due(int epoch, int period) -> bool;

}  // namespace dcpde
