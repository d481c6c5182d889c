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

#include "dcpde/balancing.hpp"

#include <iostream>
#include <stdexcept>

namespace dcpde {

auto BalancingState::make(
    const std::vector<std::pair<std::string, long>>& categories,
    double eta_m, int p_m, int p_lambda) -> BalancingState
{
    BalancingState state;
    state.eta_m = eta_m;
    state.p_m = p_m;
    state.p_lambda = p_lambda;
    for (const auto& [name, count] : categories) {
        state.m[name] = Eigen::VectorXd::Ones(count);
        state.lambda[name] = 1.0;
    }
    return state;
}

auto update_individual(const Eigen::VectorXd& m,
                       const Eigen::VectorXd& grad_m,
                       double eta_m) -> Eigen::VectorXd
{
    if (m.size() != grad_m.size())
        throw std::invalid_argument("update_individual: shape mismatch");
    if (!grad_m.allFinite())
        throw std::runtime_error("update_individual: non-finite m-gradient");
    return m + eta_m * grad_m;
}

auto update_category(const std::map<std::string, double>& lambda,
                     const std::map<std::string, double>& mean_abs_grads)
    -> std::map<std::string, double>
{
    double grad_sum = 0.0;
    for (const auto& [name, value] : mean_abs_grads) grad_sum += value;

    std::map<std::string, double> updated;
    for (const auto& [name, current] : lambda) {
        const double own = mean_abs_grads.at(name);
        if (own == 0.0) {
            updated[name] = 1.0;
            continue;
        }
        double next = current + grad_sum / own;
        if (next > kLambdaCap) {
            std::cerr << "warning: lambda_" << name << " capped at "
                      << kLambdaCap << "\n";
            next = kLambdaCap;
        }
        updated[name] = next;
    }
    return updated;
}

auto due(int epoch, int period) -> bool
{
    if (period <= 0) throw std::invalid_argument("due: non-positive period");
    return epoch % period == 0;
}

}  // namespace dcpde
