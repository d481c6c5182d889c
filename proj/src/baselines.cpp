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

#include "dcpde/baselines.hpp"

#include <stdexcept>

namespace dcpde {

auto hard_box(double psi, double u_min, double u_max) -> double
{
    if (u_min > u_max)
        throw std::invalid_argument("hard_box: u_min > u_max");
    return u_min + (u_max - u_min) * psi;
}

auto penalty_step(double lambda_i, double beta) -> double
{
    if (beta <= 1.0) throw std::invalid_argument("penalty_step: beta <= 1");
    if (lambda_i <= 0.0)
        throw std::invalid_argument("penalty_step: non-positive penalty");
    return beta * lambda_i;
}

auto al_objective(const LossBreakdown& base,
                  const OuterLoopState& state,
                  const Eigen::VectorXd& f_vals,
                  const Eigen::VectorXd& h_vals) -> double
{
    if (state.mu_f.size() != f_vals.size() ||
        state.mu_h.size() != h_vals.size())
        throw std::invalid_argument("al_objective: multiplier length mismatch");

    double loss_0 = 0.0;
    double loss_f = 0.0;
    double loss_h = 0.0;
    for (const auto& entry : base.entries) {
        switch (entry.id.kind) {
        case CategoryId::Kind::data: loss_0 += entry.raw_loss; break;
        case CategoryId::Kind::residual: loss_f += entry.raw_loss; break;
        case CategoryId::Kind::inequality: loss_h += entry.raw_loss; break;
        case CategoryId::Kind::boundary: break;  // hard-enforced or added by caller
        }
    }
    return loss_0 + state.mu_f.dot(f_vals) + state.penalty * loss_f +
           state.mu_h.dot(h_vals.cwiseMax(0.0)) + state.penalty * loss_h;
}

auto al_dual_update(const OuterLoopState& state,
                    const Eigen::VectorXd& f_vals,
                    const Eigen::VectorXd& h_vals) -> OuterLoopState
{
    OuterLoopState next = state;
    next.mu_f = state.mu_f + state.penalty * f_vals;
    next.mu_h = state.mu_h + state.penalty * h_vals.cwiseMax(0.0);
    next.penalty = penalty_step(state.penalty, state.growth);
    next.outer_iter = state.outer_iter + 1;
    return next;
}

}  // namespace dcpde
