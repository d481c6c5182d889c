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

#include "dcpde/losses.hpp"

#include <Eigen/Dense>

namespace dcpde {

// Outer-loop state of the penalty-homotopy and augmented-Lagrangian
// baselines: growing penalty weight plus dual multipliers for the equality
// residuals (mu_f) and the hinged inequality values (mu_h, elementwise >= 0).
struct OuterLoopState {
    double penalty = 1.0;
    double growth = 2.0;
    Eigen::VectorXd mu_f;
    Eigen::VectorXd mu_h;
    int outer_iter = 0;
};

// u_min + (u_max - u_min) * psi
auto hard_box(double psi, double u_min, double u_max) -> double;

// beta * lambda_i, beta > 1
auto penalty_step(double lambda_i, double beta) -> double;

// L_0 + mu_f . f + penalty * L_f + mu_h . [h]_+ + penalty * L_h,
// where base carries the plain category losses.
auto al_objective(const LossBreakdown& base,
                  const OuterLoopState& state,
                  const Eigen::VectorXd& f_vals,
                  const Eigen::VectorXd& h_vals) -> double;

// Projected dual ascent plus penalty growth; mu_h stays >= 0 because its
// increments are hinged.
auto al_dual_update(const OuterLoopState& state,
                    const Eigen::VectorXd& f_vals,
                    const Eigen::VectorXd& h_vals) -> OuterLoopState;

}  // namespace dcpde
