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

#include "dcpde/network.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace dcpde {

// Loss category: supervised data (0), boundary (b), PDE residual (f), or one
// of the inequality constraints (h, k).
struct CategoryId {
    enum class Kind { data, boundary, residual, inequality };
    Kind kind = Kind::data;
    int ineq_index = 0;  // only meaningful for Kind::inequality

    [[nodiscard]] auto name() const -> std::string;
    friend auto operator==(const CategoryId&, const CategoryId&) -> bool = default;
};

// Per-category weighted losses and their parameter gradients.
struct LossBreakdown {
    struct Entry {
        CategoryId id;
        double raw_loss = 0.0;  // L-hat_chi, weight already folded in via m
        double lambda = 1.0;
        ParamGrad param_grad;
        long count = 0;
    };
    std::vector<Entry> entries;
};

// (1/N) sum (m_i r_i)^2
auto weighted_mse(const Eigen::VectorXd& residuals, const Eigen::VectorXd& m)
    -> double;

// (1/N) sum (m_i [h_i]_+)^2, a squared hinge, exactly 0 on the feasible set.
auto hinge_loss(const Eigen::VectorXd& h_values, const Eigen::VectorXd& m)
    -> double;

// Optional C-infinity smoothing of the hinge: softplus_delta(h) replaces
// [h]_+ inside the squared penalty.  delta <= 0 selects the squared hinge.
auto hinge_loss_softplus(const Eigen::VectorXd& h_values,
                         const Eigen::VectorXd& m,
                         double delta) -> double;

// sum over categories of lambda_chi * raw_loss_chi
auto total_loss(const LossBreakdown& breakdown) -> double;

// d/dh of the (possibly smoothed) hinge penalty term for one sample,
// excluding the 1/N and m^2 factors: 2*[h]_+ or 2*softplus(h)*sigmoid(h/d).
auto hinge_penalty_derivative(double h, double delta) -> double;
auto hinge_penalty_value(double h, double delta) -> double;

}  // namespace dcpde
