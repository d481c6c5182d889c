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

#include <optional>
#include <vector>

namespace dcpde {

enum class Direction { minimize, maximize };

// A validation-error trajectory sampled at strictly increasing wall times.
struct Trajectory {
    Eigen::VectorXd times;
    Eigen::VectorXd errors;
};

auto rmse(const Eigen::VectorXd& errors) -> double;

// Normalised total variation: sum |e_{i+1}-e_i| / (e_max - e_min + eps).
auto tvn(const Trajectory& traj, double eps = 1e-12) -> double;

// Time-normalised trapezoidal area under (e_max - e(t)) / (range + eps);
// in [0, 1], higher means faster sustained error reduction.
auto nauc(const Trajectory& traj, double eps = 1e-12) -> double;

// Mean hinged constraint magnitude (1/N) sum max(0, h_i).
auto violation_score(const Eigen::VectorXd& h_values) -> double;

auto improvement_pct(double baseline, double value, Direction direction,
                     double eps = 1e-12) -> double;

// First time the error falls to half its initial value (linear
// interpolation); empty if it never does.  Informational.
auto t_half(const Trajectory& traj) -> std::optional<double>;

// Averaged-tie ranks (1 = best/lowest) of one metric column.
auto ranks_with_ties(const Eigen::VectorXd& values) -> Eigen::VectorXd;

// Borda aggregation: per-method sum of per-metric ranks; lower is better.
// rank_matrix is M methods x K metrics.
auto borda(const Eigen::MatrixXd& rank_matrix) -> Eigen::VectorXd;

}  // namespace dcpde
