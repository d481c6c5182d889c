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
#include "dcpde/oracles.hpp"
#include "dcpde/sampling.hpp"

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace dcpde {

// Linear functional of the bundle entries with point-dependent coefficients,
// precomputed for a fixed batch.  Covers every residual and inequality
// operator of the implemented benchmarks.
struct BatchLinOp {
    Eigen::VectorXd c_const;  // N (size 0 means zero)
    Eigen::VectorXd c_value;  // N
    Eigen::MatrixXd c_grad;   // n_in x N
    Eigen::MatrixXd c_hess;   // n_in x N

    [[nodiscard]] auto apply(const BatchBundles& bundles) const
        -> Eigen::VectorXd;
    // cot += (d op / d bundle)^T * weight_per_point
    auto accumulate_cotangent(const Eigen::VectorXd& weight_per_point,
                              BatchCotangents& cot) const -> void;
};

struct Inequality {
    std::string name;          // "h_xx", "h_t", "h_x", ...
    BatchLinOp op;             // h <= 0 feasible, on the interior batch
};

// Batched network evaluator handed to validation closures; applies the
// hard-boundary wrapper when one is active.
using BatchEval =
    std::function<BatchBundles(const Eigen::MatrixXd& points, bool with_derivs)>;

// Fully materialised benchmark instance: fixed collocation batches,
// precomputed operator coefficients, and a validation closure.
struct ProblemData {
    std::string name;
    int input_dim = 2;
    std::vector<int> default_hidden;
    OutputTransform transform = OutputTransform::identity;
    std::vector<Interval> domain;  // per input coordinate

    Eigen::MatrixXd data_points;
    Eigen::VectorXd data_targets;
    Eigen::MatrixXd boundary_points;
    Eigen::VectorXd boundary_targets;
    Eigen::MatrixXd interior_points;

    BatchLinOp residual_op;
    std::vector<Inequality> inequalities;

    // hard Dirichlet enforcement u = box(psi) * g(x); heat only
    bool supports_hard_boundary = false;
    double box_min = 0.0, box_max = 1.0;
    std::function<void(const Eigen::MatrixXd& pts, Eigen::VectorXd& g,
                       Eigen::MatrixXd& g_grad, Eigen::MatrixXd& g_hess)>
        hard_multiplier;

    std::function<std::map<std::string, double>(const BatchEval&)> validate;

    std::vector<LVObservation> lv_dataset;  // lv only
};

struct ProblemConfig {
    int interior_per_axis = 0;    // 0 -> problem default
    int boundary_points = 1001;
    int validation_per_axis = 0;  // 0 -> problem default
    int dim = 1;                  // heat_nd
    long fixed_collocation = 0;   // heat_nd: random interior points instead of a grid
    double lambda_diff = 0.1;
    // local volatility
    LVParams lv;
    MCConfig mc;
    long n_observations = 1000;
    std::uint64_t data_seed = 12345;
    std::string dataset_cache;    // read if present, else generated (and written)
    bool lv_lower_bound = false;  // optional fourth no-arbitrage inequality
};

auto make_problem(const std::string& name, const ProblemConfig& cfg)
    -> ProblemData;
auto known_problems() -> std::vector<std::string>;

// Pointwise operator forms used by the batch builders and the tests.
auto heat_residual(const DerivBundle& bundle, double lambda_diff) -> double;
auto heat_inequalities(const DerivBundle& bundle) -> Eigen::VectorXd;
auto heat_nd_residual(const DerivBundle& bundle, double lambda_diff, int d)
    -> double;
auto dupire_residual(const Eigen::VectorXd& point, const DerivBundle& bundle,
                     const std::function<double(double, double)>& sigma,
                     double rate) -> double;
auto no_arb_inequalities(const DerivBundle& bundle) -> Eigen::VectorXd;

}  // namespace dcpde
