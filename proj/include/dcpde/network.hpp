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

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace dcpde {

enum class Activation { tanh_ };
enum class OutputTransform { identity, abs, softplus };

// Per-layer weight matrices and bias vectors of a fixed-architecture MLP.
// weights[l] maps layer l inputs (cols) to layer l outputs (rows); the last
// affine layer is followed by output_transform instead of the activation.
struct NetworkParams {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
    Activation activation = Activation::tanh_;
    OutputTransform output_transform = OutputTransform::identity;

    [[nodiscard]] auto input_dim() const -> int
    {
        return static_cast<int>(weights.front().cols());
    }
    [[nodiscard]] auto output_dim() const -> int
    {
        return static_cast<int>(weights.back().rows());
    }
    [[nodiscard]] auto n_layers() const -> int
    {
        return static_cast<int>(weights.size());
    }
    [[nodiscard]] auto n_parameters() const -> long;
};

// Gradient container shape-congruent with NetworkParams.
struct ParamGrad {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;

    static auto zeros_like(const NetworkParams& params) -> ParamGrad;
    auto add_scaled(double factor, const ParamGrad& other) -> void;
    [[nodiscard]] auto mean_abs() const -> double;
    [[nodiscard]] auto all_finite() const -> bool;
};

// Network value plus first and diagonal-second input derivatives at a point.
struct DerivBundle {
    double value = 0.0;
    Eigen::VectorXd grad;       // du/dx_i
    Eigen::VectorXd diag_hess;  // d2u/dx_i2
};

// Column-batched bundles: one column per collocation point.  The same layout
// doubles as the cotangent (dL/d value, dL/d grad, dL/d diag_hess) container
// for the reverse sweep.
struct BatchBundles {
    Eigen::VectorXd value;      // N
    Eigen::MatrixXd grad;       // n_in x N
    Eigen::MatrixXd diag_hess;  // n_in x N
};
using BatchCotangents = BatchBundles;

// Intermediate state of the extended forward pass (primal plus per-direction
// first/second tangent streams), kept so a reverse sweep can produce exact
// parameter gradients of any scalar loss built from the bundles.
struct ForwardTrace {
    // in[l] is the input to affine layer l (in[0] = the batch points);
    // in_t / in_t2 are the matching tangent streams, n_in blocks of N cols.
    std::vector<Eigen::MatrixXd> in, in_t, in_t2;
    // pre[l] is the pre-activation of layer l, with tangent streams.
    std::vector<Eigen::MatrixXd> pre, pre_t, pre_t2;
    bool with_derivs = false;
    int n_in = 0;
    long n_pts = 0;
};

auto init_glorot(const std::vector<int>& layer_sizes, std::uint64_t seed)
    -> NetworkParams;

auto forward(const NetworkParams& params, const Eigen::VectorXd& point)
    -> double;
auto forward_batch(const NetworkParams& params, const Eigen::MatrixXd& points)
    -> Eigen::VectorXd;

auto eval_bundle(const NetworkParams& params, const Eigen::VectorXd& point)
    -> DerivBundle;

// Extended forward pass over a batch of points (columns).  When trace is
// non-null the intermediate state is captured for reverse_batch.  When
// with_derivs is false only values are produced and the grad/diag_hess
// members are left empty.
auto eval_batch(const NetworkParams& params,
                const Eigen::MatrixXd& points,
                ForwardTrace* trace = nullptr,
                bool with_derivs = true) -> BatchBundles;

// Reverse sweep through the extended forward graph: given dL/d(bundles),
// returns dL/d(theta) exactly.
auto reverse_batch(const NetworkParams& params,
                   const ForwardTrace& trace,
                   const BatchCotangents& cotangents) -> ParamGrad;

// loss(bundles, cotangents_out) returns the scalar loss and fills the
// cotangents; the pair (loss value, parameter gradient) is returned.
// Throws std::runtime_error when the loss is non-finite.
using BatchLossFn =
    std::function<double(const BatchBundles&, BatchCotangents&)>;
auto loss_param_grad(const NetworkParams& params,
                     const Eigen::MatrixXd& points,
                     const BatchLossFn& loss) -> std::pair<double, ParamGrad>;

auto save_params(const NetworkParams& params, const std::string& path) -> void;
auto load_params(const std::string& path) -> NetworkParams;

}  // namespace dcpde
