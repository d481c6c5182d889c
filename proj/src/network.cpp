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

#include "dcpde/network.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dcpde {

namespace {

using Arr = Eigen::ArrayXXd;

// Elementwise derivatives of the hidden activation, computed from the
// activation output a = tanh(z).
auto act_d1(const Arr& a) -> Arr { return 1.0 - a.square(); }
auto act_d2(const Arr& a, const Arr& d1) -> Arr { return -2.0 * a * d1; }
auto act_d3(const Arr& a, const Arr& d1) -> Arr
{
    return -2.0 * d1 * (1.0 - 3.0 * a.square());
}

// Output transform g and its first three derivatives, elementwise on a row.
struct TransformDerivs {
    Eigen::ArrayXd g, g1, g2, g3;
};

auto transform_derivs(OutputTransform transform, const Eigen::ArrayXd& z)
    -> TransformDerivs
{
    TransformDerivs out;
    const auto n = z.size();
    switch (transform) {
    case OutputTransform::identity:
        out.g = z;
        out.g1 = Eigen::ArrayXd::Ones(n);
        out.g2 = Eigen::ArrayXd::Zero(n);
        out.g3 = Eigen::ArrayXd::Zero(n);
        break;
    case OutputTransform::abs:
        out.g = z.abs();
        // derivative at exactly 0 defined as 0
        out.g1 = z.sign();
        out.g2 = Eigen::ArrayXd::Zero(n);
        out.g3 = Eigen::ArrayXd::Zero(n);
        break;
    case OutputTransform::softplus: {
        out.g = (z > 0.0).select(z + (-z).exp().log1p(), z.exp().log1p());
        const Eigen::ArrayXd s = 0.5 * (1.0 + (0.5 * z).tanh());  // sigmoid
        out.g1 = s;
        out.g2 = s * (1.0 - s);
        out.g3 = out.g2 * (1.0 - 2.0 * s);
        break;
    }
    }
    return out;
}

auto check_architecture(const NetworkParams& params) -> void
{
    if (params.weights.empty() || params.weights.size() != params.biases.size())
        throw std::invalid_argument("network: inconsistent layer lists");
    for (size_t l = 0; l + 1 < params.weights.size(); ++l)
        if (params.weights[l + 1].cols() != params.weights[l].rows())
            throw std::invalid_argument(
                "network: adjacent layer dimensions do not compose");
}

}  // namespace

auto NetworkParams::n_parameters() const -> long
{
    long n = 0;
    for (size_t l = 0; l < weights.size(); ++l)
        n += weights[l].size() + biases[l].size();
    return n;
}

auto ParamGrad::zeros_like(const NetworkParams& params) -> ParamGrad
{
    ParamGrad grad;
    grad.weights.reserve(params.weights.size());
    grad.biases.reserve(params.biases.size());
    for (size_t l = 0; l < params.weights.size(); ++l) {
        grad.weights.emplace_back(Eigen::MatrixXd::Zero(
            params.weights[l].rows(), params.weights[l].cols()));
        grad.biases.emplace_back(
            Eigen::VectorXd::Zero(params.biases[l].size()));
    }
    return grad;
}

auto ParamGrad::add_scaled(double factor, const ParamGrad& other) -> void
{
    for (size_t l = 0; l < weights.size(); ++l) {
        weights[l] += factor * other.weights[l];
        biases[l] += factor * other.biases[l];
    }
}

auto ParamGrad::mean_abs() const -> double
{
    double sum = 0.0;
    long count = 0;
    for (size_t l = 0; l < weights.size(); ++l) {
        sum += weights[l].cwiseAbs().sum() + biases[l].cwiseAbs().sum();
        count += weights[l].size() + biases[l].size();
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

auto ParamGrad::all_finite() const -> bool
{
    for (size_t l = 0; l < weights.size(); ++l)
        if (!weights[l].allFinite() || !biases[l].allFinite()) return false;
    return true;
}

auto init_glorot(const std::vector<int>& layer_sizes, std::uint64_t seed)
    -> NetworkParams
{
    if (layer_sizes.size() < 3)
        throw std::invalid_argument("init_glorot: need at least 3 layer sizes");
    for (int size : layer_sizes)
        if (size <= 0)
            throw std::invalid_argument("init_glorot: non-positive layer size");

    std::mt19937_64 rng(seed);
    NetworkParams params;
    for (size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const int fan_in = layer_sizes[l];
        const int fan_out = layer_sizes[l + 1];
        const double stddev = std::sqrt(2.0 / (fan_in + fan_out));
        std::normal_distribution<double> dist(0.0, stddev);
        Eigen::MatrixXd weight(fan_out, fan_in);
        for (int r = 0; r < fan_out; ++r)
            for (int c = 0; c < fan_in; ++c) weight(r, c) = dist(rng);
        params.weights.push_back(std::move(weight));
        params.biases.emplace_back(Eigen::VectorXd::Zero(fan_out));
    }
    return params;
}

auto eval_batch(const NetworkParams& params,
                const Eigen::MatrixXd& points,
                ForwardTrace* trace,
                bool with_derivs) -> BatchBundles
{
    check_architecture(params);
    const int n_in = params.input_dim();
    if (points.rows() != n_in)
        throw std::invalid_argument("eval_batch: point dimension mismatch");
    if (params.output_dim() != 1)
        throw std::invalid_argument("eval_batch: scalar output required");

    const long n_pts = points.cols();
    const int n_layers = params.n_layers();

    ForwardTrace local;
    ForwardTrace& tr = trace != nullptr ? *trace : local;
    tr = ForwardTrace{};
    tr.with_derivs = with_derivs;
    tr.n_in = n_in;
    tr.n_pts = n_pts;
    tr.in.resize(n_layers);
    tr.pre.resize(n_layers);
    if (with_derivs) {
        tr.in_t.resize(n_layers);
        tr.in_t2.resize(n_layers);
        tr.pre_t.resize(n_layers);
        tr.pre_t2.resize(n_layers);
    }

    tr.in[0] = points;
    if (with_derivs) {
        // seed tangents: direction block i carries e_i; second tangents zero
        tr.in_t[0] = Eigen::MatrixXd::Zero(n_in, n_in * n_pts);
        for (int i = 0; i < n_in; ++i)
            tr.in_t[0].block(i, i * n_pts, 1, n_pts).setOnes();
        tr.in_t2[0] = Eigen::MatrixXd::Zero(n_in, n_in * n_pts);
    }

    for (int l = 0; l < n_layers; ++l) {
        tr.pre[l].noalias() = params.weights[l] * tr.in[l];
        tr.pre[l].colwise() += params.biases[l];
        if (with_derivs) {
            tr.pre_t[l].noalias() = params.weights[l] * tr.in_t[l];
            tr.pre_t2[l].noalias() = params.weights[l] * tr.in_t2[l];
        }
        if (l + 1 == n_layers) break;

        const Arr a = tr.pre[l].array().tanh();
        tr.in[l + 1] = a.matrix();
        if (with_derivs) {
            const Arr d1 = act_d1(a);
            const Arr d2 = act_d2(a, d1);
            tr.in_t[l + 1].resize(a.rows(), n_in * n_pts);
            tr.in_t2[l + 1].resize(a.rows(), n_in * n_pts);
            for (int i = 0; i < n_in; ++i) {
                const auto tz = tr.pre_t[l].middleCols(i * n_pts, n_pts).array();
                const auto sz =
                    tr.pre_t2[l].middleCols(i * n_pts, n_pts).array();
                tr.in_t[l + 1].middleCols(i * n_pts, n_pts) = (d1 * tz).matrix();
                tr.in_t2[l + 1].middleCols(i * n_pts, n_pts) =
                    (d2 * tz.square() + d1 * sz).matrix();
            }
        }
    }

    const Eigen::ArrayXd z_out = tr.pre[n_layers - 1].row(0).transpose();
    const TransformDerivs tf = transform_derivs(params.output_transform, z_out);

    BatchBundles out;
    out.value = tf.g.matrix();
    if (with_derivs) {
        out.grad.resize(n_in, n_pts);
        out.diag_hess.resize(n_in, n_pts);
        for (int i = 0; i < n_in; ++i) {
            const Eigen::ArrayXd tau =
                tr.pre_t[n_layers - 1].middleCols(i * n_pts, n_pts).row(0)
                    .transpose();
            const Eigen::ArrayXd sig =
                tr.pre_t2[n_layers - 1].middleCols(i * n_pts, n_pts).row(0)
                    .transpose();
            out.grad.row(i) = (tf.g1 * tau).matrix().transpose();
            out.diag_hess.row(i) =
                (tf.g2 * tau.square() + tf.g1 * sig).matrix().transpose();
        }
    }
    return out;
}

auto reverse_batch(const NetworkParams& params,
                   const ForwardTrace& tr,
                   const BatchCotangents& cot) -> ParamGrad
{
    const int n_layers = params.n_layers();
    const int n_in = tr.n_in;
    const long n_pts = tr.n_pts;
    const bool derivs = tr.with_derivs && cot.grad.size() > 0;

    ParamGrad grad = ParamGrad::zeros_like(params);

    // adjoint of the output transform
    const Eigen::ArrayXd z_out = tr.pre[n_layers - 1].row(0).transpose();
    const TransformDerivs tf = transform_derivs(params.output_transform, z_out);
    const Eigen::ArrayXd ubar =
        cot.value.size() > 0 ? Eigen::ArrayXd(cot.value.array())
                             : Eigen::ArrayXd::Zero(n_pts);

    Eigen::MatrixXd pre_bar(1, n_pts);
    Eigen::MatrixXd pre_t_bar, pre_t2_bar;
    Eigen::ArrayXd zbar = ubar * tf.g1;
    if (derivs) {
        pre_t_bar.resize(1, n_in * n_pts);
        pre_t2_bar.resize(1, n_in * n_pts);
        for (int i = 0; i < n_in; ++i) {
            const Eigen::ArrayXd tau =
                tr.pre_t[n_layers - 1].middleCols(i * n_pts, n_pts).row(0)
                    .transpose();
            const Eigen::ArrayXd sig =
                tr.pre_t2[n_layers - 1].middleCols(i * n_pts, n_pts).row(0)
                    .transpose();
            const Eigen::ArrayXd gbar = cot.grad.row(i).transpose();
            const Eigen::ArrayXd hbar = cot.diag_hess.row(i).transpose();
            zbar += gbar * tf.g2 * tau + hbar * (tf.g3 * tau.square() + tf.g2 * sig);
            pre_t_bar.middleCols(i * n_pts, n_pts).row(0) =
                (gbar * tf.g1 + 2.0 * hbar * tf.g2 * tau).matrix().transpose();
            pre_t2_bar.middleCols(i * n_pts, n_pts).row(0) =
                (hbar * tf.g1).matrix().transpose();
        }
    }
    pre_bar.row(0) = zbar.matrix().transpose();

    for (int l = n_layers - 1; l >= 0; --l) {
        grad.weights[l].noalias() = pre_bar * tr.in[l].transpose();
        if (derivs) {
            grad.weights[l].noalias() += pre_t_bar * tr.in_t[l].transpose();
            grad.weights[l].noalias() += pre_t2_bar * tr.in_t2[l].transpose();
        }
        grad.biases[l] = pre_bar.rowwise().sum();
        if (l == 0) break;

        // propagate to the previous layer's activation outputs
        const Eigen::MatrixXd act_bar = params.weights[l].transpose() * pre_bar;
        Eigen::MatrixXd act_t_bar, act_t2_bar;
        if (derivs) {
            act_t_bar.noalias() = params.weights[l].transpose() * pre_t_bar;
            act_t2_bar.noalias() = params.weights[l].transpose() * pre_t2_bar;
        }

        // adjoint of the activation stage of layer l-1
        const Arr a = tr.in[l].array();
        const Arr d1 = act_d1(a);
        Arr z_bar_arr = act_bar.array() * d1;
        if (derivs) {
            const Arr d2 = act_d2(a, d1);
            const Arr d3 = act_d3(a, d1);
            pre_t_bar.resize(a.rows(), n_in * n_pts);
            pre_t2_bar.resize(a.rows(), n_in * n_pts);
            for (int i = 0; i < n_in; ++i) {
                const auto tz =
                    tr.pre_t[l - 1].middleCols(i * n_pts, n_pts).array();
                const auto sz =
                    tr.pre_t2[l - 1].middleCols(i * n_pts, n_pts).array();
                const auto ta_bar =
                    act_t_bar.middleCols(i * n_pts, n_pts).array();
                const auto sa_bar =
                    act_t2_bar.middleCols(i * n_pts, n_pts).array();
                z_bar_arr += ta_bar * d2 * tz + sa_bar * (d3 * tz.square() + d2 * sz);
                pre_t_bar.middleCols(i * n_pts, n_pts) =
                    (ta_bar * d1 + 2.0 * sa_bar * d2 * tz).matrix();
                pre_t2_bar.middleCols(i * n_pts, n_pts) = (sa_bar * d1).matrix();
            }
        }
        pre_bar = z_bar_arr.matrix();
    }
    return grad;
}

auto forward_batch(const NetworkParams& params, const Eigen::MatrixXd& points)
    -> Eigen::VectorXd
{
    return eval_batch(params, points, nullptr, false).value;
}

auto forward(const NetworkParams& params, const Eigen::VectorXd& point)
    -> double
{
    return forward_batch(params, point)(0);
}

auto eval_bundle(const NetworkParams& params, const Eigen::VectorXd& point)
    -> DerivBundle
{
    const BatchBundles batch = eval_batch(params, point, nullptr, true);
    DerivBundle bundle;
    bundle.value = batch.value(0);
    bundle.grad = batch.grad.col(0);
    bundle.diag_hess = batch.diag_hess.col(0);
    return bundle;
}

auto loss_param_grad(const NetworkParams& params,
                     const Eigen::MatrixXd& points,
                     const BatchLossFn& loss) -> std::pair<double, ParamGrad>
{
    ForwardTrace trace;
    const BatchBundles bundles = eval_batch(params, points, &trace, true);
    BatchCotangents cot;
    cot.value = Eigen::VectorXd::Zero(points.cols());
    cot.grad = Eigen::MatrixXd::Zero(points.rows(), points.cols());
    cot.diag_hess = Eigen::MatrixXd::Zero(points.rows(), points.cols());
    const double value = loss(bundles, cot);
    if (!std::isfinite(value))
        throw std::runtime_error("loss_param_grad: non-finite loss");
    return { value, reverse_batch(params, trace, cot) };
}

namespace {
constexpr const char* kModelMagic = "DCPDE1";

auto transform_name(OutputTransform transform) -> const char*
{
    switch (transform) {
    case OutputTransform::identity: return "identity";
    case OutputTransform::abs: return "abs";
    case OutputTransform::softplus: return "softplus";
    }
    return "identity";
}

auto transform_from_name(const std::string& name) -> OutputTransform
{
    if (name == "identity") return OutputTransform::identity;
    if (name == "abs") return OutputTransform::abs;
    if (name == "softplus") return OutputTransform::softplus;
    throw std::runtime_error("unknown output transform: " + name);
}
}  // namespace

auto save_params(const NetworkParams& params, const std::string& path) -> void
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out.precision(17);
    out << kModelMagic << "\n";
    out << params.n_layers() + 1;
    out << " " << params.input_dim();
    for (const auto& weight : params.weights) out << " " << weight.rows();
    out << "\n";
    out << "tanh " << transform_name(params.output_transform) << "\n";
    for (size_t l = 0; l < params.weights.size(); ++l) {
        const auto& weight = params.weights[l];
        for (int r = 0; r < weight.rows(); ++r)
            for (int c = 0; c < weight.cols(); ++c)
                out << weight(r, c) << "\n";
        for (int r = 0; r < params.biases[l].size(); ++r)
            out << params.biases[l](r) << "\n";
    }
}

auto load_params(const std::string& path) -> NetworkParams
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read model file: " + path);
    std::string magic;
    in >> magic;
    if (magic != kModelMagic)
        throw std::runtime_error("bad model file magic: " + magic);
    int n_sizes = 0;
    in >> n_sizes;
    std::vector<int> sizes(n_sizes);
    for (int& size : sizes) in >> size;
    std::string act, transform;
    in >> act >> transform;
    if (act != "tanh") throw std::runtime_error("unknown activation: " + act);

    NetworkParams params;
    params.output_transform = transform_from_name(transform);
    for (int l = 0; l + 1 < n_sizes; ++l) {
        Eigen::MatrixXd weight(sizes[l + 1], sizes[l]);
        for (int r = 0; r < weight.rows(); ++r)
            for (int c = 0; c < weight.cols(); ++c) in >> weight(r, c);
        Eigen::VectorXd bias(sizes[l + 1]);
        for (int r = 0; r < bias.size(); ++r) in >> bias(r);
        params.weights.push_back(std::move(weight));
        params.biases.push_back(std::move(bias));
    }
    if (!in) throw std::runtime_error("truncated model file: " + path);
    return params;
}

}  // namespace dcpde
