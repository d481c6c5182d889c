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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

using namespace dcpde;

namespace {

auto fd_grad(const NetworkParams& params, const Eigen::VectorXd& point, int axis,
             double step) -> double
{
    Eigen::VectorXd hi = point, lo = point;
    hi(axis) += step;
    lo(axis) -= step;
    return (forward(params, hi) - forward(params, lo)) / (2.0 * step);
}

auto fd_hess(const NetworkParams& params, const Eigen::VectorXd& point, int axis,
             double step) -> double
{
    Eigen::VectorXd hi = point, lo = point;
    hi(axis) += step;
    lo(axis) -= step;
    return (forward(params, hi) - 2.0 * forward(params, point)
            + forward(params, lo))
           / (step * step);
}

// every parameter perturbed by central differences of the given batch loss
auto check_param_grad_fd(const NetworkParams& params_in,
                         const Eigen::MatrixXd& points, const BatchLossFn& loss,
                         double tol) -> void
{
    NetworkParams params = params_in;
    const auto [value, grad] = loss_param_grad(params, points, loss);
    CHECK(std::isfinite(value));
    const double step = 1e-4;
    auto loss_only = [&](const NetworkParams& p) {
        BatchCotangents scratch;
        ForwardTrace trace;
        const BatchBundles bundles = eval_batch(p, points, &trace, true);
        scratch.value = Eigen::VectorXd::Zero(bundles.value.size());
        scratch.grad = Eigen::MatrixXd::Zero(points.rows(), points.cols());
        scratch.diag_hess = scratch.grad;
        return loss(bundles, scratch);
    };
    for (size_t l = 0; l < params.weights.size(); ++l) {
        for (long i = 0; i < params.weights[l].size(); ++i) {
            double& w = params.weights[l].data()[i];
            const double keep = w;
            w = keep + step;
            const double up = loss_only(params);
            w = keep - step;
            const double dn = loss_only(params);
            w = keep;
            const double fd = (up - dn) / (2.0 * step);
            const double an = grad.weights[l].data()[i];
            CHECK(std::abs(an - fd) / (std::abs(fd) + 1e-8) < tol);
        }
        for (long i = 0; i < params.biases[l].size(); ++i) {
            double& b = params.biases[l].data()[i];
            const double keep = b;
            b = keep + step;
            const double up = loss_only(params);
            b = keep - step;
            const double dn = loss_only(params);
            b = keep;
            const double fd = (up - dn) / (2.0 * step);
            const double an = grad.biases[l].data()[i];
            CHECK(std::abs(an - fd) / (std::abs(fd) + 1e-8) < tol);
        }
    }
}

}  // namespace

TEST_CASE("glorot init shapes and determinism")
{
    const auto params = init_glorot({2, 16, 16, 1}, 7);
    REQUIRE(params.n_layers() == 3);
    CHECK(params.input_dim() == 2);
    CHECK(params.output_dim() == 1);
    CHECK(params.weights[0].rows() == 16);
    CHECK(params.weights[0].cols() == 2);
    CHECK(params.weights[2].rows() == 1);
    CHECK(params.n_parameters() == 16 * 2 + 16 + 16 * 16 + 16 + 16 + 1);

    const auto again = init_glorot({2, 16, 16, 1}, 7);
    CHECK(params.weights[1] == again.weights[1]);
    const auto other = init_glorot({2, 16, 16, 1}, 8);
    CHECK(params.weights[1] != other.weights[1]);
}

TEST_CASE("gradient at zero pre-activations is the weight product")
{
    // biases 0 and input 0 keep every tanh at its unit-slope origin
    NetworkParams params = init_glorot({2, 4, 1}, 1);
    for (auto& b : params.biases) b.setZero();
    const Eigen::VectorXd origin = Eigen::VectorXd::Zero(2);
    const auto bundle = eval_bundle(params, origin);
    const Eigen::MatrixXd chain = params.weights[1] * params.weights[0];
    CHECK(bundle.grad(0) == doctest::Approx(chain(0, 0)).epsilon(1e-12));
    CHECK(bundle.grad(1) == doctest::Approx(chain(0, 1)).epsilon(1e-12));
}

TEST_CASE("affine path has zero second derivative")
{
    // zero first-layer weights make the hidden input constant in x
    NetworkParams params = init_glorot({2, 4, 1}, 2);
    params.weights[0].setZero();
    const auto bundle = eval_bundle(params, Eigen::VectorXd::Constant(2, 0.3));
    CHECK(bundle.diag_hess.cwiseAbs().maxCoeff() == 0.0);
    CHECK(bundle.grad.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bundle derivatives match finite differences")
{
    for (const auto transform : {OutputTransform::identity, OutputTransform::abs,
                                 OutputTransform::softplus}) {
        NetworkParams params = init_glorot({2, 12, 12, 1}, 3);
        params.output_transform = transform;
        Eigen::VectorXd point(2);
        point << 0.37, 0.61;
        const auto bundle = eval_bundle(params, point);
        for (int axis = 0; axis < 2; ++axis) {
            const double g = fd_grad(params, point, axis, 1e-4);
            const double h = fd_hess(params, point, axis, 1e-4);
            CHECK(std::abs(bundle.grad(axis) - g) / (std::abs(g) + 1e-8) < 1e-6);
            CHECK(std::abs(bundle.diag_hess(axis) - h) / (std::abs(h) + 1e-8)
                  < 1e-5);
        }
    }
}

TEST_CASE("eval_batch agrees with per-point bundles")
{
    const auto params = init_glorot({3, 8, 1}, 4);
    const Eigen::MatrixXd points = Eigen::MatrixXd::Random(3, 5);
    const auto batch = eval_batch(params, points);
    for (int i = 0; i < 5; ++i) {
        const auto one = eval_bundle(params, points.col(i));
        CHECK(batch.value(i) == doctest::Approx(one.value).epsilon(1e-14));
        CHECK((batch.grad.col(i) - one.grad).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((batch.diag_hess.col(i) - one.diag_hess).cwiseAbs().maxCoeff()
              < 1e-14);
    }
}

TEST_CASE("final-layer scaling is linear with identity transform")
{
    NetworkParams params = init_glorot({2, 8, 1}, 5);
    const Eigen::VectorXd point = Eigen::VectorXd::Constant(2, 0.4);
    const auto base = eval_bundle(params, point);
    params.weights.back() *= 3.0;
    params.biases.back() *= 3.0;
    const auto scaled = eval_bundle(params, point);
    CHECK(scaled.value == doctest::Approx(3.0 * base.value).epsilon(1e-12));
    CHECK((scaled.grad - 3.0 * base.grad).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((scaled.diag_hess - 3.0 * base.diag_hess).cwiseAbs().maxCoeff()
          < 1e-10);
}

TEST_CASE("parameter gradients match finite differences")
{
    const Eigen::MatrixXd points =
        (Eigen::MatrixXd::Random(2, 3).array() * 0.5 + 0.5).matrix();

    SUBCASE("loss = mean value")
    {
        const auto params = init_glorot({2, 8, 1}, 6);
        check_param_grad_fd(params, points,
                            [](const BatchBundles& b, BatchCotangents& cot) {
                                const long n = b.value.size();
                                cot.value.setConstant(1.0 / n);
                                return b.value.mean();
                            },
                            1e-4);
    }
    SUBCASE("loss = mean of diag_hess on a width-8 net")
    {
        const auto params = init_glorot({2, 8, 1}, 7);
        check_param_grad_fd(params, points,
                            [](const BatchBundles& b, BatchCotangents& cot) {
                                const double n = b.diag_hess.size();
                                cot.diag_hess.setConstant(1.0 / n);
                                return b.diag_hess.mean();
                            },
                            1e-4);
    }
    SUBCASE("mixed quadratic loss, 3 hidden layers x width 16")
    {
        NetworkParams params = init_glorot({2, 16, 16, 16, 1}, 8);
        params.output_transform = OutputTransform::softplus;
        check_param_grad_fd(params, points,
                            [](const BatchBundles& b, BatchCotangents& cot) {
                                const long n = b.value.size();
                                double loss = b.value.squaredNorm() / n
                                              + b.grad.squaredNorm() / n
                                              + b.diag_hess.squaredNorm() / n;
                                cot.value = 2.0 / n * b.value;
                                cot.grad = 2.0 / n * b.grad;
                                cot.diag_hess = 2.0 / n * b.diag_hess;
                                return loss;
                            },
                            1e-4);
    }
    SUBCASE("zero loss gives zero gradient")
    {
        const auto params = init_glorot({2, 8, 1}, 9);
        const auto [value, grad] = loss_param_grad(
            params, points, [](const BatchBundles&, BatchCotangents&) {
                return 0.0;
            });
        CHECK(value == 0.0);
        CHECK(grad.mean_abs() == 0.0);
    }
}

TEST_CASE("non-finite loss is rejected")
{
    const auto params = init_glorot({2, 4, 1}, 10);
    const Eigen::MatrixXd points = Eigen::MatrixXd::Random(2, 2);
    CHECK_THROWS_AS(loss_param_grad(params, points,
                                    [](const BatchBundles&, BatchCotangents&) {
                                        return std::nan("");
                                    }),
                    std::runtime_error);
}

TEST_CASE("shape mismatch is rejected")
{
    const auto params = init_glorot({2, 4, 1}, 11);
    const Eigen::MatrixXd wrong = Eigen::MatrixXd::Random(3, 2);
    CHECK_THROWS_AS(eval_batch(params, wrong), std::invalid_argument);
}

TEST_CASE("save and load round-trip")
{
    NetworkParams params = init_glorot({2, 8, 8, 1}, 12);
    params.output_transform = OutputTransform::softplus;
    const auto path = std::filesystem::temp_directory_path() / "dcpde_net.txt";
    save_params(params, path.string());
    const auto loaded = load_params(path.string());
    REQUIRE(loaded.n_layers() == params.n_layers());
    CHECK(loaded.output_transform == params.output_transform);
    for (int l = 0; l < params.n_layers(); ++l) {
        CHECK((loaded.weights[l] - params.weights[l]).cwiseAbs().maxCoeff()
              == 0.0);
        CHECK((loaded.biases[l] - params.biases[l]).cwiseAbs().maxCoeff()
              == 0.0);
    }
    std::filesystem::remove(path);
}

TEST_CASE("determinism of repeated evaluation")
{
    const auto params = init_glorot({2, 16, 1}, 13);
    const Eigen::MatrixXd points = Eigen::MatrixXd::Random(2, 7);
    const auto a = eval_batch(params, points);
    const auto b = eval_batch(params, points);
    CHECK(a.value == b.value);
    CHECK(a.grad == b.grad);
    CHECK(a.diag_hess == b.diag_hess);
}
