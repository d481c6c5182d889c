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

#include "dcpde/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace dcpde {

auto CategoryId::name() const -> std::string
{
    switch (kind) {
    case Kind::data: return "0";
    case Kind::boundary: return "b";
    case Kind::residual: return "f";
    case Kind::inequality: return "h" + std::to_string(ineq_index + 1);
    }
    return "?";
}

namespace {
auto check_lengths(const Eigen::VectorXd& values, const Eigen::VectorXd& m)
    -> void
{
    if (values.size() == 0) throw std::invalid_argument("empty batch");
    if (values.size() != m.size())
        throw std::invalid_argument("residual/weight length mismatch");
}
}  // namespace

auto weighted_mse(const Eigen::VectorXd& residuals, const Eigen::VectorXd& m)
    -> double
{
    check_lengths(residuals, m);
    return (m.array() * residuals.array()).square().mean();
}

auto hinge_loss(const Eigen::VectorXd& h_values, const Eigen::VectorXd& m)
    -> double
{
    check_lengths(h_values, m);
    return (m.array() * h_values.array().max(0.0)).square().mean();
}

auto hinge_loss_softplus(const Eigen::VectorXd& h_values,
                         const Eigen::VectorXd& m,
                         double delta) -> double
{
    if (delta <= 0.0) return hinge_loss(h_values, m);
    check_lengths(h_values, m);
    double sum = 0.0;
    for (long i = 0; i < h_values.size(); ++i) {
        const double sp = hinge_penalty_value(h_values(i), delta);
        sum += (m(i) * sp) * (m(i) * sp);
    }
    return sum / static_cast<double>(h_values.size());
}

auto hinge_penalty_value(double h, double delta) -> double
{
    if (delta <= 0.0) return std::max(0.0, h);
    const double x = h / delta;
    // delta * log(1 + e^x), overflow-safe
    return x > 0.0 ? h + delta * std::log1p(std::exp(-x))
                   : delta * std::log1p(std::exp(x));
}

auto hinge_penalty_derivative(double h, double delta) -> double
{
    if (delta <= 0.0) return 2.0 * std::max(0.0, h);
    const double sp = hinge_penalty_value(h, delta);
    const double sigmoid = 1.0 / (1.0 + std::exp(-h / delta));
    return 2.0 * sp * sigmoid;
}

auto total_loss(const LossBreakdown& breakdown) -> double
{
    double total = 0.0;
    for (const auto& entry : breakdown.entries) {
        if (entry.lambda < 0.0)
            throw std::invalid_argument("total_loss: negative lambda");
        total += entry.lambda * entry.raw_loss;
    }
    return total;
}

}  // namespace dcpde
