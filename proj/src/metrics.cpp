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

#include "dcpde/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dcpde {

namespace {
auto check_trajectory(const Trajectory& traj) -> void
{
    if (traj.times.size() != traj.errors.size() || traj.times.size() < 2)
        throw std::invalid_argument("trajectory needs >= 2 matched samples");
    for (long i = 1; i < traj.times.size(); ++i)
        if (traj.times(i) <= traj.times(i - 1))
            throw std::invalid_argument("trajectory times must increase");
}
}  // namespace

auto rmse(const Eigen::VectorXd& errors) -> double
{
    if (errors.size() == 0) throw std::invalid_argument("rmse: empty input");
    return std::sqrt(errors.array().square().mean());
}

auto tvn(const Trajectory& traj, double eps) -> double
{
    check_trajectory(traj);
    const double range =
        traj.errors.maxCoeff() - traj.errors.minCoeff();
    double variation = 0.0;
    for (long i = 1; i < traj.errors.size(); ++i)
        variation += std::abs(traj.errors(i) - traj.errors(i - 1));
    return variation / (range + eps);
}

auto nauc(const Trajectory& traj, double eps) -> double
{
    check_trajectory(traj);
    const double e_max = traj.errors.maxCoeff();
    const double range = e_max - traj.errors.minCoeff();
    double area = 0.0;
    for (long i = 1; i < traj.times.size(); ++i) {
        const double left = (e_max - traj.errors(i - 1)) / (range + eps);
        const double right = (e_max - traj.errors(i)) / (range + eps);
        area += 0.5 * (left + right) * (traj.times(i) - traj.times(i - 1));
    }
    const double span = traj.times(traj.times.size() - 1) - traj.times(0);
    return area / (span + eps);
}

auto violation_score(const Eigen::VectorXd& h_values) -> double
{
    if (h_values.size() == 0)
        throw std::invalid_argument("violation_score: empty input");
    return h_values.array().max(0.0).mean();
}

auto improvement_pct(double baseline, double value, Direction direction,
                     double eps) -> double
{
    const double denom = std::max(baseline, eps);
    return direction == Direction::minimize
               ? 100.0 * (baseline - value) / denom
               : 100.0 * (value - baseline) / denom;
}

auto t_half(const Trajectory& traj) -> std::optional<double>
{
    check_trajectory(traj);
    const double target = 0.5 * traj.errors(0);
    for (long i = 1; i < traj.errors.size(); ++i) {
        if (traj.errors(i) <= target) {
            const double e0 = traj.errors(i - 1);
            const double e1 = traj.errors(i);
            if (e0 == e1) return traj.times(i);
            const double frac = (e0 - target) / (e0 - e1);
            return traj.times(i - 1) +
                   frac * (traj.times(i) - traj.times(i - 1));
        }
    }
    return std::nullopt;
}

auto ranks_with_ties(const Eigen::VectorXd& values) -> Eigen::VectorXd
{
    const long n = values.size();
    std::vector<long> order(n);
    std::iota(order.begin(), order.end(), 0L);
    std::sort(order.begin(), order.end(),
              [&](long a, long b) { return values(a) < values(b); });

    Eigen::VectorXd ranks(n);
    long i = 0;
    while (i < n) {
        long j = i;
        while (j + 1 < n && values(order[j + 1]) == values(order[i])) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (long k = i; k <= j; ++k) ranks(order[k]) = avg;
        i = j + 1;
    }
    return ranks;
}

auto borda(const Eigen::MatrixXd& rank_matrix) -> Eigen::VectorXd
{
    if (rank_matrix.size() == 0)
        throw std::invalid_argument("borda: empty rank matrix");
    return rank_matrix.rowwise().sum();
}

}  // namespace dcpde
