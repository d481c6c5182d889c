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

#include "dcpde/sampling.hpp"

#include <random>
#include <stdexcept>

namespace dcpde {

auto linspace(double lo, double hi, int count) -> Eigen::VectorXd
{
    if (count < 2) throw std::invalid_argument("linspace: count < 2");
    Eigen::VectorXd out(count);
    for (int i = 0; i < count; ++i)
        out(i) = lo + (hi - lo) * i / (count - 1);
    return out;
}

auto sample_uniform_grid(const std::vector<Interval>& domain,
                         const std::vector<int>& per_axis_counts)
    -> Eigen::MatrixXd
{
    const size_t dim = domain.size();
    if (dim == 0 || per_axis_counts.size() != dim)
        throw std::invalid_argument("sample_uniform_grid: bad axes");
    long total = 1;
    for (int count : per_axis_counts) {
        if (count < 2)
            throw std::invalid_argument("sample_uniform_grid: counts >= 2");
        total *= count;
    }

    Eigen::MatrixXd points(dim, total);
    for (long flat = 0; flat < total; ++flat) {
        long rest = flat;
        // row-major: last axis varies fastest
        for (long axis = static_cast<long>(dim) - 1; axis >= 0; --axis) {
            const int count = per_axis_counts[axis];
            const long idx = rest % count;
            rest /= count;
            const auto& [lo, hi] = domain[axis];
            points(axis, flat) = lo + (hi - lo) * idx / (count - 1);
        }
    }
    return points;
}

auto sample_uniform_random(const std::vector<Interval>& domain, long count,
                           std::uint64_t seed) -> Eigen::MatrixXd
{
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd points(domain.size(), count);
    for (long c = 0; c < count; ++c)
        for (size_t axis = 0; axis < domain.size(); ++axis) {
            std::uniform_real_distribution<double> dist(domain[axis].first,
                                                        domain[axis].second);
            points(axis, c) = dist(rng);
        }
    return points;
}

}  // namespace dcpde
