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
#include <utility>
#include <vector>

namespace dcpde {

using Interval = std::pair<double, double>;

// Tensor-product grid over a box, endpoints included, row-major ordering
// (last axis fastest).  Columns are points.
auto sample_uniform_grid(const std::vector<Interval>& domain,
                         const std::vector<int>& per_axis_counts)
    -> Eigen::MatrixXd;

// count points uniform in [lo, hi], endpoints included.
auto linspace(double lo, double hi, int count) -> Eigen::VectorXd;

// Uniform random points inside a box, deterministic per seed.
auto sample_uniform_random(const std::vector<Interval>& domain, long count,
                           std::uint64_t seed) -> Eigen::MatrixXd;

}  // namespace dcpde
