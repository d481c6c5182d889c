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

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace dcpde;

namespace {

auto vec(std::initializer_list<double> vals) -> Eigen::VectorXd
{
    Eigen::VectorXd v(static_cast<long>(vals.size()));
    long i = 0;
    for (double x : vals) v(i++) = x;
    return v;
}

auto traj(std::initializer_list<double> times,
          std::initializer_list<double> errors) -> Trajectory
{
    return {vec(times), vec(errors)};
}

constexpr double kTol = 1e-9;

}  // namespace

TEST_CASE("rmse")
{
    CHECK(std::abs(rmse(vec({3, 4})) - std::sqrt(12.5)) < kTol);
    CHECK(rmse(vec({0, 0, 0})) == 0.0);
    CHECK(rmse(vec({-2.5})) == 2.5);
    CHECK_THROWS_AS(rmse(Eigen::VectorXd()), std::invalid_argument);
}

TEST_CASE("total variation, normalised")
{
    CHECK(std::abs(tvn(traj({0, 1, 2}, {1.0, 0.5, 0.2})) - 1.0) < kTol);
    CHECK(std::abs(tvn(traj({0, 1, 2}, {1.0, 0.5, 0.7})) - 1.4) < kTol);
    CHECK(tvn(traj({0, 1, 2}, {0.3, 0.3, 0.3})) == 0.0);

    // any strictly monotone trajectory has tvn = 1 up to the eps term
    CHECK(std::abs(tvn(traj({0, 1, 2, 3}, {9, 5, 4, 0.5})) - 1.0) < 1e-9);
}

TEST_CASE("normalised area under the error curve")
{
    CHECK(nauc(traj({0, 1}, {2.0, 2.0})) == 0.0);
    CHECK(std::abs(nauc(traj({0, 1}, {1.0, 0.0})) - 0.5) < kTol);
    // instant drop then flat
    CHECK(nauc(traj({0, 1e-9, 1}, {1.0, 0.0, 0.0})) > 0.999);
    // always inside [0, 1]
    const auto wiggly = traj({0, 1, 2, 3, 4}, {1.0, 0.2, 0.8, 0.1, 0.4});
    CHECK(nauc(wiggly) >= 0.0);
    CHECK(nauc(wiggly) <= 1.0);
}

TEST_CASE("violation score")
{
    CHECK(violation_score(vec({-1, -2, 0})) == 0.0);
    CHECK(std::abs(violation_score(vec({-1, 2})) - 1.0) < kTol);
    CHECK(std::abs(violation_score(vec({0.5})) - 0.5) < kTol);
    CHECK_THROWS_AS(violation_score(Eigen::VectorXd()), std::invalid_argument);
}

TEST_CASE("improvement percentage")
{
    CHECK(std::abs(improvement_pct(0.013, 0.002, Direction::minimize)
                   - 100.0 * 0.011 / 0.013)
          < kTol);
    CHECK(improvement_pct(0.4, 0.4, Direction::minimize) == 0.0);
    CHECK(improvement_pct(0.4, 0.4, Direction::maximize) == 0.0);
    CHECK(std::abs(improvement_pct(0.5, 1.0, Direction::maximize) - 100.0)
          < kTol);
    CHECK(improvement_pct(0.5, 1.0, Direction::minimize) < 0.0);
}

TEST_CASE("time to half error")
{
    const auto t = t_half(traj({0, 1, 2}, {1.0, 0.75, 0.25}));
    REQUIRE(t.has_value());
    CHECK(std::abs(*t - 1.5) < kTol);
    CHECK_FALSE(t_half(traj({0, 1}, {1.0, 0.9})).has_value());
}

TEST_CASE("ranks with averaged ties")
{
    const auto plain = ranks_with_ties(vec({0.3, 0.1, 0.2}));
    CHECK(plain(0) == 3.0);
    CHECK(plain(1) == 1.0);
    CHECK(plain(2) == 2.0);

    const auto tied = ranks_with_ties(vec({0.5, 0.2, 0.2}));
    CHECK(tied(0) == 3.0);
    CHECK(tied(1) == 1.5);
    CHECK(tied(2) == 1.5);
}

TEST_CASE("borda aggregation")
{
    Eigen::MatrixXd one(3, 1);
    one << 1, 2, 3;
    const auto single = borda(one);
    CHECK(single(0) == 1.0);
    CHECK(single(2) == 3.0);

    Eigen::MatrixXd reversed(2, 2);
    reversed << 1, 2, 2, 1;
    const auto sym = borda(reversed);
    CHECK(sym(0) == 3.0);
    CHECK(sym(1) == 3.0);

    Eigen::MatrixXd tied(2, 1);
    tied << 1.5, 1.5;
    const auto both = borda(tied);
    CHECK(both(0) == 1.5);
    CHECK(both(1) == 1.5);
}
