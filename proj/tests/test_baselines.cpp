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

#include "dcpde/baselines.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace dcpde;

namespace {

auto breakdown(double l0, double lf, double lh) -> LossBreakdown
{
    LossBreakdown bd;
    LossBreakdown::Entry data;
    data.id = {CategoryId::Kind::data};
    data.raw_loss = l0;
    LossBreakdown::Entry res;
    res.id = {CategoryId::Kind::residual};
    res.raw_loss = lf;
    LossBreakdown::Entry ineq;
    ineq.id = {CategoryId::Kind::inequality, 0};
    ineq.raw_loss = lh;
    bd.entries = {data, res, ineq};
    return bd;
}

}  // namespace

TEST_CASE("hard box transform")
{
    CHECK(hard_box(0.0, -2.0, 3.0) == -2.0);
    CHECK(hard_box(1.0, -2.0, 3.0) == 3.0);
    CHECK(hard_box(0.5, 0.0, 2.0) == 1.0);
    CHECK_THROWS_AS(hard_box(0.5, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("penalty homotopy")
{
    CHECK(penalty_step(1.0, 2.0) == 2.0);
    double lam = 1.0;
    for (int i = 0; i < 3; ++i) lam = penalty_step(lam, 2.0);
    CHECK(lam == 8.0);
    CHECK_THROWS_AS(penalty_step(1.0, 1.0), std::invalid_argument);

    // i compositions equal lambda0 * beta^i exactly
    double acc = 0.5;
    for (int i = 0; i < 10; ++i) acc = penalty_step(acc, 1.5);
    CHECK(acc == doctest::Approx(0.5 * std::pow(1.5, 10)).epsilon(1e-14));
}

TEST_CASE("augmented lagrangian objective")
{
    OuterLoopState state;
    state.mu_f = Eigen::VectorXd::Zero(2);
    state.mu_h = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd f(2), h(2);
    f << 0.1, -0.2;
    h << -1.0, -0.5;

    SUBCASE("zero duals reduce to the penalized objective")
    {
        state.penalty = 1.0;
        CHECK(al_objective(breakdown(0.3, 0.4, 0.2), state, f, h)
              == doctest::Approx(0.9).epsilon(1e-14));
    }
    SUBCASE("feasible h contributes nothing through mu_h")
    {
        state.mu_h = Eigen::VectorXd::Constant(2, 5.0);
        state.penalty = 1.0;
        CHECK(al_objective(breakdown(0.3, 0.4, 0.0), state, f, h)
              == doctest::Approx(0.7).epsilon(1e-14));
    }
    SUBCASE("dot products")
    {
        OuterLoopState s;
        s.penalty = 0.0;
        s.mu_f = Eigen::VectorXd::Constant(1, 1.0);
        s.mu_h = Eigen::VectorXd::Constant(1, 2.0);
        Eigen::VectorXd f1(1), h1(1);
        f1 << 0.3;
        h1 << 0.5;
        CHECK(al_objective(breakdown(0.0, 9.0, 9.0), s, f1, h1)
              == doctest::Approx(1.3).epsilon(1e-14));
    }
    SUBCASE("length mismatch")
    {
        Eigen::VectorXd wrong(3);
        wrong.setZero();
        CHECK_THROWS_AS(al_objective(breakdown(0, 0, 0), state, wrong, h),
                        std::invalid_argument);
    }
}

TEST_CASE("dual updates")
{
    OuterLoopState state;
    state.penalty = 1.0;
    state.growth = 2.0;
    state.mu_f = Eigen::VectorXd::Zero(2);
    state.mu_h = Eigen::VectorXd::Zero(2);

    Eigen::VectorXd f = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd h(2);
    h << 0.5, -0.2;
    const auto next = al_dual_update(state, f, h);
    CHECK(next.mu_h(0) == 0.5);
    CHECK(next.mu_h(1) == 0.0);
    CHECK(next.mu_f.cwiseAbs().maxCoeff() == 0.0);
    CHECK(next.penalty == 2.0);
    CHECK(next.outer_iter == 1);

    // feasible point only grows the penalty
    Eigen::VectorXd feasible = Eigen::VectorXd::Constant(2, -1.0);
    const auto still = al_dual_update(state, f, feasible);
    CHECK(still.mu_h == state.mu_h);
    CHECK(still.mu_f == state.mu_f);
    CHECK(still.penalty == 2.0);

    // two updates double twice
    const auto twice = al_dual_update(next, f, feasible);
    CHECK(twice.penalty == 4.0);

    // mu_h stays elementwise >= 0 under any sequence
    OuterLoopState walk = state;
    Eigen::VectorXd mixed(2);
    mixed << 0.3, -5.0;
    for (int i = 0; i < 6; ++i) {
        walk = al_dual_update(walk, f, mixed);
        CHECK(walk.mu_h.minCoeff() >= 0.0);
    }
}
