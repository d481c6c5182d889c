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

#include "dcpde/problems.hpp"

#include "dcpde/metrics.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <stdexcept>

namespace dcpde {

namespace {

constexpr double kPi = std::numbers::pi;

auto zero_op(long n, int dim) -> BatchLinOp
{
    BatchLinOp op;
    op.c_value = Eigen::VectorXd::Zero(n);
    op.c_grad = Eigen::MatrixXd::Zero(dim, n);
    op.c_hess = Eigen::MatrixXd::Zero(dim, n);
    return op;
}

}  // namespace

auto BatchLinOp::apply(const BatchBundles& bundles) const -> Eigen::VectorXd
{
    Eigen::VectorXd out = c_value.cwiseProduct(bundles.value);
    out += (c_grad.cwiseProduct(bundles.grad)).colwise().sum().transpose();
    out += (c_hess.cwiseProduct(bundles.diag_hess)).colwise().sum().transpose();
    if (c_const.size() > 0) out += c_const;
    return out;
}

auto BatchLinOp::accumulate_cotangent(const Eigen::VectorXd& weight_per_point,
                                      BatchCotangents& cot) const -> void
{
    cot.value += c_value.cwiseProduct(weight_per_point);
    cot.grad += (c_grad.array().rowwise()
                 * weight_per_point.transpose().array()).matrix();
    cot.diag_hess += (c_hess.array().rowwise()
                      * weight_per_point.transpose().array()).matrix();
}

auto heat_residual(const DerivBundle& bundle, double lambda_diff) -> double
{
    const int d = static_cast<int>(bundle.grad.size()) - 1;
    return bundle.grad(d) - lambda_diff * bundle.diag_hess.head(d).sum();
}

auto heat_inequalities(const DerivBundle& bundle) -> Eigen::VectorXd
{
    Eigen::VectorXd h(2);
    h(0) = bundle.diag_hess(0);  // u_xx <= 0
    h(1) = bundle.grad(1);       // u_t <= 0
    return h;
}

auto heat_nd_residual(const DerivBundle& bundle, double lambda_diff, int d)
    -> double
{
    return bundle.grad(d) - lambda_diff * bundle.diag_hess.head(d).sum();
}

auto dupire_residual(const Eigen::VectorXd& point, const DerivBundle& bundle,
                     const std::function<double(double, double)>& sigma,
                     double rate) -> double
{
    const double x = point(0);
    const double s = sigma(x, point(1));
    return bundle.grad(1) - 0.5 * s * s * x * x * bundle.diag_hess(0)
           + rate * x * bundle.grad(0);
}

auto no_arb_inequalities(const DerivBundle& bundle) -> Eigen::VectorXd
{
    Eigen::VectorXd h(3);
    h(0) = bundle.grad(0);        // u_x <= 0 (price decreasing in strike)
    h(1) = -bundle.diag_hess(0);  // u_xx >= 0 (convexity)
    h(2) = -bundle.grad(1);       // u_t >= 0 (more time, more value)
    return h;
}

namespace {

auto make_heat(const ProblemConfig& cfg) -> ProblemData
{
    ProblemData problem;
    problem.name = "heat";
    problem.input_dim = 2;  // (x, t)
    problem.default_hidden = {100, 100};
    problem.transform = OutputTransform::abs;
    problem.domain = {{0.0, 1.0}, {0.0, 1.0}};

    const double lam = cfg.lambda_diff;
    const int n_line = cfg.boundary_points;
    const int n_int = cfg.interior_per_axis > 0 ? cfg.interior_per_axis : 31;
    const int n_val = cfg.validation_per_axis > 0 ? cfg.validation_per_axis : 101;

    // supervised data: the initial line u(x, 0) = sin(pi x)
    const Eigen::VectorXd xs = linspace(0.0, 1.0, n_line);
    problem.data_points.resize(2, n_line);
    problem.data_points.row(0) = xs.transpose();
    problem.data_points.row(1).setZero();
    problem.data_targets = (kPi * xs.array()).sin();

    // Dirichlet boundaries x = 0 and x = 1, u = 0
    const Eigen::VectorXd ts = linspace(0.0, 1.0, n_line);
    problem.boundary_points.resize(2, 2 * n_line);
    problem.boundary_points.row(0).head(n_line).setZero();
    problem.boundary_points.row(0).tail(n_line).setOnes();
    problem.boundary_points.row(1).head(n_line) = ts.transpose();
    problem.boundary_points.row(1).tail(n_line) = ts.transpose();
    problem.boundary_targets = Eigen::VectorXd::Zero(2 * n_line);

    problem.interior_points =
        sample_uniform_grid({{0.0, 1.0}, {0.0, 1.0}}, {n_int, n_int});
    const long n_f = problem.interior_points.cols();

    // residual u_t - lam u_xx
    problem.residual_op = zero_op(n_f, 2);
    problem.residual_op.c_grad.row(1).setOnes();
    problem.residual_op.c_hess.row(0).setConstant(-lam);

    Inequality h_xx{"h_xx", zero_op(n_f, 2)};
    h_xx.op.c_hess.row(0).setOnes();
    Inequality h_t{"h_t", zero_op(n_f, 2)};
    h_t.op.c_grad.row(1).setOnes();
    problem.inequalities = {h_xx, h_t};

    // u = box(psi) * x(1-x) kills the Dirichlet boundary residual exactly
    problem.supports_hard_boundary = true;
    problem.box_min = 0.0;
    problem.box_max = 1.0;
    problem.hard_multiplier = [](const Eigen::MatrixXd& pts, Eigen::VectorXd& g,
                                 Eigen::MatrixXd& g_grad,
                                 Eigen::MatrixXd& g_hess) {
        const auto x = pts.row(0).transpose().array();
        g = x * (1.0 - x);
        g_grad.setZero(2, pts.cols());
        g_grad.row(0) = (1.0 - 2.0 * x).transpose();
        g_hess.setZero(2, pts.cols());
        g_hess.row(0).setConstant(-2.0);
    };

    const Eigen::MatrixXd val_pts =
        sample_uniform_grid({{0.0, 1.0}, {0.0, 1.0}}, {n_val, n_val});
    problem.validate = [val_pts, lam](const BatchEval& eval) {
        const BatchBundles out = eval(val_pts, true);
        const long n = val_pts.cols();
        Eigen::VectorXd err_u(n), err_hxx(n), err_ht(n);
        for (long i = 0; i < n; ++i) {
            const Eigen::VectorXd x = val_pts.col(i).head(1);
            const double t = val_pts(1, i);
            err_u(i) = out.value(i) - heat_analytic(x, t, lam);
            err_hxx(i) = out.diag_hess(0, i) - heat_analytic_dxx(x, t, lam, 0);
            err_ht(i) = out.grad(1, i) - heat_analytic_dt(x, t, lam);
        }
        return std::map<std::string, double>{
            {"E_u", rmse(err_u)},
            {"E_h_xx", rmse(err_hxx)},
            {"E_h_t", rmse(err_ht)},
            {"viol_h_xx", violation_score(out.diag_hess.row(0).transpose())},
            {"viol_h_t", violation_score(out.grad.row(1).transpose())},
        };
    };
    return problem;
}

auto make_heat_nd(const ProblemConfig& cfg) -> ProblemData
{
    const int d = cfg.dim;
    if (d < 1) throw std::invalid_argument("heat_nd: dim >= 1");

    ProblemData problem;
    problem.name = "heat_nd";
    problem.input_dim = d + 1;
    problem.default_hidden = {100, 100};
    problem.transform = OutputTransform::abs;

    problem.domain.assign(d + 1, {0.0, 1.0});

    const double lam = cfg.lambda_diff;
    const long n_f =
        cfg.fixed_collocation > 0 ? cfg.fixed_collocation : 1000;
    const long n_0 = cfg.boundary_points;
    const long n_b = cfg.boundary_points;

    std::vector<Interval> space_time(d + 1, {0.0, 1.0});

    // initial data at t = 0, u = prod sin(pi x_i)
    problem.data_points = sample_uniform_random(space_time, n_0, 101);
    problem.data_points.row(d).setZero();
    problem.data_targets.resize(n_0);
    for (long i = 0; i < n_0; ++i)
        problem.data_targets(i) =
            heat_analytic(problem.data_points.col(i).head(d), 0.0, lam);

    // spatial faces x_i in {0, 1}, u = 0; face index cycles over points
    problem.boundary_points = sample_uniform_random(space_time, n_b, 102);
    for (long i = 0; i < n_b; ++i) {
        const int face = static_cast<int>(i % (2 * d));
        problem.boundary_points(face / 2, i) = face % 2;
    }
    problem.boundary_targets = Eigen::VectorXd::Zero(n_b);

    problem.interior_points = sample_uniform_random(space_time, n_f, 103);

    problem.residual_op = zero_op(n_f, d + 1);
    problem.residual_op.c_grad.row(d).setOnes();
    problem.residual_op.c_hess.topRows(d).setConstant(-lam);

    for (int i = 0; i < d; ++i) {
        Inequality h{"h_xx_" + std::to_string(i + 1), zero_op(n_f, d + 1)};
        h.op.c_hess.row(i).setOnes();
        problem.inequalities.push_back(std::move(h));
    }
    Inequality h_t{"h_t", zero_op(n_f, d + 1)};
    h_t.op.c_grad.row(d).setOnes();
    problem.inequalities.push_back(std::move(h_t));

    const Eigen::MatrixXd val_pts = sample_uniform_random(space_time, 2000, 104);
    problem.validate = [val_pts, lam, d](const BatchEval& eval) {
        const BatchBundles out = eval(val_pts, true);
        const long n = val_pts.cols();
        Eigen::VectorXd err_u(n), err_ht(n);
        double viol_hxx = 0.0;
        for (long i = 0; i < n; ++i) {
            const Eigen::VectorXd x = val_pts.col(i).head(d);
            const double t = val_pts(d, i);
            err_u(i) = out.value(i) - heat_analytic(x, t, lam);
            err_ht(i) = out.grad(d, i) - heat_analytic_dt(x, t, lam);
            viol_hxx +=
                out.diag_hess.col(i).head(d).cwiseMax(0.0).sum() / (d * n);
        }
        return std::map<std::string, double>{
            {"E_u", rmse(err_u)},
            {"E_h_t", rmse(err_ht)},
            {"viol_h_xx", viol_hxx},
            {"viol_h_t", violation_score(out.grad.row(d).transpose())},
        };
    };
    return problem;
}

auto make_lv(const ProblemConfig& cfg) -> ProblemData
{
    ProblemData problem;
    problem.name = "lv";
    problem.input_dim = 2;  // (strike, maturity)
    problem.default_hidden = {50, 50, 50, 50};
    problem.transform = OutputTransform::softplus;

    const LVParams lv = cfg.lv;
    const double x_lo = 0.1 * lv.s0;
    const double x_hi = 2.0 * lv.s0;
    const double t_lo = 0.01;
    const double t_hi = 1.0;
    const int n_int = cfg.interior_per_axis > 0 ? cfg.interior_per_axis : 51;
    const int n_val = cfg.validation_per_axis > 0 ? cfg.validation_per_axis : 101;
    const int n_line = 101;
    problem.domain = {{x_lo, x_hi}, {t_lo, t_hi}};

    // observations: cached on disk when a path is configured
    std::vector<LVObservation> obs;
    if (!cfg.dataset_cache.empty()
        && std::filesystem::exists(cfg.dataset_cache)) {
        obs = read_lv_dataset(cfg.dataset_cache);
    } else {
        obs = make_lv_dataset(cfg.n_observations, lv, cfg.mc, cfg.data_seed);
        if (!cfg.dataset_cache.empty()) write_lv_dataset(obs, cfg.dataset_cache);
    }
    problem.lv_dataset = obs;
    const long n_obs = static_cast<long>(obs.size());
    problem.data_points.resize(2, n_obs);
    problem.data_targets.resize(n_obs);
    for (long i = 0; i < n_obs; ++i) {
        problem.data_points(0, i) = obs[i].x;
        problem.data_points(1, i) = obs[i].t;
        problem.data_targets(i) = obs[i].price_noisy;
    }

    // payoff line u(x, 0) = (s0 - x)_+ and the zero-strike line u(0, t) = s0
    const Eigen::VectorXd xs = linspace(x_lo, x_hi, n_line);
    const Eigen::VectorXd ts = linspace(t_lo, t_hi, n_line);
    problem.boundary_points.resize(2, 2 * n_line);
    problem.boundary_targets.resize(2 * n_line);
    for (int i = 0; i < n_line; ++i) {
        problem.boundary_points(0, i) = xs(i);
        problem.boundary_points(1, i) = 0.0;
        problem.boundary_targets(i) = std::max(lv.s0 - xs(i), 0.0);
        problem.boundary_points(0, n_line + i) = 0.0;
        problem.boundary_points(1, n_line + i) = ts(i);
        problem.boundary_targets(n_line + i) = lv.s0;
    }

    problem.interior_points =
        sample_uniform_grid({{x_lo, x_hi}, {t_lo, t_hi}}, {n_int, n_int});
    const long n_f = problem.interior_points.cols();

    // forward equation in strike/maturity: u_t - 1/2 sigma^2 x^2 u_xx + r x u_x
    problem.residual_op = zero_op(n_f, 2);
    Inequality h_x{"h_x", zero_op(n_f, 2)};
    Inequality h_xx{"h_xx", zero_op(n_f, 2)};
    Inequality h_t{"h_t", zero_op(n_f, 2)};
    for (long i = 0; i < n_f; ++i) {
        const double x = problem.interior_points(0, i);
        const double t = problem.interior_points(1, i);
        const double s = lv_sigma(x, t, lv);
        problem.residual_op.c_grad(1, i) = 1.0;
        problem.residual_op.c_grad(0, i) = lv.r * x;
        problem.residual_op.c_hess(0, i) = -0.5 * s * s * x * x;
        h_x.op.c_grad(0, i) = 1.0;
        h_xx.op.c_hess(0, i) = -1.0;
        h_t.op.c_grad(1, i) = -1.0;
    }
    problem.inequalities = {h_x, h_xx, h_t};
    if (cfg.lv_lower_bound) {
        // u >= (s0 - x e^{-r t})_+, intrinsic value of the call
        Inequality h_lb{"h_lb", zero_op(n_f, 2)};
        h_lb.op.c_value.setConstant(-1.0);
        h_lb.op.c_const.resize(n_f);
        for (long i = 0; i < n_f; ++i) {
            const double x = problem.interior_points(0, i);
            const double t = problem.interior_points(1, i);
            h_lb.op.c_const(i) =
                std::max(lv.s0 - x * std::exp(-lv.r * t), 0.0);
        }
        problem.inequalities.push_back(std::move(h_lb));
    }

    Eigen::MatrixXd obs_pts = problem.data_points;
    Eigen::VectorXd obs_clean(n_obs);
    for (long i = 0; i < n_obs; ++i) obs_clean(i) = obs[i].price_clean;
    const Eigen::MatrixXd val_pts =
        sample_uniform_grid({{x_lo, x_hi}, {t_lo, t_hi}}, {n_val, n_val});
    problem.validate = [obs_pts, obs_clean, val_pts](const BatchEval& eval) {
        const BatchBundles at_obs = eval(obs_pts, false);
        const BatchBundles on_grid = eval(val_pts, true);
        const Eigen::VectorXd u_x = on_grid.grad.row(0).transpose();
        const double rate_pos =
            (u_x.array() > 0.0).cast<double>().mean();
        return std::map<std::string, double>{
            {"E_u", rmse(at_obs.value - obs_clean)},
            {"viol_h_x", violation_score(u_x)},
            {"viol_h_xx", violation_score(-on_grid.diag_hess.row(0).transpose())},
            {"viol_h_t", violation_score(-on_grid.grad.row(1).transpose())},
            {"rate_h_x_pos", rate_pos},
        };
    };
    return problem;
}

}  // namespace

auto make_problem(const std::string& name, const ProblemConfig& cfg)
    -> ProblemData
{
    if (name == "heat") return make_heat(cfg);
    if (name == "heat_nd") return make_heat_nd(cfg);
    if (name == "lv") return make_lv(cfg);
    throw std::invalid_argument("unknown problem: " + name);
}

auto known_problems() -> std::vector<std::string>
{
    return {"heat", "heat_nd", "lv"};
}

}  // namespace dcpde
