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

#include "dcpde/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace dcpde {

namespace {

struct MethodTraits {
    bool inequalities = false;
    bool balance_m = false;
    bool balance_lambda = false;
    bool static_once = false;
    bool hard_boundary = false;
    bool penalty_homotopy = false;
    bool al_ineq = false;
    bool al_eq = false;
};

auto traits_for(const std::string& method) -> MethodTraits
{
    if (method == "pinn") return {};
    if (method == "pinn_ineq") return {.inequalities = true};
    if (method == "dcpinn")
        return {.inequalities = true, .balance_m = true, .balance_lambda = true};
    if (method == "dcpinn_no_lambda")
        return {.inequalities = true, .balance_m = true};
    if (method == "dcpinn_no_m")
        return {.inequalities = true, .balance_lambda = true};
    if (method == "dcpinn_static")
        return {.inequalities = true, .static_once = true};
    if (method == "hpinn_pen")
        return {.inequalities = true, .hard_boundary = true,
                .penalty_homotopy = true};
    if (method == "hpinn_al")
        return {.inequalities = true, .hard_boundary = true, .al_ineq = true};
    if (method == "al_pinn")
        return {.inequalities = true, .al_ineq = true, .al_eq = true};
    throw std::invalid_argument("unknown method: " + method);
}

// Hard Dirichlet wrapper u = (a + c psi) * g with precomputed multiplier
// values and derivatives on a fixed batch.
struct HardWrap {
    double a = 0.0;
    double c = 1.0;
    Eigen::VectorXd g;
    Eigen::MatrixXd gg, gh;  // per-axis first/second derivatives of g

    static auto make(const ProblemData& problem, const Eigen::MatrixXd& pts)
        -> HardWrap
    {
        HardWrap wrap;
        wrap.a = problem.box_min;
        wrap.c = problem.box_max - problem.box_min;
        problem.hard_multiplier(pts, wrap.g, wrap.gg, wrap.gh);
        return wrap;
    }

    [[nodiscard]] auto value(const Eigen::VectorXd& psi) const -> Eigen::VectorXd
    {
        return (a + c * psi.array()).cwiseProduct(g.array()).matrix();
    }

    [[nodiscard]] auto apply(const BatchBundles& psi) const -> BatchBundles
    {
        BatchBundles u;
        const auto box = (a + c * psi.value.array()).eval();
        u.value = box.cwiseProduct(g.array()).matrix();
        const long dim = psi.grad.rows();
        u.grad.resize(dim, psi.grad.cols());
        u.diag_hess.resize(dim, psi.grad.cols());
        for (long i = 0; i < dim; ++i) {
            u.grad.row(i) = (c * psi.grad.row(i).array() * g.transpose().array()
                             + box.transpose() * gg.row(i).array())
                                .matrix();
            u.diag_hess.row(i) =
                (c * psi.diag_hess.row(i).array() * g.transpose().array()
                 + 2.0 * c * psi.grad.row(i).array() * gg.row(i).array()
                 + box.transpose() * gh.row(i).array())
                    .matrix();
        }
        return u;
    }

    // cotangent on u pulled back to a cotangent on psi
    [[nodiscard]] auto pull_back(const BatchCotangents& u_cot) const
        -> BatchCotangents
    {
        BatchCotangents psi_cot;
        Eigen::ArrayXd value_bar = g.array() * u_cot.value.array();
        const long dim = u_cot.grad.rows();
        psi_cot.grad.resize(dim, u_cot.grad.cols());
        psi_cot.diag_hess.resize(dim, u_cot.grad.cols());
        for (long i = 0; i < dim; ++i) {
            value_bar += (gg.row(i).transpose().array()
                          * u_cot.grad.row(i).transpose().array())
                         + (gh.row(i).transpose().array()
                            * u_cot.diag_hess.row(i).transpose().array());
            psi_cot.grad.row(i) =
                c
                * (g.transpose().array() * u_cot.grad.row(i).array()
                   + 2.0 * gg.row(i).array() * u_cot.diag_hess.row(i).array())
                      .matrix();
            psi_cot.diag_hess.row(i) =
                c * (g.transpose().array() * u_cot.diag_hess.row(i).array())
                        .matrix();
        }
        psi_cot.value = (c * value_bar).matrix();
        return psi_cot;
    }

    [[nodiscard]] auto pull_back_value(const Eigen::VectorXd& u_bar) const
        -> Eigen::VectorXd
    {
        return (c * g.array() * u_bar.array()).matrix();
    }
};

struct EpochEval {
    std::vector<double> raw;              // per category, fixed order
    Eigen::VectorXd r0, rb, rf;           // residual vectors
    std::vector<Eigen::VectorXd> h;       // per inequality
    ParamGrad total_grad;
    std::map<std::string, double> alpha;  // mean |grad| per category
    double total = 0.0;
};

}  // namespace

auto known_methods() -> std::vector<std::string>
{
    return {"pinn",       "pinn_ineq",       "dcpinn",
            "dcpinn_no_lambda", "dcpinn_no_m", "dcpinn_static",
            "hpinn_pen",  "hpinn_al",        "al_pinn"};
}

auto lr_at(int epoch, double lr_init, int transition, double decay) -> double
{
    return lr_init
           * std::pow(decay, static_cast<double>(epoch)
                                 / static_cast<double>(transition));
}

auto AdamState::make(const NetworkParams& params, double weight_decay)
    -> AdamState
{
    AdamState state;
    state.m = ParamGrad::zeros_like(params);
    state.v = ParamGrad::zeros_like(params);
    state.weight_decay = weight_decay;
    return state;
}

auto adam_step(AdamState& state, NetworkParams& params, const ParamGrad& grad,
               double lr) -> void
{
    if (!grad.all_finite())
        throw std::runtime_error("adam_step: non-finite gradient");
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, state.step);
    const double bc2 = 1.0 - std::pow(state.beta2, state.step);
    const double decay = 1.0 - lr * state.weight_decay;
    auto update = [&](auto& p, auto& m, auto& v, const auto& g) {
        m = state.beta1 * m + (1.0 - state.beta1) * g;
        v = state.beta2 * v + (1.0 - state.beta2) * g.cwiseProduct(g);
        p *= decay;
        p -= (lr * (m.array() / bc1)
              / ((v.array() / bc2).sqrt() + state.eps))
                 .matrix();
    };
    for (size_t l = 0; l < params.weights.size(); ++l) {
        update(params.weights[l], state.m.weights[l], state.v.weights[l],
               grad.weights[l]);
        update(params.biases[l], state.m.biases[l], state.v.biases[l],
               grad.biases[l]);
    }
}

auto train(const TrainConfig& cfg) -> TrainReport
{
    const MethodTraits traits = traits_for(cfg.method);
    const ProblemData problem = make_problem(cfg.problem, cfg.problem_cfg);
    if (traits.hard_boundary && !problem.supports_hard_boundary)
        throw std::invalid_argument("method " + cfg.method
                                    + " needs a hard-boundary wrapper that "
                                      "problem "
                                    + cfg.problem + " does not define");

    const int n_ineq = static_cast<int>(problem.inequalities.size());
    const long n_0 = problem.data_points.cols();
    const long n_b = problem.boundary_points.cols();
    const long n_f = problem.interior_points.cols();

    TrainReport report;
    report.category_names = {"0", "b", "f"};
    for (int k = 0; k < n_ineq; ++k)
        report.category_names.push_back("h" + std::to_string(k + 1));
    for (const auto& ineq : problem.inequalities)
        report.inequality_names.push_back(ineq.name);
    const int n_cat = static_cast<int>(report.category_names.size());

    std::vector<int> layers = {problem.input_dim};
    for (int w : cfg.hidden.empty() ? problem.default_hidden : cfg.hidden)
        layers.push_back(w);
    layers.push_back(1);
    NetworkParams params = init_glorot(layers, cfg.seed);
    params.output_transform = problem.transform;

    std::vector<std::pair<std::string, long>> category_sizes = {
        {"0", n_0}, {"b", n_b}, {"f", n_f}};
    for (int k = 0; k < n_ineq; ++k)
        category_sizes.emplace_back("h" + std::to_string(k + 1), n_f);
    BalancingState balance =
        BalancingState::make(category_sizes, cfg.eta_m, cfg.p_m, cfg.p_lambda);

    const bool hard = traits.hard_boundary;
    HardWrap wrap_data, wrap_interior;
    if (hard) {
        wrap_data = HardWrap::make(problem, problem.data_points);
        wrap_interior = HardWrap::make(problem, problem.interior_points);
    }

    OuterLoopState outer;
    outer.penalty = cfg.penalty_init;
    outer.growth = cfg.penalty_growth;
    const bool outer_loop =
        traits.penalty_homotopy || traits.al_ineq || traits.al_eq;
    if (traits.al_eq) outer.mu_f = Eigen::VectorXd::Zero(n_f);
    if (traits.al_ineq) outer.mu_h = Eigen::VectorXd::Zero(n_f * n_ineq);

    const double delta = cfg.hinge_delta;

    // coefficient of each category in the training objective
    auto effective_lambda = [&](int cat) -> double {
        const std::string& name = report.category_names[cat];
        const bool is_ineq = name[0] == 'h';
        if (is_ineq && !traits.inequalities) return 0.0;
        if (name == "b" && hard) return 0.0;
        if (traits.penalty_homotopy) return is_ineq ? outer.penalty : 1.0;
        if (traits.al_ineq || traits.al_eq) {
            if (is_ineq || name == "f") return outer.penalty;
            return 1.0;
        }
        return balance.lambda.at(name);
    };

    // losses, residuals, and the assembled parameter gradient for the
    // current parameters; per-category gradient magnitudes on request
    auto evaluate = [&](bool need_alpha, bool need_grad) -> EpochEval {
        EpochEval ev;
        ev.raw.assign(n_cat, 0.0);
        ev.total_grad = ParamGrad::zeros_like(params);

        ForwardTrace trace_d, trace_b, trace_f;
        const BatchBundles psi_d =
            eval_batch(params, problem.data_points, &trace_d, false);
        ev.r0 = (hard ? wrap_data.value(psi_d.value) : psi_d.value)
                - problem.data_targets;
        ev.raw[0] = weighted_mse(ev.r0, balance.m.at("0"));

        BatchBundles psi_b;
        if (!hard) {
            psi_b = eval_batch(params, problem.boundary_points, &trace_b, false);
            ev.rb = psi_b.value - problem.boundary_targets;
            ev.raw[1] = weighted_mse(ev.rb, balance.m.at("b"));
        }

        const BatchBundles psi_f =
            eval_batch(params, problem.interior_points, &trace_f, true);
        const BatchBundles u_f = hard ? wrap_interior.apply(psi_f) : psi_f;
        ev.rf = problem.residual_op.apply(u_f);
        ev.raw[2] = weighted_mse(ev.rf, balance.m.at("f"));
        ev.h.resize(n_ineq);
        for (int k = 0; k < n_ineq; ++k) {
            ev.h[k] = problem.inequalities[k].op.apply(u_f);
            ev.raw[3 + k] = hinge_loss_softplus(
                ev.h[k], balance.m.at("h" + std::to_string(k + 1)), delta);
        }

        ev.total = 0.0;
        for (int cat = 0; cat < n_cat; ++cat)
            ev.total += effective_lambda(cat) * ev.raw[cat];
        if (traits.al_eq) ev.total += outer.mu_f.dot(ev.rf);
        if (traits.al_ineq)
            for (int k = 0; k < n_ineq; ++k)
                ev.total +=
                    outer.mu_h.segment(k * n_f, n_f).dot(ev.h[k].cwiseMax(0.0));
        if (!need_grad) return ev;

        // per-point objective weights, before lambda
        auto mse_weight = [&](const Eigen::VectorXd& r,
                              const Eigen::VectorXd& m) -> Eigen::VectorXd {
            return (2.0 / static_cast<double>(r.size())) * m.cwiseAbs2()
                       .cwiseProduct(r);
        };
        auto hinge_weight = [&](const Eigen::VectorXd& h,
                                const Eigen::VectorXd& m) -> Eigen::VectorXd {
            Eigen::VectorXd w(h.size());
            for (long i = 0; i < h.size(); ++i)
                w(i) = m(i) * m(i) * hinge_penalty_derivative(h(i), delta)
                       / static_cast<double>(h.size());
            return w;
        };

        auto reverse_data = [&](double coeff) -> ParamGrad {
            BatchCotangents cot;
            cot.value = coeff * mse_weight(ev.r0, balance.m.at("0"));
            if (hard) cot.value = wrap_data.pull_back_value(cot.value);
            return reverse_batch(params, trace_d, cot);
        };
        auto reverse_boundary = [&](double coeff) -> ParamGrad {
            BatchCotangents cot;
            cot.value = coeff * mse_weight(ev.rb, balance.m.at("b"));
            return reverse_batch(params, trace_b, cot);
        };
        // one sweep through the interior trace for any weighted combination
        // of the residual and inequality operators
        auto reverse_interior =
            [&](const std::vector<double>& coeffs, bool with_duals)
            -> ParamGrad {
            BatchCotangents cot;
            cot.value = Eigen::VectorXd::Zero(n_f);
            cot.grad = Eigen::MatrixXd::Zero(problem.input_dim, n_f);
            cot.diag_hess = cot.grad;
            if (coeffs[0] != 0.0 || (with_duals && traits.al_eq)) {
                Eigen::VectorXd w =
                    coeffs[0] * mse_weight(ev.rf, balance.m.at("f"));
                if (with_duals && traits.al_eq) w += outer.mu_f;
                problem.residual_op.accumulate_cotangent(w, cot);
            }
            for (int k = 0; k < n_ineq; ++k) {
                const bool duals = with_duals && traits.al_ineq;
                if (coeffs[1 + k] == 0.0 && !duals) continue;
                Eigen::VectorXd w =
                    coeffs[1 + k]
                    * hinge_weight(ev.h[k],
                                   balance.m.at("h" + std::to_string(k + 1)));
                if (duals) {
                    const auto mu = outer.mu_h.segment(k * n_f, n_f);
                    for (long i = 0; i < n_f; ++i)
                        if (ev.h[k](i) > 0.0) w(i) += mu(i);
                }
                problem.inequalities[k].op.accumulate_cotangent(w, cot);
            }
            if (hard) cot = wrap_interior.pull_back(cot);
            return reverse_batch(params, trace_f, cot);
        };

        if (need_alpha) {
            // separate sweeps expose each category's gradient magnitude
            ParamGrad g0 = reverse_data(1.0);
            ev.alpha["0"] = g0.mean_abs();
            ev.total_grad.add_scaled(effective_lambda(0), g0);
            if (!hard) {
                ParamGrad gb = reverse_boundary(1.0);
                ev.alpha["b"] = gb.mean_abs();
                ev.total_grad.add_scaled(effective_lambda(1), gb);
            } else {
                ev.alpha["b"] = 0.0;
            }
            std::vector<double> coeffs(1 + n_ineq, 0.0);
            coeffs[0] = 1.0;
            ParamGrad gf = reverse_interior(coeffs, false);
            ev.alpha["f"] = gf.mean_abs();
            ev.total_grad.add_scaled(effective_lambda(2), gf);
            coeffs[0] = 0.0;
            for (int k = 0; k < n_ineq; ++k) {
                coeffs[1 + k] = 1.0;
                ParamGrad gh = reverse_interior(coeffs, false);
                coeffs[1 + k] = 0.0;
                ev.alpha["h" + std::to_string(k + 1)] = gh.mean_abs();
                ev.total_grad.add_scaled(effective_lambda(3 + k), gh);
            }
        } else {
            ev.total_grad.add_scaled(1.0, reverse_data(effective_lambda(0)));
            if (!hard && effective_lambda(1) != 0.0)
                ev.total_grad.add_scaled(1.0,
                                         reverse_boundary(effective_lambda(1)));
            std::vector<double> coeffs(1 + n_ineq, 0.0);
            coeffs[0] = effective_lambda(2);
            for (int k = 0; k < n_ineq; ++k)
                coeffs[1 + k] = effective_lambda(3 + k);
            ev.total_grad.add_scaled(1.0, reverse_interior(coeffs, true));
        }
        return ev;
    };

    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now()
                                             - start)
            .count();
    };
    auto record = [&](int epoch, const EpochEval& ev) {
        TrainRecord rec;
        rec.epoch = epoch;
        rec.wall_time_s = elapsed();
        rec.losses = ev.raw;
        rec.lambdas.resize(n_cat);
        for (int cat = 0; cat < n_cat; ++cat)
            rec.lambdas[cat] = effective_lambda(cat);
        rec.total = ev.total;
        report.records.push_back(std::move(rec));
    };

    AdamState adam = AdamState::make(params, cfg.weight_decay);
    const int inner =
        outer_loop ? std::max(1, cfg.epochs / std::max(1, cfg.n_outer)) : 0;
    bool frozen_static = false;

    {
        const EpochEval initial = evaluate(false, false);
        record(0, initial);
    }

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const bool static_now = traits.static_once && !frozen_static;
        const bool lambda_now =
            (traits.balance_lambda && due(epoch, cfg.p_lambda)) || static_now;
        const bool m_now =
            (traits.balance_m && due(epoch, cfg.p_m)) || static_now;

        EpochEval ev = evaluate(lambda_now, true);
        if (!std::isfinite(ev.total) || ev.total > 1e12) {
            report.diverged = true;
            break;
        }
        if (epoch % std::max(1, cfg.record_stride) == 0 || epoch == cfg.epochs)
            record(epoch, ev);

        if (m_now) {
            const double n0 = static_cast<double>(n_0);
            const double nb = static_cast<double>(n_b);
            const double nf = static_cast<double>(n_f);
            auto& m = balance.m;
            m.at("0") = update_individual(
                m.at("0"),
                (2.0 / n0) * m.at("0").cwiseProduct(ev.r0.cwiseAbs2()),
                cfg.eta_m);
            if (!hard)
                m.at("b") = update_individual(
                    m.at("b"),
                    (2.0 / nb) * m.at("b").cwiseProduct(ev.rb.cwiseAbs2()),
                    cfg.eta_m);
            m.at("f") = update_individual(
                m.at("f"),
                (2.0 / nf) * m.at("f").cwiseProduct(ev.rf.cwiseAbs2()),
                cfg.eta_m);
            for (int k = 0; k < n_ineq; ++k) {
                const std::string name = "h" + std::to_string(k + 1);
                Eigen::VectorXd pen(n_f);
                for (long i = 0; i < n_f; ++i) {
                    const double v = hinge_penalty_value(ev.h[k](i), delta);
                    pen(i) = v * v;
                }
                m.at(name) = update_individual(
                    m.at(name), (2.0 / nf) * m.at(name).cwiseProduct(pen),
                    cfg.eta_m);
            }
        }
        if (lambda_now)
            balance.lambda = update_category(balance.lambda, ev.alpha);
        if (static_now) frozen_static = true;

        if (outer_loop && epoch % inner == 0 && epoch < cfg.epochs) {
            if (traits.al_eq || traits.al_ineq) {
                Eigen::VectorXd h_all(traits.al_ineq ? n_f * n_ineq : 0);
                for (int k = 0; k < n_ineq && traits.al_ineq; ++k)
                    h_all.segment(k * n_f, n_f) = ev.h[k];
                const Eigen::VectorXd f_vals =
                    traits.al_eq ? ev.rf : Eigen::VectorXd::Zero(0);
                OuterLoopState scratch = outer;
                if (!traits.al_eq) scratch.mu_f = Eigen::VectorXd::Zero(0);
                outer = al_dual_update(scratch, f_vals, h_all);
                if (!traits.al_eq) outer.mu_f.resize(0);
            } else {
                outer.penalty = penalty_step(outer.penalty, outer.growth);
                outer.outer_iter += 1;
            }
        }

        adam_step(adam, params, ev.total_grad,
                  lr_at(epoch - 1, cfg.lr_init, cfg.lr_transition,
                        cfg.lr_decay));
    }

    report.params = params;
    report.wall_time_s = elapsed();

    const BatchEval eval_net = [&](const Eigen::MatrixXd& pts,
                                   bool with_derivs) -> BatchBundles {
        BatchBundles psi = eval_batch(params, pts, nullptr, with_derivs);
        if (!hard) return psi;
        const HardWrap wrap = HardWrap::make(problem, pts);
        if (!with_derivs) {
            BatchBundles out;
            out.value = wrap.value(psi.value);
            return out;
        }
        return wrap.apply(psi);
    };
    bool finite = true;
    for (const auto& w : params.weights) finite = finite && w.allFinite();
    if (finite && problem.validate) report.validation = problem.validate(eval_net);
    return report;
}

}  // namespace dcpde
