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

#include "dcpde/commands.hpp"

#include "dcpde/io.hpp"
#include "dcpde/metrics.hpp"
#include "dcpde/oracles.hpp"
#include "dcpde/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>

namespace dcpde {

namespace fs = std::filesystem;

namespace {

auto train_config_from(const Config& cfg) -> TrainConfig
{
    TrainConfig tc;
    tc.problem = cfg.get_string("problem", "heat");
    tc.method = cfg.get_string("method", "dcpinn");
    tc.epochs = static_cast<int>(cfg.get_int("training.epochs", tc.epochs));
    tc.lr_init = cfg.get_double("training.lr_init", tc.lr_init);
    tc.lr_transition =
        static_cast<int>(cfg.get_int("training.lr_transition", tc.lr_transition));
    tc.lr_decay = cfg.get_double("training.lr_decay", tc.lr_decay);
    tc.eta_m = cfg.get_double("training.eta_m", tc.eta_m);
    tc.p_m = static_cast<int>(cfg.get_int("training.p_m", tc.p_m));
    tc.p_lambda = static_cast<int>(cfg.get_int("training.p_lambda", tc.p_lambda));
    tc.weight_decay = cfg.get_double("training.weight_decay", tc.weight_decay);
    tc.seed = static_cast<std::uint64_t>(cfg.get_int("training.seed", 0));
    tc.record_stride =
        static_cast<int>(cfg.get_int("training.record_stride", tc.record_stride));
    tc.n_outer = static_cast<int>(cfg.get_int("training.n_outer", tc.n_outer));
    tc.penalty_init = cfg.get_double("training.penalty_init", tc.penalty_init);
    tc.penalty_growth =
        cfg.get_double("training.penalty_growth", tc.penalty_growth);
    tc.hinge_delta = cfg.get_double("training.hinge_delta", tc.hinge_delta);
    for (long w : cfg.get_ints("training.hidden", {}))
        tc.hidden.push_back(static_cast<int>(w));

    auto& pc = tc.problem_cfg;
    pc.interior_per_axis =
        static_cast<int>(cfg.get_int("problem.interior_per_axis", 0));
    pc.boundary_points =
        static_cast<int>(cfg.get_int("problem.boundary_points", 1001));
    pc.validation_per_axis =
        static_cast<int>(cfg.get_int("problem.validation_per_axis", 0));
    pc.dim = static_cast<int>(cfg.get_int("problem.dim", 1));
    pc.fixed_collocation = cfg.get_int("problem.fixed_collocation", 0);
    pc.lambda_diff = cfg.get_double("problem.lambda_diff", 0.1);
    pc.n_observations = cfg.get_int("problem.n_observations", 1000);
    pc.data_seed = static_cast<std::uint64_t>(cfg.get_int("problem.data_seed",
                                                          12345));
    pc.dataset_cache = cfg.get_string("problem.dataset_cache", "");
    pc.lv_lower_bound = cfg.get_bool("problem.lv_lower_bound", false);
    pc.mc.n_paths = cfg.get_int("problem.mc_paths", pc.mc.n_paths);
    pc.mc.n_steps = static_cast<int>(cfg.get_int("problem.mc_steps",
                                                 pc.mc.n_steps));
    pc.mc.seed = static_cast<std::uint64_t>(cfg.get_int("problem.mc_seed", 0));
    pc.lv.sigma_A = cfg.get_double("problem.sigma_a", pc.lv.sigma_A);
    pc.lv.A = cfg.get_double("problem.lv_a", pc.lv.A);
    pc.lv.B = cfg.get_double("problem.lv_b", pc.lv.B);
    pc.lv.s0 = cfg.get_double("problem.s0", pc.lv.s0);
    pc.lv.r = cfg.get_double("problem.rate", pc.lv.r);
    pc.lv.noise_level = cfg.get_double("problem.noise", pc.lv.noise_level);
    return tc;
}

auto out_dir_from(const Config& cfg, const CliOptions& opts) -> fs::path
{
    return opts.out_dir.empty() ? fs::path(cfg.get_string("output.dir", "out"))
                                : fs::path(opts.out_dir);
}

// Slices of the solution and its derivatives along x at fixed t, with the
// analytic oracle where one exists.  Serves the derivative-profile figures.
auto write_profiles(const Config& cfg, const TrainConfig& tc,
                    const TrainReport& report, const fs::path& dir) -> void
{
    const ProblemData problem = make_problem(tc.problem, tc.problem_cfg);
    if (problem.input_dim != 2) return;
    const auto fields =
        cfg.get_strings("profile.fields", {"u", "u_x", "u_xx", "u_t"});
    const auto t_values = cfg.get_doubles("profile.t", {0.5});
    const int n_x = 101;
    const auto [x_lo, x_hi] = problem.domain[0];
    const Eigen::VectorXd xs = linspace(x_lo, x_hi, n_x);

    Eigen::MatrixXd pts(2, n_x * t_values.size());
    for (size_t j = 0; j < t_values.size(); ++j)
        for (int i = 0; i < n_x; ++i) {
            pts(0, j * n_x + i) = xs(i);
            pts(1, j * n_x + i) = t_values[j];
        }
    const BatchBundles out = eval_batch(report.params, pts);

    const bool heat = tc.problem == "heat";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& field : fields) {
        std::ofstream file(dir / ("profile_" + field + ".csv"));
        file << "x,t,value,oracle\n";
        for (long c = 0; c < pts.cols(); ++c) {
            Eigen::VectorXd x(1);
            x << pts(0, c);
            const double t = pts(1, c);
            double value = nan, oracle = nan;
            if (field == "u") {
                value = out.value(c);
                if (heat) oracle = heat_analytic(x, t, tc.problem_cfg.lambda_diff);
            } else if (field == "u_x") {
                value = out.grad(0, c);
            } else if (field == "u_t") {
                value = out.grad(1, c);
                if (heat)
                    oracle = heat_analytic_dt(x, t, tc.problem_cfg.lambda_diff);
            } else if (field == "u_xx") {
                value = out.diag_hess(0, c);
                if (heat)
                    oracle =
                        heat_analytic_dxx(x, t, tc.problem_cfg.lambda_diff, 0);
            }
            file << format_double(pts(0, c)) << ',' << format_double(t) << ','
                 << format_double(value) << ',' << format_double(oracle)
                 << '\n';
        }
    }
}

// One training run written into dir; returns kExitOk or kExitDiverged.
auto run_into(const Config& cfg, TrainConfig tc, const fs::path& dir,
              TrainReport* report_out = nullptr) -> int
{
    fs::create_directories(dir);
    const TrainReport report = train(tc);
    write_trajectory(report, (dir / "trajectory.csv").string());
    write_metrics(report.validation, (dir / "metrics.csv").string());
    save_params(report.params, (dir / "model.dcpde").string());
    write_profiles(cfg, tc, report, dir);
    if (report_out != nullptr) *report_out = report;
    return report.diverged ? kExitDiverged : kExitOk;
}

struct RunMetrics {
    std::string method;
    std::map<std::string, double> values;
};

// final metrics plus trajectory-shape metrics, on the epoch axis so that
// repeated runs reproduce the report byte for byte
auto collect_run_metrics(const fs::path& dir) -> RunMetrics
{
    RunMetrics run;
    run.method = dir.filename().string();
    run.values = read_metrics((dir / "metrics.csv").string());
    const TrajectoryFile traj = read_trajectory((dir / "trajectory.csv").string());
    if (traj.totals.size() >= 2) {
        Trajectory t;
        t.times = Eigen::Map<const Eigen::VectorXd>(traj.epochs.data(),
                                                    traj.epochs.size());
        t.errors = Eigen::Map<const Eigen::VectorXd>(traj.totals.data(),
                                                     traj.totals.size());
        run.values["tvn"] = tvn(t);
        run.values["nauc"] = nauc(t);
        const auto half = t_half(t);
        run.values["t_half"] =
            half ? *half : std::numeric_limits<double>::infinity();
    }
    return run;
}

}  // namespace

auto cmd_run(const CliOptions& opts) -> int
{
    try {
        const Config cfg = Config::parse_file(opts.config_path);
        TrainConfig tc = train_config_from(cfg);
        if (opts.seed) tc.seed = static_cast<std::uint64_t>(*opts.seed);
        return run_into(cfg, tc, out_dir_from(cfg, opts));
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitUsage;
    }
}

auto cmd_ablate(const CliOptions& opts) -> int
{
    try {
        const Config cfg = Config::parse_file(opts.config_path);
        const fs::path out = out_dir_from(cfg, opts);
        const auto methods = cfg.get_strings(
            "ablate.methods",
            {"pinn", "pinn_ineq", "dcpinn_no_lambda", "dcpinn_no_m", "dcpinn"});
        std::vector<long> seeds = opts.seeds;
        if (seeds.empty()) seeds = cfg.get_ints("ablate.seeds", {0, 1, 2, 3, 4});

        int worst = kExitOk;
        std::vector<RunMetrics> summary;
        for (const auto& method : methods) {
            std::map<std::string, std::vector<double>> per_metric;
            for (long seed : seeds) {
                TrainConfig tc = train_config_from(cfg);
                tc.method = method;
                tc.seed = static_cast<std::uint64_t>(seed);
                const fs::path dir =
                    out / (method + "_seed" + std::to_string(seed));
                worst = std::max(worst, run_into(cfg, tc, dir));
                for (const auto& [name, value] :
                     read_metrics((dir / "metrics.csv").string()))
                    per_metric[name].push_back(value);
            }
            RunMetrics row;
            row.method = method;
            for (const auto& [name, vals] : per_metric) {
                double sum = 0.0;
                for (double v : vals) sum += v;
                row.values[name] = sum / static_cast<double>(vals.size());
            }
            summary.push_back(std::move(row));
        }

        // seed-averaged summary, one row per method in the requested order
        std::set<std::string> metric_names;
        for (const auto& row : summary)
            for (const auto& [name, value] : row.values)
                metric_names.insert(name);
        std::ofstream file(out / "ablation.csv");
        file << "method";
        for (const auto& name : metric_names) file << ',' << name;
        file << '\n';
        for (const auto& row : summary) {
            file << row.method;
            for (const auto& name : metric_names)
                file << ','
                     << format_double(row.values.count(name)
                                          ? row.values.at(name)
                                          : std::numeric_limits<
                                                double>::quiet_NaN());
            file << '\n';
        }
        return worst;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitUsage;
    }
}

auto cmd_sweep(const CliOptions& opts) -> int
{
    try {
        const Config cfg = Config::parse_file(opts.config_path);
        const fs::path out = out_dir_from(cfg, opts);
        fs::create_directories(out);
        const auto eta_ms = cfg.get_doubles("sweep.eta_m", {1e-4, 1e-3, 1e-2});
        const auto p_ms = cfg.get_ints("sweep.p_m", {10, 100, 1000});
        const auto p_lambdas = cfg.get_ints("sweep.p_lambda", {10, 100, 1000});

        std::ofstream file(out / "sweep.csv");
        file << "eta_m,p_m,p_lambda,metric,value\n";
        int cell = 0;
        for (double eta_m : eta_ms)
            for (long p_m : p_ms)
                for (long p_lambda : p_lambdas) {
                    TrainConfig tc = train_config_from(cfg);
                    if (opts.seed)
                        tc.seed = static_cast<std::uint64_t>(*opts.seed);
                    tc.eta_m = eta_m;
                    tc.p_m = static_cast<int>(p_m);
                    tc.p_lambda = static_cast<int>(p_lambda);
                    const fs::path dir =
                        out / ("cell_" + std::to_string(cell++));
                    auto prefix = [&]() -> std::ofstream& {
                        file << format_double(eta_m) << ',' << p_m << ','
                             << p_lambda << ',';
                        return file;
                    };
                    int status = kExitOk;
                    try {
                        status = run_into(cfg, tc, dir);
                    } catch (const std::exception& err) {
                        std::cerr << "sweep cell failed: " << err.what()
                                  << '\n';
                        status = kExitUsage;
                    }
                    prefix() << "status," << status << '\n';
                    if (status == kExitUsage) continue;
                    // appendix-table cells are log10 errors
                    for (const auto& [name, value] :
                         read_metrics((dir / "metrics.csv").string()))
                        if (name.rfind("E_", 0) == 0)
                            prefix() << "log10_" << name << ','
                                     << format_double(std::log10(value))
                                     << '\n';
                }
        return kExitOk;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitUsage;
    }
}

auto cmd_report(const CliOptions& opts) -> int
{
    try {
        const Config cfg = Config::parse_file(opts.config_path);
        const fs::path out = out_dir_from(cfg, opts);
        const auto run_dirs = cfg.get_strings("report.runs", {});
        if (run_dirs.size() < 2) {
            std::cerr << "error: report needs at least 2 runs\n";
            return kExitUsage;
        }
        const std::string baseline_name =
            cfg.get_string("report.baseline", run_dirs.front());

        std::vector<RunMetrics> runs;
        for (const auto& dir : run_dirs) {
            if (!fs::exists(fs::path(dir) / "trajectory.csv")
                || !fs::exists(fs::path(dir) / "metrics.csv")) {
                std::cerr << "error: missing run outputs in " << dir << '\n';
                return kExitUsage;
            }
            runs.push_back(collect_run_metrics(dir));
        }
        size_t baseline = 0;
        for (size_t i = 0; i < runs.size(); ++i)
            if (run_dirs[i] == baseline_name
                || runs[i].method == fs::path(baseline_name).filename().string())
                baseline = i;

        std::set<std::string> metric_names;
        for (const auto& run : runs)
            for (const auto& [name, value] : run.values)
                metric_names.insert(name);

        const long n_runs = static_cast<long>(runs.size());
        Eigen::MatrixXd rank_matrix(n_runs,
                                    static_cast<long>(metric_names.size()));
        std::map<std::string, Eigen::VectorXd> ranks_by_metric;
        long col = 0;
        for (const auto& name : metric_names) {
            Eigen::VectorXd values(n_runs);
            for (long i = 0; i < n_runs; ++i) {
                const auto& vals = runs[i].values;
                values(i) = vals.count(name)
                                ? vals.at(name)
                                : std::numeric_limits<double>::infinity();
            }
            // nauc rewards higher values; everything else is an error score
            const Eigen::VectorXd ranks =
                name == "nauc" ? ranks_with_ties(-values)
                               : ranks_with_ties(values);
            ranks_by_metric[name] = ranks;
            rank_matrix.col(col++) = ranks;
        }
        const Eigen::VectorXd borda_sums = borda(rank_matrix);
        const Eigen::VectorXd borda_ranks = ranks_with_ties(borda_sums);

        auto write_report = [&](const fs::path& path, bool with_log10) {
            std::ofstream file(path);
            file << (with_log10
                         ? "method,metric,value,log10_value,improvement_pct,rank"
                         : "method,metric,value,improvement_pct,rank")
                 << '\n';
            for (long i = 0; i < n_runs; ++i) {
                for (const auto& name : metric_names) {
                    const double value =
                        runs[i].values.count(name)
                            ? runs[i].values.at(name)
                            : std::numeric_limits<double>::infinity();
                    const double base =
                        runs[baseline].values.count(name)
                            ? runs[baseline].values.at(name)
                            : std::numeric_limits<double>::infinity();
                    const double improvement = improvement_pct(
                        base, value,
                        name == "nauc" ? Direction::maximize
                                       : Direction::minimize);
                    file << runs[i].method << ',' << name << ','
                         << format_double(value) << ',';
                    if (with_log10)
                        file << format_double(std::log10(value)) << ',';
                    file << format_double(improvement) << ','
                         << format_double(ranks_by_metric.at(name)(i)) << '\n';
                }
                file << runs[i].method << ",borda,"
                     << format_double(borda_sums(i)) << ',';
                if (with_log10) file << format_double(std::log10(borda_sums(i))) << ',';
                file << format_double(improvement_pct(
                            borda_sums(baseline), borda_sums(i),
                            Direction::minimize))
                     << ',' << format_double(borda_ranks(i)) << '\n';
            }
        };
        fs::create_directories(out);
        write_report(out / "report.csv", false);
        write_report(out / "report_log10.csv", true);
        return kExitOk;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace dcpde
