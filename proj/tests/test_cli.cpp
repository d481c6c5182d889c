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
#include "dcpde/config.hpp"
#include "dcpde/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace dcpde;

namespace {

auto make_temp_dir(const std::string& tag) -> fs::path
{
    const fs::path dir = fs::temp_directory_path() / ("dcpde_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

auto write_file(const fs::path& path, const std::string& text) -> void
{
    std::ofstream out(path);
    out << text;
}

auto read_file(const fs::path& path) -> std::string
{
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Drops the wall_time_s column so byte comparisons ignore timing noise.
auto strip_wall_time(const std::string& csv) -> std::string
{
    std::stringstream in(csv);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        const auto first = line.find(',');
        const auto second = line.find(',', first + 1);
        out += line.substr(0, first) + line.substr(second) + '\n';
    }
    return out;
}

const std::string tiny_heat =
    "problem = heat\n"
    "method = dcpinn\n"
    "training.epochs = 60\n"
    "training.record_stride = 20\n"
    "training.p_m = 10\n"
    "training.p_lambda = 30\n"
    "training.hidden = 8,8\n"
    "problem.interior_per_axis = 5\n"
    "problem.boundary_points = 11\n"
    "problem.validation_per_axis = 7\n";

}  // namespace

TEST_CASE("config parses typed keys with fallbacks")
{
    const auto cfg = Config::parse_string(
        "# comment line\n"
        "problem = heat\n"
        "training.epochs = 500\n"
        "training.lr = 2.5e-3\n"
        "training.hidden = 16,32\n"
        "flag = true\n"
        "sweep.eta_m = 0.1,0.01\n"
        "ablate.methods = pinn, dcpinn\n");
    CHECK(cfg.has("problem"));
    CHECK(!cfg.has("missing"));
    CHECK(cfg.get_string("problem", "x") == "heat");
    CHECK(cfg.get_string("missing", "x") == "x");
    CHECK(cfg.get_int("training.epochs", 0) == 500);
    CHECK(cfg.get_double("training.lr", 0.0) == doctest::Approx(2.5e-3));
    CHECK(cfg.get_bool("flag", false));
    CHECK(cfg.get_ints("training.hidden", {}) == std::vector<long>{16, 32});
    CHECK(cfg.get_doubles("sweep.eta_m", {})
          == std::vector<double>{0.1, 0.01});
    CHECK(cfg.get_strings("ablate.methods", {})
          == std::vector<std::string>{"pinn", "dcpinn"});
}

TEST_CASE("config rejects malformed lines and bad values")
{
    CHECK_THROWS_AS((void)Config::parse_string("no equals sign\n"),
                    ConfigError);
    const auto cfg = Config::parse_string("k = notanumber\n");
    CHECK_THROWS_AS((void)cfg.get_int("k", 0), ConfigError);
    CHECK_THROWS_AS((void)cfg.get_double("k", 0.0), ConfigError);
    CHECK_THROWS_AS((void)Config::parse_file("/nonexistent/path.cfg"),
                    ConfigError);
}

TEST_CASE("config set overrides parsed values")
{
    auto cfg = Config::parse_string("a = 1\n");
    cfg.set("a", "2");
    cfg.set("b", "3");
    CHECK(cfg.get_int("a", 0) == 2);
    CHECK(cfg.get_int("b", 0) == 3);
}

TEST_CASE("metrics csv roundtrips with sorted keys")
{
    const auto dir = make_temp_dir("metrics");
    const std::map<std::string, double> metrics = {
        {"E_u", 1.25e-3}, {"viol_h_t", 0.0}, {"E_h_xx", 0.4}};
    write_metrics(metrics, (dir / "m.csv").string());
    CHECK(read_metrics((dir / "m.csv").string()) == metrics);
    // keys appear in sorted order
    const auto text = read_file(dir / "m.csv");
    CHECK(text.find("E_h_xx") < text.find("E_u"));
    CHECK(text.find("E_u") < text.find("viol_h_t"));
    fs::remove_all(dir);
}

TEST_CASE("trajectory csv has the pinned header and roundtrips")
{
    TrainReport report;
    report.category_names = {"0", "b", "f", "h1", "h2"};
    report.records.push_back(
        {0, 0.0, {1, 2, 3, 4, 5}, {1, 1, 1, 1, 1}, 15.0});
    report.records.push_back(
        {100, 0.5, {0.5, 0.25, 0.125, 0.0, 0.0}, {1, 2, 3, 4, 5}, 0.875});

    const auto dir = make_temp_dir("traj");
    const auto path = (dir / "trajectory.csv").string();
    write_trajectory(report, path);

    const auto text = read_file(path);
    CHECK(text.rfind("epoch,wall_time_s,loss_0,loss_b,loss_f,loss_h1,loss_h2,"
                     "lambda_0,lambda_b,lambda_f,lambda_h1,lambda_h2,total",
                     0)
          == 0);

    const auto traj = read_trajectory(path);
    CHECK(traj.category_names
          == std::vector<std::string>{"0", "b", "f", "h1", "h2"});
    CHECK(traj.epochs == std::vector<double>{0, 100});
    CHECK(traj.totals == std::vector<double>{15.0, 0.875});
    fs::remove_all(dir);
}

TEST_CASE("format_double preserves doubles exactly")
{
    for (double v : {1.0, 0.1, 1e-17, -3.25, 12345.6789e-4})
        CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("run command writes every artifact and exits 0")
{
    const auto dir = make_temp_dir("run");
    write_file(dir / "run.cfg", tiny_heat);
    CliOptions opts;
    opts.config_path = (dir / "run.cfg").string();
    opts.out_dir = (dir / "out").string();
    CHECK(cmd_run(opts) == kExitOk);
    for (const char* name : {"trajectory.csv", "metrics.csv", "model.dcpde",
                             "profile_u.csv", "profile_u_x.csv",
                             "profile_u_xx.csv", "profile_u_t.csv"})
        CHECK(fs::exists(dir / "out" / name));

    const auto metrics = read_metrics((dir / "out" / "metrics.csv").string());
    for (const char* key :
         {"E_u", "E_h_xx", "E_h_t", "viol_h_xx", "viol_h_t"})
        CHECK(metrics.count(key) == 1);
    fs::remove_all(dir);
}

TEST_CASE("run command is byte deterministic apart from wall time")
{
    const auto dir = make_temp_dir("det");
    write_file(dir / "run.cfg", tiny_heat);
    CliOptions opts;
    opts.config_path = (dir / "run.cfg").string();
    for (const char* out : {"a", "b"}) {
        opts.out_dir = (dir / out).string();
        REQUIRE(cmd_run(opts) == kExitOk);
    }
    CHECK(strip_wall_time(read_file(dir / "a" / "trajectory.csv"))
          == strip_wall_time(read_file(dir / "b" / "trajectory.csv")));
    CHECK(read_file(dir / "a" / "model.dcpde")
          == read_file(dir / "b" / "model.dcpde"));
    CHECK(read_file(dir / "a" / "profile_u.csv")
          == read_file(dir / "b" / "profile_u.csv"));
    fs::remove_all(dir);
}

TEST_CASE("run command rejects unknown methods and problems with exit 2")
{
    const auto dir = make_temp_dir("bad");
    write_file(dir / "m.cfg", "problem = heat\nmethod = bogus\n");
    write_file(dir / "p.cfg", "problem = bogus\nmethod = pinn\n");
    CliOptions opts;
    opts.out_dir = (dir / "out").string();
    opts.config_path = (dir / "m.cfg").string();
    CHECK(cmd_run(opts) == kExitUsage);
    opts.config_path = (dir / "p.cfg").string();
    CHECK(cmd_run(opts) == kExitUsage);
    opts.config_path = (dir / "missing.cfg").string();
    CHECK(cmd_run(opts) == kExitUsage);
    fs::remove_all(dir);
}

TEST_CASE("seed override changes the trained model")
{
    const auto dir = make_temp_dir("seed");
    write_file(dir / "run.cfg", tiny_heat);
    CliOptions opts;
    opts.config_path = (dir / "run.cfg").string();
    opts.out_dir = (dir / "s0").string();
    REQUIRE(cmd_run(opts) == kExitOk);
    opts.seed = 1;
    opts.out_dir = (dir / "s1").string();
    REQUIRE(cmd_run(opts) == kExitOk);
    CHECK(read_file(dir / "s0" / "model.dcpde")
          != read_file(dir / "s1" / "model.dcpde"));
    fs::remove_all(dir);
}

TEST_CASE("ablate command writes per-run directories and a summary table")
{
    const auto dir = make_temp_dir("ablate");
    write_file(dir / "abl.cfg",
               tiny_heat + "ablate.methods = pinn,dcpinn\n");
    CliOptions opts;
    opts.config_path = (dir / "abl.cfg").string();
    opts.out_dir = (dir / "out").string();
    opts.seeds = {0, 1};
    CHECK(cmd_ablate(opts) == kExitOk);
    for (const char* sub : {"pinn_seed0", "pinn_seed1", "dcpinn_seed0",
                            "dcpinn_seed1"})
        CHECK(fs::exists(dir / "out" / sub / "metrics.csv"));
    const auto text = read_file(dir / "out" / "ablation.csv");
    CHECK(text.rfind("method,", 0) == 0);
    CHECK(text.find("\npinn,") != std::string::npos);
    CHECK(text.find("\ndcpinn,") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("sweep command covers the requested grid")
{
    const auto dir = make_temp_dir("sweep");
    write_file(dir / "sw.cfg",
               tiny_heat
                   + "sweep.eta_m = 0.01,0.1\n"
                     "sweep.p_m = 10\n"
                     "sweep.p_lambda = 30\n");
    CliOptions opts;
    opts.config_path = (dir / "sw.cfg").string();
    opts.out_dir = (dir / "out").string();
    CHECK(cmd_sweep(opts) == kExitOk);
    CHECK(fs::exists(dir / "out" / "cell_0" / "metrics.csv"));
    CHECK(fs::exists(dir / "out" / "cell_1" / "metrics.csv"));

    const auto text = read_file(dir / "out" / "sweep.csv");
    CHECK(text.rfind("eta_m,p_m,p_lambda,metric,value", 0) == 0);
    CHECK(text.find("0.01,10,30,status,0") != std::string::npos);
    CHECK(text.find(format_double(0.1) + ",10,30,status,0")
          != std::string::npos);
    CHECK(text.find("log10_E_u") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("report command ranks runs against the baseline")
{
    const auto dir = make_temp_dir("report");
    write_file(dir / "run.cfg", tiny_heat);
    CliOptions opts;
    opts.config_path = (dir / "run.cfg").string();
    opts.out_dir = (dir / "a").string();
    REQUIRE(cmd_run(opts) == kExitOk);
    opts.out_dir = (dir / "b").string();
    opts.seed = 1;
    REQUIRE(cmd_run(opts) == kExitOk);

    write_file(dir / "rep.cfg",
               "report.runs = " + (dir / "a").string() + ","
                   + (dir / "b").string() + "\nreport.baseline = "
                   + (dir / "a").string() + "\n");
    CliOptions rep;
    rep.config_path = (dir / "rep.cfg").string();
    rep.out_dir = (dir / "out").string();
    CHECK(cmd_report(rep) == kExitOk);

    const auto text = read_file(dir / "out" / "report.csv");
    CHECK(text.rfind("method,metric,value,improvement_pct,rank", 0) == 0);
    // the baseline improves on itself by exactly zero
    CHECK(text.find((dir / "a").filename().string() + ",E_u,")
          != std::string::npos);
    CHECK(fs::exists(dir / "out" / "report_log10.csv"));

    // running the report twice yields identical bytes
    rep.out_dir = (dir / "out2").string();
    REQUIRE(cmd_report(rep) == kExitOk);
    CHECK(read_file(dir / "out" / "report.csv")
          == read_file(dir / "out2" / "report.csv"));
    fs::remove_all(dir);
}
