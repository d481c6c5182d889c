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
#include "dcpde/network.hpp"
#include "dcpde/oracles.hpp"
#include "dcpde/problems.hpp"
#include "dcpde/trainer.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace dcpde;

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Derivative-constrained PDE network trainer";

    py::enum_<OutputTransform>(m, "OutputTransform")
        .value("identity", OutputTransform::identity)
        .value("abs", OutputTransform::abs)
        .value("softplus", OutputTransform::softplus);

    py::class_<NetworkParams>(m, "NetworkParams")
        .def_readwrite("weights", &NetworkParams::weights)
        .def_readwrite("biases", &NetworkParams::biases)
        .def_readwrite("output_transform", &NetworkParams::output_transform)
        .def_property_readonly("input_dim", &NetworkParams::input_dim)
        .def_property_readonly("output_dim", &NetworkParams::output_dim)
        .def_property_readonly("n_parameters", &NetworkParams::n_parameters);

    py::class_<DerivBundle>(m, "DerivBundle")
        .def_readonly("value", &DerivBundle::value)
        .def_readonly("grad", &DerivBundle::grad)
        .def_readonly("diag_hess", &DerivBundle::diag_hess);

    m.def("init_glorot", &init_glorot, py::arg("layer_sizes"), py::arg("seed"));
    m.def("forward", &forward, py::arg("params"), py::arg("point"));
    m.def("forward_batch", &forward_batch, py::arg("params"),
          py::arg("points"));
    m.def("eval_bundle", &eval_bundle, py::arg("params"), py::arg("point"));
    m.def("save_params", &save_params, py::arg("params"), py::arg("path"));
    m.def("load_params", &load_params, py::arg("path"));

    m.def("rmse", &rmse, py::arg("errors"));
    m.def(
        "tvn",
        [](const Eigen::VectorXd& times, const Eigen::VectorXd& errors) {
            return tvn({times, errors});
        },
        py::arg("times"), py::arg("errors"));
    m.def(
        "nauc",
        [](const Eigen::VectorXd& times, const Eigen::VectorXd& errors) {
            return nauc({times, errors});
        },
        py::arg("times"), py::arg("errors"));
    m.def("violation_score", &violation_score, py::arg("h_values"));
    m.def(
        "improvement_pct",
        [](double baseline, double value, bool maximize) {
            return improvement_pct(
                baseline, value,
                maximize ? Direction::maximize : Direction::minimize);
        },
        py::arg("baseline"), py::arg("value"), py::arg("maximize") = false);
    m.def("ranks_with_ties", &ranks_with_ties, py::arg("values"));
    m.def("borda", &borda, py::arg("rank_matrix"));

    m.def("heat_analytic", &heat_analytic, py::arg("x"), py::arg("t"),
          py::arg("lambda_diff"));
    m.def("normal_cdf", &normal_cdf, py::arg("x"));
    m.def("bs_call", &bs_call, py::arg("spot"), py::arg("strike"),
          py::arg("tau"), py::arg("rate"), py::arg("sigma"));
    m.def(
        "mc_lv_price",
        [](double strike, double maturity, long n_paths, int n_steps,
           std::uint64_t seed) {
            MCConfig cfg;
            cfg.n_paths = n_paths;
            cfg.n_steps = n_steps;
            cfg.seed = seed;
            const MCPrice p = mc_lv_price(strike, maturity, {}, cfg);
            return std::make_pair(p.price, p.stderr_);
        },
        py::arg("strike"), py::arg("maturity"), py::arg("n_paths") = 200000,
        py::arg("n_steps") = 200, py::arg("seed") = 0);

    py::class_<TrainReport>(m, "TrainReport")
        .def_readonly("category_names", &TrainReport::category_names)
        .def_readonly("validation", &TrainReport::validation)
        .def_readonly("params", &TrainReport::params)
        .def_readonly("diverged", &TrainReport::diverged)
        .def_property_readonly("epochs",
                               [](const TrainReport& r) {
                                   std::vector<int> out;
                                   for (const auto& rec : r.records)
                                       out.push_back(rec.epoch);
                                   return out;
                               })
        .def_property_readonly("totals", [](const TrainReport& r) {
            std::vector<double> out;
            for (const auto& rec : r.records) out.push_back(rec.total);
            return out;
        });

    m.def("known_methods", &known_methods);
    m.def(
        "train",
        [](const std::string& problem, const std::string& method, int epochs,
           std::uint64_t seed, const std::vector<int>& hidden,
           const py::kwargs& kwargs) {
            TrainConfig cfg;
            cfg.problem = problem;
            cfg.method = method;
            cfg.epochs = epochs;
            cfg.seed = seed;
            cfg.hidden = hidden;
            for (auto& [key, value] : kwargs) {
                const auto name = key.cast<std::string>();
                if (name == "eta_m") cfg.eta_m = value.cast<double>();
                else if (name == "p_m") cfg.p_m = value.cast<int>();
                else if (name == "p_lambda") cfg.p_lambda = value.cast<int>();
                else if (name == "lr_init") cfg.lr_init = value.cast<double>();
                else if (name == "record_stride")
                    cfg.record_stride = value.cast<int>();
                else if (name == "interior_per_axis")
                    cfg.problem_cfg.interior_per_axis = value.cast<int>();
                else if (name == "boundary_points")
                    cfg.problem_cfg.boundary_points = value.cast<long>();
                else if (name == "validation_per_axis")
                    cfg.problem_cfg.validation_per_axis = value.cast<int>();
                else if (name == "dim")
                    cfg.problem_cfg.dim = value.cast<int>();
                else
                    throw std::invalid_argument("unknown option: " + name);
            }
            return train(cfg);
        },
        py::arg("problem"), py::arg("method") = "dcpinn",
        py::arg("epochs") = 10000, py::arg("seed") = 0,
        py::arg("hidden") = std::vector<int>{});
}
