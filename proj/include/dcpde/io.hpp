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

#include "dcpde/trainer.hpp"

#include <map>
#include <string>
#include <vector>

namespace dcpde {

// `epoch,wall_time_s,loss_0,loss_b,loss_f,loss_h1,...,lambda_0,...,total`
auto write_trajectory(const TrainReport& report, const std::string& path)
    -> void;

struct TrajectoryFile {
    std::vector<std::string> category_names;
    std::vector<double> epochs;
    std::vector<double> wall_times;
    std::vector<double> totals;
};
auto read_trajectory(const std::string& path) -> TrajectoryFile;

// `metric,value` rows, keys sorted
auto write_metrics(const std::map<std::string, double>& metrics,
                   const std::string& path) -> void;
auto read_metrics(const std::string& path) -> std::map<std::string, double>;

auto format_double(double value) -> std::string;

}  // namespace dcpde
