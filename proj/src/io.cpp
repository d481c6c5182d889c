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

#include "dcpde/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dcpde {

auto format_double(double value) -> std::string
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

auto write_trajectory(const TrainReport& report, const std::string& path)
    -> void
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "epoch,wall_time_s";
    for (const auto& name : report.category_names) out << ",loss_" << name;
    for (const auto& name : report.category_names) out << ",lambda_" << name;
    out << ",total\n";
    for (const auto& rec : report.records) {
        out << rec.epoch << ',' << format_double(rec.wall_time_s);
        for (double loss : rec.losses) out << ',' << format_double(loss);
        for (double lam : rec.lambdas) out << ',' << format_double(lam);
        out << ',' << format_double(rec.total) << '\n';
    }
}

auto read_trajectory(const std::string& path) -> TrajectoryFile
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty trajectory file: " + path);

    TrajectoryFile traj;
    std::stringstream header(line);
    std::string column;
    std::vector<std::string> columns;
    while (std::getline(header, column, ',')) columns.push_back(column);
    for (const auto& name : columns)
        if (name.rfind("loss_", 0) == 0)
            traj.category_names.push_back(name.substr(5));

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
        if (cells.size() != columns.size())
            throw std::runtime_error("ragged trajectory row in " + path);
        traj.epochs.push_back(cells[0]);
        traj.wall_times.push_back(cells[1]);
        traj.totals.push_back(cells.back());
    }
    return traj;
}

auto write_metrics(const std::map<std::string, double>& metrics,
                   const std::string& path) -> void
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "metric,value\n";
    for (const auto& [name, value] : metrics)
        out << name << ',' << format_double(value) << '\n';
}

auto read_metrics(const std::string& path) -> std::map<std::string, double>
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::map<std::string, double> metrics;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("bad metrics row in " + path);
        metrics[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
    }
    return metrics;
}

}  // namespace dcpde
