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

#include "dcpde/config.hpp"

#include <fstream>
#include <sstream>

namespace dcpde {

namespace {

auto trim(const std::string& s) -> std::string
{
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

auto split_list(const std::string& value) -> std::vector<std::string>
{
    std::vector<std::string> parts;
    std::stringstream stream(value);
    std::string item;
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

}  // namespace

auto Config::parse_file(const std::string& path) -> Config
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str());
}

auto Config::parse_string(const std::string& text) -> Config
{
    Config cfg;
    std::stringstream stream(text);
    std::string line;
    int lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno)
                              + ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno)
                              + ": empty key");
        cfg.values_[key] = value;
    }
    return cfg;
}

auto Config::has(const std::string& key) const -> bool
{
    return values_.count(key) > 0;
}

auto Config::get_string(const std::string& key,
                        const std::string& fallback) const -> std::string
{
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

auto Config::get_double(const std::string& key, double fallback) const -> double
{
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        size_t used = 0;
        const double value = std::stod(it->second, &used);
        if (used != it->second.size())
            throw ConfigError("trailing characters");
        return value;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": not a number: "
                          + it->second);
    }
}

auto Config::get_int(const std::string& key, long fallback) const -> long
{
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        size_t used = 0;
        const long value = std::stol(it->second, &used);
        if (used != it->second.size()) throw ConfigError("trailing characters");
        return value;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": not an integer: "
                          + it->second);
    }
}

auto Config::get_bool(const std::string& key, bool fallback) const -> bool
{
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("config key " + key + ": not a boolean: " + it->second);
}

auto Config::get_doubles(const std::string& key,
                         const std::vector<double>& fallback) const
    -> std::vector<double>
{
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    for (const auto& item : split_list(it->second)) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("config key " + key + ": not a number: " + item);
        }
    }
    return out;
}

auto Config::get_ints(const std::string& key,
                      const std::vector<long>& fallback) const
    -> std::vector<long>
{
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<long> out;
    for (const auto& item : split_list(it->second)) {
        try {
            out.push_back(std::stol(item));
        } catch (const std::exception&) {
            throw ConfigError("config key " + key + ": not an integer: "
                              + item);
        }
    }
    return out;
}

auto Config::get_strings(const std::string& key,
                         const std::vector<std::string>& fallback) const
    -> std::vector<std::string>
{
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return split_list(it->second);
}

auto Config::set(const std::string& key, const std::string& value) -> void
{
    values_[key] = value;
}

}  // namespace dcpde
