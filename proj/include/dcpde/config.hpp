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

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcpde {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat `key = value` configuration with dotted section keys, e.g.
// `training.epochs = 10000`.  Lines starting with '#' are comments.
class Config {
public:
    static auto parse_file(const std::string& path) -> Config;
    static auto parse_string(const std::string& text) -> Config;

    [[nodiscard]] auto has(const std::string& key) const -> bool;
    [[nodiscard]] auto get_string(const std::string& key,
                                  const std::string& fallback) const
        -> std::string;
    [[nodiscard]] auto get_double(const std::string& key, double fallback) const
        -> double;
    [[nodiscard]] auto get_int(const std::string& key, long fallback) const
        -> long;
    [[nodiscard]] auto get_bool(const std::string& key, bool fallback) const
        -> bool;
    // comma-separated lists
    [[nodiscard]] auto get_doubles(const std::string& key,
                                   const std::vector<double>& fallback) const
        -> std::vector<double>;
    [[nodiscard]] auto get_ints(const std::string& key,
                                const std::vector<long>& fallback) const
        -> std::vector<long>;
    [[nodiscard]] auto get_strings(const std::string& key,
                                   const std::vector<std::string>& fallback)
        const -> std::vector<std::string>;

    auto set(const std::string& key, const std::string& value) -> void;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace dcpde
