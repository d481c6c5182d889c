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

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace dcpde {

// Synthetic local-volatility model sigma(x,t) = sigma_A + A/x + B*t.
struct LVParams {
    double sigma_A = 0.2;
    double A = 0.1;
    double B = 0.2;
    double s0 = 1.0;
    double r = 0.05;
    double noise_level = 0.05;
};

struct MCConfig {
    long n_paths = 200000;
    int n_steps = 200;
    bool antithetic = true;
    std::uint64_t seed = 0;
};

struct MCPrice {
    double price = 0.0;
    double stderr_ = 0.0;
};

// One cached pricing observation of the local-volatility dataset.
struct LVObservation {
    double x = 0.0;  // strike
    double t = 0.0;  // maturity
    double price_clean = 0.0;
    double price_noisy = 0.0;
    double stderr_ = 0.0;
};

// u(x, t) = e^{-lambda pi^2 d t} prod_i sin(pi x_i), with exact u_t and
// u_{x_i x_i} companions.
auto heat_analytic(const Eigen::VectorXd& x, double t, double lambda_diff)
    -> double;
auto heat_analytic_dt(const Eigen::VectorXd& x, double t, double lambda_diff)
    -> double;
auto heat_analytic_dxx(const Eigen::VectorXd& x, double t, double lambda_diff,
                       int axis) -> double;

auto normal_cdf(double x) -> double;

// European call under Black-Scholes; handles the tau->0 and K->0 limits.
auto bs_call(double spot, double strike, double tau, double rate, double sigma)
    -> double;

auto lv_sigma(double x, double t, const LVParams& params) -> double;

// Log-Euler Monte Carlo price of a call under the local-volatility model,
// antithetic by default, deterministic per seed.
auto mc_lv_price(double strike, double maturity, const LVParams& params,
                 const MCConfig& cfg) -> MCPrice;

// Prices a whole observation set from one shared set of simulated paths
// (maturities snapped to the step grid); far cheaper than per-observation
// simulation when building training datasets.
auto mc_lv_price_batch(const std::vector<std::pair<double, double>>& strikes_maturities,
                       const LVParams& params, const MCConfig& cfg)
    -> std::vector<MCPrice>;

// u_i * (1 + noise_level * eta_i), eta i.i.d. standard normal.
auto add_noise(const Eigen::VectorXd& prices, double noise_level,
               std::uint64_t seed) -> Eigen::VectorXd;

// Rejection-sampled standard normal truncated to [lo, hi].
auto trunc_normal(double lo, double hi, std::uint64_t seed, long count)
    -> Eigen::VectorXd;

// Full synthetic dataset: observation locations, clean and noisy prices.
auto make_lv_dataset(long n_obs, const LVParams& params, const MCConfig& cfg,
                     std::uint64_t obs_seed) -> std::vector<LVObservation>;

auto write_lv_dataset(const std::vector<LVObservation>& obs,
                      const std::string& path) -> void;
auto read_lv_dataset(const std::string& path) -> std::vector<LVObservation>;

}  // namespace dcpde
