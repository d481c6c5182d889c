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

#include "dcpde/oracles.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dcpde {

namespace {

constexpr double kPi = std::numbers::pi;

// Per-path stream seeding; keeps results independent of evaluation order.
auto splitmix64(std::uint64_t x) -> std::uint64_t
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

auto path_rng(std::uint64_t seed, std::uint64_t stream) -> std::mt19937_64
{
    return std::mt19937_64(splitmix64(seed ^ splitmix64(stream + 1)));
}

}  // namespace

auto heat_analytic(const Eigen::VectorXd& x, double t, double lambda_diff)
    -> double
{
    const double d = static_cast<double>(x.size());
    double prod = std::exp(-lambda_diff * kPi * kPi * d * t);
    for (long i = 0; i < x.size(); ++i) prod *= std::sin(kPi * x(i));
    return prod;
}

auto heat_analytic_dt(const Eigen::VectorXd& x, double t, double lambda_diff)
    -> double
{
    const double d = static_cast<double>(x.size());
    return -lambda_diff * kPi * kPi * d * heat_analytic(x, t, lambda_diff);
}

auto heat_analytic_dxx(const Eigen::VectorXd& x, double t, double lambda_diff,
                       int axis) -> double
{
    (void)axis;  // all axes carry the same -pi^2 factor
    return -kPi * kPi * heat_analytic(x, t, lambda_diff);
}

auto normal_cdf(double x) -> double
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

auto bs_call(double spot, double strike, double tau, double rate, double sigma)
    -> double
{
    if (strike <= 0.0) return spot;
    if (tau <= 0.0) return std::max(spot - strike, 0.0);
    if (sigma <= 0.0)
        return std::max(spot - strike * std::exp(-rate * tau), 0.0);
    const double vol = sigma * std::sqrt(tau);
    const double d_plus =
        (std::log(spot / strike) + (rate + 0.5 * sigma * sigma) * tau) / vol;
    const double d_minus = d_plus - vol;
    return spot * normal_cdf(d_plus) -
           strike * std::exp(-rate * tau) * normal_cdf(d_minus);
}

auto lv_sigma(double x, double t, const LVParams& params) -> double
{
    if (x <= 0.0)
        throw std::domain_error("lv_sigma: x must be positive");
    return params.sigma_A + params.A / x + params.B * t;
}

namespace {

// Log-Euler step for one path; sigma evaluated with the spot clipped to
// 0.1*s0 so the A/S term stays finite.
inline auto lv_step(double spot, double t, double dt, double z,
                    const LVParams& params) -> double
{
    const double clipped = std::max(spot, 0.1 * params.s0);
    const double sigma = lv_sigma(clipped, t, params);
    return spot *
           std::exp((params.r - 0.5 * sigma * sigma) * dt +
                    sigma * std::sqrt(dt) * z);
}

auto finalize(double sum, double sumsq, long n) -> MCPrice
{
    MCPrice out;
    out.price = sum / static_cast<double>(n);
    const double var =
        std::max(0.0, sumsq / static_cast<double>(n) - out.price * out.price);
    out.stderr_ = std::sqrt(var / static_cast<double>(n));
    return out;
}

}  // namespace

auto mc_lv_price(double strike, double maturity, const LVParams& params,
                 const MCConfig& cfg) -> MCPrice
{
    if (maturity <= 0.0 || strike <= 0.0)
        throw std::invalid_argument("mc_lv_price: need positive strike/maturity");
    if (cfg.antithetic && cfg.n_paths % 2 != 0)
        throw std::invalid_argument("mc_lv_price: n_paths must be even");

    const double dt = maturity / cfg.n_steps;
    const double disc = std::exp(-params.r * maturity);
    const long n_units = cfg.antithetic ? cfg.n_paths / 2 : cfg.n_paths;

    double sum = 0.0;
    double sumsq = 0.0;
    for (long unit = 0; unit < n_units; ++unit) {
        auto rng = path_rng(cfg.seed, static_cast<std::uint64_t>(unit));
        std::normal_distribution<double> normal(0.0, 1.0);
        double spot_a = params.s0;
        double spot_b = params.s0;
        for (int k = 0; k < cfg.n_steps; ++k) {
            const double t = k * dt;
            const double z = normal(rng);
            spot_a = lv_step(spot_a, t, dt, z, params);
            if (cfg.antithetic) spot_b = lv_step(spot_b, t, dt, -z, params);
        }
        double estimate = disc * std::max(spot_a - strike, 0.0);
        if (cfg.antithetic)
            estimate = 0.5 * (estimate + disc * std::max(spot_b - strike, 0.0));
        sum += estimate;
        sumsq += estimate * estimate;
    }
    return finalize(sum, sumsq, n_units);
}

auto mc_lv_price_batch(
    const std::vector<std::pair<double, double>>& strikes_maturities,
    const LVParams& params, const MCConfig& cfg) -> std::vector<MCPrice>
{
    if (cfg.antithetic && cfg.n_paths % 2 != 0)
        throw std::invalid_argument("mc_lv_price_batch: n_paths must be even");
    const size_t n_obs = strikes_maturities.size();
    if (n_obs == 0) return {};

    double t_max = 0.0;
    for (const auto& [strike, maturity] : strikes_maturities) {
        if (maturity <= 0.0 || strike <= 0.0)
            throw std::invalid_argument("mc_lv_price_batch: bad observation");
        t_max = std::max(t_max, maturity);
    }
    const double dt = t_max / cfg.n_steps;

    // bucket observations by the step their (snapped) maturity lands on
    std::vector<std::vector<size_t>> bucket(cfg.n_steps + 1);
    for (size_t j = 0; j < n_obs; ++j) {
        int k = static_cast<int>(std::lround(strikes_maturities[j].second / dt));
        k = std::max(1, std::min(cfg.n_steps, k));
        bucket[static_cast<size_t>(k)].push_back(j);
    }

    const long n_units = cfg.antithetic ? cfg.n_paths / 2 : cfg.n_paths;
    std::vector<double> sum(n_obs, 0.0);
    std::vector<double> sumsq(n_obs, 0.0);
    for (long unit = 0; unit < n_units; ++unit) {
        auto rng = path_rng(cfg.seed, static_cast<std::uint64_t>(unit));
        std::normal_distribution<double> normal(0.0, 1.0);
        double spot_a = params.s0;
        double spot_b = params.s0;
        for (int k = 1; k <= cfg.n_steps; ++k) {
            const double t = (k - 1) * dt;
            const double z = normal(rng);
            spot_a = lv_step(spot_a, t, dt, z, params);
            if (cfg.antithetic) spot_b = lv_step(spot_b, t, dt, -z, params);
            for (const size_t j : bucket[static_cast<size_t>(k)]) {
                const double strike = strikes_maturities[j].first;
                const double disc = std::exp(-params.r * k * dt);
                double estimate = disc * std::max(spot_a - strike, 0.0);
                if (cfg.antithetic)
                    estimate = 0.5 * (estimate +
                                      disc * std::max(spot_b - strike, 0.0));
                sum[j] += estimate;
                sumsq[j] += estimate * estimate;
            }
        }
    }

    std::vector<MCPrice> out(n_obs);
    for (size_t j = 0; j < n_obs; ++j)
        out[j] = finalize(sum[j], sumsq[j], n_units);
    return out;
}

auto add_noise(const Eigen::VectorXd& prices, double noise_level,
               std::uint64_t seed) -> Eigen::VectorXd
{
    if (noise_level < 0.0)
        throw std::invalid_argument("add_noise: negative noise level");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd noisy(prices.size());
    for (long i = 0; i < prices.size(); ++i)
        noisy(i) = prices(i) * (1.0 + noise_level * normal(rng));
    return noisy;
}

auto trunc_normal(double lo, double hi, std::uint64_t seed, long count)
    -> Eigen::VectorXd
{
    if (lo >= hi) throw std::invalid_argument("trunc_normal: empty interval");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd out(count);
    for (long i = 0; i < count; ++i) {
        double z = normal(rng);
        while (z < lo || z > hi) z = normal(rng);
        out(i) = z;
    }
    return out;
}

auto make_lv_dataset(long n_obs, const LVParams& params, const MCConfig& cfg,
                     std::uint64_t obs_seed) -> std::vector<LVObservation>
{
    // observed strikes from TruncNorm([-1,1]) mapped onto [0.1*s0, 2.0],
    // maturities from TruncNorm([0.1, 2.0]) scaled onto [0.01, 1.0]
    const Eigen::VectorXd zx = trunc_normal(-1.0, 1.0, obs_seed, n_obs);
    const Eigen::VectorXd zt =
        trunc_normal(0.1, 2.0, splitmix64(obs_seed + 17), n_obs);
    const double x_lo = 0.1 * params.s0;
    const double x_hi = 2.0;
    const double t_lo = 0.01;
    const double t_hi = 1.0;

    std::vector<std::pair<double, double>> locations(n_obs);
    const double dt = t_hi / cfg.n_steps;
    for (long i = 0; i < n_obs; ++i) {
        const double strike =
            0.5 * (x_lo + x_hi) + zx(i) * 0.5 * (x_hi - x_lo);
        double maturity = t_lo + (zt(i) - 0.1) / 1.9 * (t_hi - t_lo);
        // snap to the shared path grid so prices and locations agree exactly
        int k = static_cast<int>(std::lround(maturity / dt));
        k = std::max(1, std::min(cfg.n_steps, k));
        maturity = k * dt;
        locations[i] = { strike, maturity };
    }

    const std::vector<MCPrice> prices =
        mc_lv_price_batch(locations, params, cfg);
    Eigen::VectorXd clean(n_obs);
    for (long i = 0; i < n_obs; ++i) clean(i) = prices[i].price;
    const Eigen::VectorXd noisy =
        add_noise(clean, params.noise_level, splitmix64(obs_seed + 41));

    std::vector<LVObservation> out(n_obs);
    for (long i = 0; i < n_obs; ++i) {
        out[i] = { locations[i].first, locations[i].second, clean(i),
                   noisy(i), prices[i].stderr_ };
    }
    return out;
}

auto write_lv_dataset(const std::vector<LVObservation>& obs,
                      const std::string& path) -> void
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset: " + path);
    out.precision(17);
    out << "x,t,price_clean,price_noisy,stderr\n";
    for (const auto& o : obs)
        out << o.x << "," << o.t << "," << o.price_clean << ","
            << o.price_noisy << "," << o.stderr_ << "\n";
}

auto read_lv_dataset(const std::string& path) -> std::vector<LVObservation>
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read dataset: " + path);
    std::string line;
    std::getline(in, line);
    if (line != "x,t,price_clean,price_noisy,stderr")
        throw std::runtime_error("bad dataset header: " + line);
    std::vector<LVObservation> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        LVObservation o;
        char comma = 0;
        ss >> o.x >> comma >> o.t >> comma >> o.price_clean >> comma >>
            o.price_noisy >> comma >> o.stderr_;
        if (!ss) throw std::runtime_error("bad dataset row: " + line);
        out.push_back(o);
    }
    return out;
}

}  // namespace dcpde
