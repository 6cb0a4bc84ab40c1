// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uavnoma/scenario.hpp"

#include "uavnoma/random.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

namespace uavnoma {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size() || !std::isfinite(v)) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as a number");
    }
}

long long parse_integer(const std::string& key, const std::string& value)
{
    long long v = 0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as an integer");
    }
    return v;
}

// Shortest text that parses back to the same double.
std::string format_double(double v)
{
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

struct KeySpec {
    const char* name;
    std::function<void(ScenarioConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

template <typename T>
KeySpec real_key(const char* name, T ScenarioConfig::*member)
{
    return {name,
            [member](ScenarioConfig& c, const std::string& k, const std::string& v) { c.*member = parse_double(k, v); },
            [member](const ScenarioConfig& c) { return format_double(c.*member); }};
}

KeySpec int_key(const char* name, int ScenarioConfig::*member)
{
    return {name,
            [member](ScenarioConfig& c, const std::string& k, const std::string& v) {
                const auto parsed = parse_integer(k, v);
                if (parsed < INT32_MIN || parsed > INT32_MAX) {
                    throw ConfigError("config key '" + k + "': value out of integer range");
                }
                c.*member = static_cast<int>(parsed);
            },
            [member](const ScenarioConfig& c) { return std::to_string(c.*member); }};
}

const std::vector<KeySpec>& key_table()
{
    static const std::vector<KeySpec> table = {
        real_key("macro_radius_m", &ScenarioConfig::macro_radius_m),
        int_key("n_macro_users", &ScenarioConfig::n_macro_users),
        int_key("n_uavs", &ScenarioConfig::n_uavs),
        real_key("uav_cell_radius_m", &ScenarioConfig::uav_cell_radius_m),
        real_key("uav_height_m", &ScenarioConfig::uav_height_m),
        real_key("min_bs_uav_distance_m", &ScenarioConfig::min_bs_uav_distance_m),
        int_key("users_per_cell", &ScenarioConfig::users_per_cell),
        real_key("carrier_ghz", &ScenarioConfig::carrier_ghz),
        real_key("bandwidth_hz", &ScenarioConfig::bandwidth_hz),
        {"n_subchannels",
         [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             if (v == "auto") {
                 c.n_subchannels_override.reset();
                 return;
             }
             const auto parsed = parse_integer(k, v);
             if (parsed < 1 || parsed > INT32_MAX) {
                 throw ConfigError("config key 'n_subchannels': must be >= 1 (got " + v + ")");
             }
             c.n_subchannels_override = static_cast<int>(parsed);
         },
         [](const ScenarioConfig& c) { return std::to_string(c.n_subchannels()); }},
        real_key("noise_psd_dbm_hz", &ScenarioConfig::noise_psd_dbm_hz),
        real_key("p_uav_max_w", &ScenarioConfig::p_uav_max_w),
        real_key("p_hover_w", &ScenarioConfig::p_hover_w),
        real_key("p_bs_max_w", &ScenarioConfig::p_bs_max_w),
        real_key("interference_cap_w", &ScenarioConfig::interference_cap_w),
        real_key("eps_out", &ScenarioConfig::eps_out),
        real_key("sigma_e2", &ScenarioConfig::sigma_e2),
        real_key("env_u", &ScenarioConfig::env_u),
        real_key("env_v", &ScenarioConfig::env_v),
        real_key("env_a", &ScenarioConfig::env_a),
        real_key("alpha_pl", &ScenarioConfig::alpha_pl),
        real_key("eta_nlos", &ScenarioConfig::eta_nlos),
        real_key("macro_pl_exponent", &ScenarioConfig::macro_pl_exponent),
        real_key("ftpa_decay", &ScenarioConfig::ftpa_decay),
        real_key("tol_dc", &ScenarioConfig::tol_dc),
        real_key("tol_power", &ScenarioConfig::tol_power),
        int_key("max_iters", &ScenarioConfig::max_iters),
        {"seed",
         [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             const auto parsed = parse_integer(k, v);
             if (parsed < 0) {
                 throw ConfigError("config key 'seed': must be non-negative");
             }
             c.seed = static_cast<std::uint64_t>(parsed);
         },
         [](const ScenarioConfig& c) { return std::to_string(c.seed); }},
    };
    return table;
}

void require(bool ok, const std::string& key, const std::string& bound)
{
    if (!ok) {
        throw ConfigError("config key '" + key + "' out of range: must be " + bound);
    }
}

} // namespace

int ScenarioConfig::n_subchannels() const
{
    if (n_subchannels_override) {
        return *n_subchannels_override;
    }
    return (users_per_cell + 1) / 2;
}

double ScenarioConfig::subchannel_bandwidth_hz() const
{
    return bandwidth_hz / n_subchannels();
}

double ScenarioConfig::noise_power_w() const
{
    const double n0_w_per_hz = std::pow(10.0, (noise_psd_dbm_hz - 30.0) / 10.0);
    return subchannel_bandwidth_hz() * n0_w_per_hz;
}

double ScenarioConfig::macro_power_per_subchannel_w() const
{
    return p_bs_max_w / n_subchannels();
}

void ScenarioConfig::validate() const
{
    require(macro_radius_m > 0, "macro_radius_m", "> 0");
    require(n_macro_users > 0, "n_macro_users", "> 0");
    require(n_uavs > 0, "n_uavs", "> 0");
    require(uav_cell_radius_m > 0, "uav_cell_radius_m", "> 0");
    require(uav_height_m > 0, "uav_height_m", "> 0");
    require(min_bs_uav_distance_m > 0, "min_bs_uav_distance_m", "> 0");
    require(min_bs_uav_distance_m < macro_radius_m, "min_bs_uav_distance_m", "< macro_radius_m");
    require(users_per_cell > 0, "users_per_cell", "> 0");
    require(carrier_ghz > 0, "carrier_ghz", "> 0");
    require(bandwidth_hz > 0, "bandwidth_hz", "> 0");
    require(n_subchannels() > 0, "n_subchannels", ">= 1");
    require(p_uav_max_w > 0, "p_uav_max_w", "> 0");
    require(p_hover_w > 0, "p_hover_w", "> 0");
    require(p_bs_max_w > 0, "p_bs_max_w", "> 0");
    require(interference_cap_w >= 0, "interference_cap_w", ">= 0");
    require(eps_out > 0 && eps_out < 1, "eps_out", "in (0, 1)");
    require(sigma_e2 >= 0 && sigma_e2 < 1, "sigma_e2", "in [0, 1)");
    require(env_u > 0, "env_u", "> 0");
    require(env_v > 0, "env_v", "> 0");
    require(alpha_pl > 0, "alpha_pl", "> 0");
    require(eta_nlos > 0 && eta_nlos <= 1, "eta_nlos", "in (0, 1]");
    require(macro_pl_exponent > 0, "macro_pl_exponent", "> 0");
    require(ftpa_decay >= 0, "ftpa_decay", ">= 0");
    require(tol_dc > 0, "tol_dc", "> 0");
    require(tol_power > 0, "tol_power", "> 0");
    require(max_iters > 0, "max_iters", "> 0");
}

void set_config_value(ScenarioConfig& config, const std::string& key, const std::string& value)
{
    const auto& table = key_table();
    const auto it = std::find_if(table.begin(), table.end(), [&](const KeySpec& k) { return key == k.name; });
    if (it == table.end()) {
        throw ConfigError("unknown config key '" + key + "'");
    }
    it->set(config, key, value);
}

std::vector<std::string> describe_config(const ScenarioConfig& config)
{
    std::vector<std::string> lines;
    for (const auto& k : key_table()) {
        lines.push_back(std::string(k.name) + "=" + k.get(config));
    }
    return lines;
}

ScenarioConfig parse_config(const std::string& text, ScenarioConfig base)
{
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line.substr(0, line.find('#')));
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
        }
        set_config_value(base, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
    }
    base.validate();
    return base;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

double horizontal_distance(const Vec3& a, const Vec3& b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

double distance(const Vec3& a, const Vec3& b)
{
    return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

namespace {

Vec3 uniform_in_annulus(Rng& rng, const Vec3& center, double r_min, double r_max)
{
    const double u = uniform01(rng);
    const double r = std::sqrt(r_min * r_min + u * (r_max * r_max - r_min * r_min));
    const double theta = 2.0 * std::numbers::pi * uniform01(rng);
    return {center.x + r * std::cos(theta), center.y + r * std::sin(theta), 0.0};
}

} // namespace

Topology generate_topology(const ScenarioConfig& config, std::uint64_t seed)
{
    Rng rng = make_stream(seed, 0x746f706fULL);
    Topology topo;
    topo.bs_position = {0.0, 0.0, 0.0};

    // Draw order is fixed (UAVs, users, macro users) so that changing the
    // height or hover power leaves every horizontal position unchanged.
    for (int i = 0; i < config.n_uavs; ++i) {
        auto p = uniform_in_annulus(rng, topo.bs_position, config.min_bs_uav_distance_m, config.macro_radius_m);
        p.z = config.uav_height_m;
        topo.uav_positions.push_back(p);
    }
    for (int i = 0; i < config.n_uavs; ++i) {
        const Vec3& uav = topo.uav_positions[static_cast<std::size_t>(i)];
        std::vector<Vec3> users;
        std::vector<double> dist;
        std::vector<double> elev;
        for (int n = 0; n < config.users_per_cell; ++n) {
            const auto u = uniform_in_annulus(rng, uav, 0.0, config.uav_cell_radius_m);
            const double d = distance(uav, u);
            users.push_back(u);
            dist.push_back(d);
            elev.push_back(std::asin(std::min(1.0, uav.z / d)) * 180.0 / std::numbers::pi);
        }
        topo.uav_user_positions.push_back(std::move(users));
        topo.distances.push_back(std::move(dist));
        topo.elevations_deg.push_back(std::move(elev));
    }
    for (int w = 0; w < config.n_macro_users; ++w) {
        topo.macro_user_positions.push_back(uniform_in_annulus(rng, topo.bs_position, 0.0, config.macro_radius_m));
    }
    return topo;
}

} // namespace uavnoma
