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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavnoma {

/// Raised for unparsable or out-of-range configuration. The message names the key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Physical and algorithmic parameters of one simulated network.
///
/// Environment constants (env_u, env_v, env_a, alpha_pl, eta_nlos) default to
/// a dense-urban preset taken from the air-to-ground literature; they are
/// external defaults, not measured ground truth. `alpha_pl` applies to the
/// amplitude gain PL(d), which enters link power squared, so alpha_pl = 1
/// corresponds to a free-space d^-2 power law.
struct ScenarioConfig {
    double macro_radius_m = 1000.0;
    int n_macro_users = 20;
    int n_uavs = 4;
    double uav_cell_radius_m = 350.0;
    double uav_height_m = 200.0;
    double min_bs_uav_distance_m = 50.0;
    int users_per_cell = 20;
    double carrier_ghz = 2.0;
    double bandwidth_hz = 10e6;
    std::optional<int> n_subchannels_override;
    double noise_psd_dbm_hz = -174.0;
    double p_uav_max_w = 5.0;
    double p_hover_w = 0.5;
    double p_bs_max_w = 20.0;
    double interference_cap_w = 1e-8;
    double eps_out = 0.05;
    double sigma_e2 = 0.05;
    double env_u = 12.08;
    double env_v = 0.11;
    double env_a = 12.08;
    double alpha_pl = 1.0;
    double eta_nlos = 0.1;
    double macro_pl_exponent = 3.5;
    double ftpa_decay = 0.4;
    double tol_dc = 0.01;
    double tol_power = 0.01;
    int max_iters = 50;
    std::uint64_t seed = 1;

    /// K: explicit override, else ceil(users_per_cell / 2).
    [[nodiscard]] int n_subchannels() const;
    /// Subchannel bandwidth BW / K in Hz.
    [[nodiscard]] double subchannel_bandwidth_hz() const;
    /// Per-subchannel noise power (BW / K) * N0 in watts.
    [[nodiscard]] double noise_power_w() const;
    /// Macro BS power per subchannel, equal split of P_BS.
    [[nodiscard]] double macro_power_per_subchannel_w() const;

    /// Throws ConfigError naming the first key that violates its bound.
    void validate() const;
};

/// Parses the flat `key = value` format. Lines starting with `#` and blank
/// lines are ignored; unknown keys are errors. Values override `base`.
ScenarioConfig parse_config(const std::string& text, ScenarioConfig base = {});
ScenarioConfig load_config(const std::filesystem::path& path);

/// Applies a single `key=value` assignment; used by the CLI and sweeps.
void set_config_value(ScenarioConfig& config, const std::string& key, const std::string& value);
/// Canonical `key=value` lines for every parameter, in a fixed order.
std::vector<std::string> describe_config(const ScenarioConfig& config);

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

[[nodiscard]] double horizontal_distance(const Vec3& a, const Vec3& b);
[[nodiscard]] double distance(const Vec3& a, const Vec3& b);

struct Topology {
    Vec3 bs_position;
    std::vector<Vec3> uav_positions;
    /// uav_user_positions[i][n]: ground position of user n of UAV i.
    std::vector<std::vector<Vec3>> uav_user_positions;
    std::vector<Vec3> macro_user_positions;
    /// distances[i][n], elevations_deg[i][n]: serving-UAV slant link geometry.
    std::vector<std::vector<double>> distances;
    std::vector<std::vector<double>> elevations_deg;
};

/// Deterministic in (config, seed). Macro users uniform in the macro disk,
/// UAVs uniform in the annulus [min_bs_uav_distance_m, macro_radius_m] at the
/// configured height, UAV users uniform in each UAV's ground disk.
Topology generate_topology(const ScenarioConfig& config, std::uint64_t seed);

} // namespace uavnoma
