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

#include "uavnoma/random.hpp"
#include "uavnoma/scenario.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

namespace uavnoma {

/// Elevation angle in degrees, (180/pi) asin(h/d). Throws std::domain_error
/// unless 0 < height <= distance.
double elevation_angle(double height_m, double slant_distance_m);

/// 1 / (1 + u exp(-v (phi - A))).
double los_probability(double phi_deg, double u, double v, double a_deg);

/// LOS/NLOS-averaged amplitude gain P_LOS d^-alpha + (1 - P_LOS) eta d^-alpha.
double path_loss(double slant_distance_m, double height_m, double alpha, double eta, double u, double v,
                 double a_deg);

struct FadingSample {
    std::complex<double> g_hat;
    std::complex<double> error;
    std::complex<double> g_true;
};

/// g = g_hat + e with g_hat ~ CN(0, 1 - sigma_e2), e ~ CN(0, sigma_e2).
/// Always consumes the same number of draws so streams stay aligned across
/// different sigma_e2 values.
FadingSample sample_fading(Rng& rng, double sigma_e2);

/// Stable ascending argsort (weakest first).
std::vector<std::size_t> order_users(std::span<const double> gains);

struct LinkChannel {
    double path_loss_gain = 0.0;
    std::complex<double> g_hat;
    std::complex<double> error;
    std::complex<double> g_true;
    double sigma_e2 = 0.0;
    /// |PL g_hat|^2
    double h_hat_mag2 = 0.0;

    [[nodiscard]] double g_hat_mag2() const { return std::norm(g_hat); }
    [[nodiscard]] double h_true_mag2() const { return path_loss_gain * path_loss_gain * std::norm(g_true); }

    friend bool operator==(const LinkChannel&, const LinkChannel&) = default;
};

/// Every link of one network instance. Immutable after build_channel_set.
class ChannelSet {
public:
    ChannelSet() = default;
    ChannelSet(int n_uavs, int users_per_cell, int n_subchannels, int n_macro_users);

    [[nodiscard]] int n_uavs() const { return n_uavs_; }
    [[nodiscard]] int users_per_cell() const { return n_users_; }
    [[nodiscard]] int n_subchannels() const { return n_sc_; }
    [[nodiscard]] int n_macro_users() const { return n_macro_; }

    [[nodiscard]] const LinkChannel& link(int uav, int user, int sc) const { return links_[uav_index(uav, user, sc)]; }
    LinkChannel& link(int uav, int user, int sc) { return links_[uav_index(uav, user, sc)]; }
    /// |H^M_{n,i,k}|^2, macro BS to user n of UAV i on subchannel k.
    [[nodiscard]] double cross_bs_to_uav_user(int uav, int user, int sc) const
    {
        return cross_bs_[uav_index(uav, user, sc)];
    }
    double& cross_bs_to_uav_user(int uav, int user, int sc) { return cross_bs_[uav_index(uav, user, sc)]; }
    /// |H^M_{w,i,k}|^2, UAV i to macro user w on subchannel k.
    [[nodiscard]] double cross_uav_to_macro(int macro_user, int uav, int sc) const
    {
        return cross_macro_[macro_index(macro_user, uav, sc)];
    }
    double& cross_uav_to_macro(int macro_user, int uav, int sc) { return cross_macro_[macro_index(macro_user, uav, sc)]; }

    double noise_power = 0.0;
    double p_macro_per_sc = 0.0;
    double subchannel_bandwidth_hz = 0.0;

    friend bool operator==(const ChannelSet&, const ChannelSet&) = default;

private:
    [[nodiscard]] std::size_t uav_index(int uav, int user, int sc) const
    {
        return (static_cast<std::size_t>(uav) * n_users_ + user) * n_sc_ + sc;
    }
    [[nodiscard]] std::size_t macro_index(int w, int uav, int sc) const
    {
        return (static_cast<std::size_t>(w) * n_uavs_ + uav) * n_sc_ + sc;
    }

    int n_uavs_ = 0;
    int n_users_ = 0;
    int n_sc_ = 0;
    int n_macro_ = 0;
    std::vector<LinkChannel> links_;
    std::vector<double> cross_bs_;
    std::vector<double> cross_macro_;
};

/// Samples all links. Cross-tier links use log-distance path loss with
/// exponent macro_pl_exponent times unit-mean exponential fading, drawn
/// independently per subchannel. Distances below 1 m are clamped to 1 m.
ChannelSet build_channel_set(const Topology& topology, const ScenarioConfig& config, std::uint64_t seed);

/// Debug dump: one row per (uav, user, subchannel) link.
void write_channels_csv(std::ostream& out, const ChannelSet& channels);

} // namespace uavnoma
