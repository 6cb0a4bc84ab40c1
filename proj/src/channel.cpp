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

#include "uavnoma/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace uavnoma {

double elevation_angle(double height_m, double slant_distance_m)
{
    if (!(height_m > 0.0) || height_m > slant_distance_m) {
        throw std::domain_error("elevation_angle requires 0 < height <= distance");
    }
    return 180.0 / std::numbers::pi * std::asin(height_m / slant_distance_m);
}

double los_probability(double phi_deg, double u, double v, double a_deg)
{
    return 1.0 / (1.0 + u * std::exp(-v * (phi_deg - a_deg)));
}

double path_loss(double slant_distance_m, double height_m, double alpha, double eta, double u, double v,
                 double a_deg)
{
    const double phi = elevation_angle(height_m, slant_distance_m);
    const double p_los = los_probability(phi, u, v, a_deg);
    const double decay = std::pow(slant_distance_m, -alpha);
    return p_los * decay + (1.0 - p_los) * eta * decay;
}

FadingSample sample_fading(Rng& rng, double sigma_e2)
{
    FadingSample s;
    s.g_hat = complex_gaussian(rng, 1.0 - sigma_e2);
    s.error = complex_gaussian(rng, sigma_e2);
    s.g_true = s.g_hat + s.error;
    return s;
}

std::vector<std::size_t> order_users(std::span<const double> gains)
{
    std::vector<std::size_t> idx(gains.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return gains[a] < gains[b]; });
    return idx;
}

ChannelSet::ChannelSet(int n_uavs, int users_per_cell, int n_subchannels, int n_macro_users)
    : n_uavs_(n_uavs), n_users_(users_per_cell), n_sc_(n_subchannels), n_macro_(n_macro_users),
      links_(static_cast<std::size_t>(n_uavs) * users_per_cell * n_subchannels),
      cross_bs_(links_.size(), 0.0),
      cross_macro_(static_cast<std::size_t>(n_macro_users) * n_uavs * n_subchannels, 0.0)
{
}

ChannelSet build_channel_set(const Topology& topology, const ScenarioConfig& config, std::uint64_t seed)
{
    const int n_uavs = static_cast<int>(topology.uav_positions.size());
    const int n_users = config.users_per_cell;
    const int n_sc = config.n_subchannels();
    const int n_macro = static_cast<int>(topology.macro_user_positions.size());
    ChannelSet set(n_uavs, n_users, n_sc, n_macro);
    set.noise_power = config.noise_power_w();
    set.p_macro_per_sc = config.macro_power_per_subchannel_w();
    set.subchannel_bandwidth_hz = config.subchannel_bandwidth_hz();

    Rng fading_rng = make_stream(seed, 0x66616465ULL);
    Rng cross_bs_rng = make_stream(seed, 0x62737573ULL);
    Rng cross_macro_rng = make_stream(seed, 0x6d616372ULL);

    const auto macro_gain = [&](double d, Rng& rng) {
        const double clamped = std::max(d, 1.0);
        return std::pow(clamped, -config.macro_pl_exponent) * std::norm(complex_gaussian(rng, 1.0));
    };

    for (int i = 0; i < n_uavs; ++i) {
        const Vec3& uav = topology.uav_positions[static_cast<std::size_t>(i)];
        for (int n = 0; n < n_users; ++n) {
            const Vec3& user = topology.uav_user_positions[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)];
            const double d = std::max(distance(uav, user), 1.0);
            const double height = std::min(uav.z, d);
            const double pl = path_loss(d, height, config.alpha_pl, config.eta_nlos, config.env_u, config.env_v,
                                        config.env_a);
            const double d_bs = distance(topology.bs_position, user);
            for (int k = 0; k < n_sc; ++k) {
                const auto f = sample_fading(fading_rng, config.sigma_e2);
                LinkChannel& link = set.link(i, n, k);
                link.path_loss_gain = pl;
                link.g_hat = f.g_hat;
                link.error = f.error;
                link.g_true = f.g_true;
                link.sigma_e2 = config.sigma_e2;
                link.h_hat_mag2 = pl * pl * std::norm(f.g_hat);
                set.cross_bs_to_uav_user(i, n, k) = macro_gain(d_bs, cross_bs_rng);
            }
        }
    }
    for (int w = 0; w < n_macro; ++w) {
        const Vec3& mu = topology.macro_user_positions[static_cast<std::size_t>(w)];
        for (int i = 0; i < n_uavs; ++i) {
            const double d = distance(topology.uav_positions[static_cast<std::size_t>(i)], mu);
            for (int k = 0; k < n_sc; ++k) {
                set.cross_uav_to_macro(w, i, k) = macro_gain(d, cross_macro_rng);
            }
        }
    }
    return set;
}

void write_channels_csv(std::ostream& out, const ChannelSet& channels)
{
    out.precision(10);
    out << "uav,user,subchannel,path_loss_gain,g_hat_mag2,error_mag2,g_true_mag2,h_hat_mag2,cross_bs_gain\n";
    for (int i = 0; i < channels.n_uavs(); ++i) {
        for (int n = 0; n < channels.users_per_cell(); ++n) {
            for (int k = 0; k < channels.n_subchannels(); ++k) {
                const auto& l = channels.link(i, n, k);
                out << i << ',' << n << ',' << k << ',' << l.path_loss_gain << ',' << std::norm(l.g_hat) << ','
                    << std::norm(l.error) << ',' << std::norm(l.g_true) << ',' << l.h_hat_mag2 << ','
                    << channels.cross_bs_to_uav_user(i, n, k) << '\n';
            }
        }
    }
}

} // namespace uavnoma
