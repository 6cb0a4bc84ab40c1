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

#include "uavnoma/allocation.hpp"
#include "uavnoma/channel.hpp"
#include "uavnoma/scenario.hpp"

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace uavnoma {

/// SINR of position n in a decoding list: p_n g_n / (cross + sum_{j<n} p_j g_n + noise).
/// Users earlier in the list are not cancelled by user n, so for the SIC
/// receiver the list runs strongest first (the reverse of order_users):
/// position 0 is interference-free.
double sic_sinr(std::span<const double> p_ordered, std::span<const double> gains, double cross_interference_w,
                double noise_w, std::size_t n);

/// B_sc log2(1 + sinr), bits/s.
double achievable_rate(double sinr, double b_sc_hz);

/// (1 - eps_out) rate / (p_m + p_user), bits/joule. Throws std::domain_error
/// when p_m + p_user <= 0.
double user_ee(double rate, double eps_out, double p_m, double p_user);

/// Constants of one (UAV, user, subchannel) link as they enter the two-user
/// energy-efficiency expression. With imperfect CSI these are the
/// outage-aware quantities (F^-1 PL^2, Theta, 2 Psi, eps F^-1 PL^2); with
/// sigma_e2 == 0 the outage transform is bypassed and every gain is |H|^2.
struct LinkCoefficients {
    /// SINR numerator per watt when nothing interferes (strong or lone user).
    double strong_gain = 0.0;
    /// sigma^2 + p^M |H^M|^2, watts.
    double base_noise = 0.0;
    /// Weak-user noise term: Theta = eps (sigma^2 + p^M|H^M|^2), or base_noise.
    double theta = 0.0;
    /// Weak-user SINR numerator per watt: eps F^-1 PL^2, or |H|^2.
    double weak_gain = 0.0;
    /// Weak-user interference per watt of the strong user's power: 2 Psi, or |H|^2.
    double interference_gain = 0.0;
    /// Pr[C > R | g_hat]: 1 - eps_out, or 1 with perfect CSI.
    double success = 1.0;
};

/// Per-link coefficients for a whole network instance. Building it evaluates
/// one fading quantile per link, so it is computed once and shared.
class LinkTable {
public:
    LinkTable() = default;
    LinkTable(const ChannelSet& channels, const ScenarioConfig& config);

    [[nodiscard]] const LinkCoefficients& at(int uav, int user, int sc) const
    {
        return links_[(static_cast<std::size_t>(uav) * n_users_ + user) * n_sc_ + sc];
    }
    [[nodiscard]] bool perfect_csi() const { return perfect_; }
    [[nodiscard]] double subchannel_bandwidth_hz() const { return b_sc_; }
    [[nodiscard]] double hover_power_w() const { return p_m_; }
    /// Success probability applied to every rate.
    [[nodiscard]] double success() const { return success_; }
    [[nodiscard]] int n_uavs() const { return n_uavs_; }
    [[nodiscard]] int users_per_cell() const { return n_users_; }
    [[nodiscard]] int n_subchannels() const { return n_sc_; }

private:
    int n_uavs_ = 0;
    int n_users_ = 0;
    int n_sc_ = 0;
    bool perfect_ = false;
    double b_sc_ = 0.0;
    double p_m_ = 0.0;
    double success_ = 1.0;
    std::vector<LinkCoefficients> links_;
};

LinkCoefficients link_coefficients(const ChannelSet& channels, const ScenarioConfig& config, int uav, int user,
                                   int sc);

/// Rates (bits/s) of the strong and weak user of a slot at subchannel power
/// p_sc and strong share beta. A lone user gets the whole subchannel.
struct SlotRates {
    double strong_sinr = 0.0;
    double weak_sinr = 0.0;
    double strong_rate = 0.0;
    double weak_rate = 0.0;
};

SlotRates slot_rates(const LinkCoefficients* strong, const LinkCoefficients* weak, double beta, double p_sc,
                     double b_sc_hz);

/// Success-weighted energy efficiency of one slot, summed over its users.
double slot_ee(const LinkCoefficients* strong, const LinkCoefficients* weak, double beta, double p_sc,
               double b_sc_hz, double p_m);

struct UserMetrics {
    int uav = 0;
    int user = 0;
    int subchannel = 0;
    /// "strong", "weak" or "single"
    std::string role;
    double power_w = 0.0;
    double sinr = 0.0;
    double rate_bps = 0.0;
    double ee_bits_per_joule = 0.0;
};

struct EEReport {
    std::vector<UserMetrics> users;
    double total_ee = 0.0;
    /// The success probability applied to every rate (1 - eps_out, or 1).
    double outage_factor = 1.0;
};

/// Evaluates the per-subchannel two-user energy efficiency over all UAVs and
/// subchannels. Throws std::invalid_argument on dimension mismatch or an
/// assignment referencing unknown users.
EEReport total_ee(const Assignment& assignment, const PowerVector& power, const LinkTable& table);
EEReport total_ee(const Assignment& assignment, const PowerVector& power, const ChannelSet& channels,
                  const ScenarioConfig& config);

/// One row per served user plus a totals row.
void write_ee_report_csv(std::ostream& out, const EEReport& report);

} // namespace uavnoma
