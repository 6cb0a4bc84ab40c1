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

#include "uavnoma/metrics.hpp"

#include "uavnoma/outage.hpp"

#include <cmath>
#include <stdexcept>

namespace uavnoma {

double sic_sinr(std::span<const double> p_ordered, std::span<const double> gains, double cross_interference_w,
                double noise_w, std::size_t n)
{
    if (n >= p_ordered.size() || p_ordered.size() != gains.size()) {
        throw std::invalid_argument("sic_sinr: bad user index or length mismatch");
    }
    double intra = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        intra += p_ordered[j];
    }
    return p_ordered[n] * gains[n] / (cross_interference_w + intra * gains[n] + noise_w);
}

double achievable_rate(double sinr, double b_sc_hz)
{
    return b_sc_hz * std::log2(1.0 + sinr);
}

double user_ee(double rate, double eps_out, double p_m, double p_user)
{
    if (!(p_m + p_user > 0.0)) {
        throw std::domain_error("user_ee: p_m + p_user must be positive");
    }
    return (1.0 - eps_out) * rate / (p_m + p_user);
}

LinkCoefficients link_coefficients(const ChannelSet& channels, const ScenarioConfig& config, int uav, int user,
                                   int sc)
{
    const LinkChannel& link = channels.link(uav, user, sc);
    LinkCoefficients c;
    c.base_noise = channels.noise_power + channels.p_macro_per_sc * channels.cross_bs_to_uav_user(uav, user, sc);
    if (link.sigma_e2 <= 0.0) {
        const double h2 = link.h_true_mag2();
        c.strong_gain = h2;
        c.theta = c.base_noise;
        c.weak_gain = h2;
        c.interference_gain = h2;
        c.success = 1.0;
        return c;
    }
    const auto ctx = make_outage_context(config.eps_out, link.g_hat_mag2(), link.sigma_e2, link.path_loss_gain,
                                         channels.noise_power, c.base_noise - channels.noise_power);
    const double pl2 = link.path_loss_gain * link.path_loss_gain;
    c.strong_gain = ctx.quantile * pl2;
    c.theta = ctx.theta;
    c.weak_gain = config.eps_out * ctx.quantile * pl2;
    c.interference_gain = 2.0 * ctx.psi;
    c.success = 1.0 - config.eps_out;
    return c;
}

LinkTable::LinkTable(const ChannelSet& channels, const ScenarioConfig& config)
    : n_uavs_(channels.n_uavs()), n_users_(channels.users_per_cell()), n_sc_(channels.n_subchannels()),
      perfect_(config.sigma_e2 <= 0.0), b_sc_(channels.subchannel_bandwidth_hz), p_m_(config.p_hover_w),
      success_(perfect_ ? 1.0 : 1.0 - config.eps_out)
{
    links_.reserve(static_cast<std::size_t>(n_uavs_) * n_users_ * n_sc_);
    for (int i = 0; i < n_uavs_; ++i) {
        for (int n = 0; n < n_users_; ++n) {
            for (int k = 0; k < n_sc_; ++k) {
                links_.push_back(link_coefficients(channels, config, i, n, k));
            }
        }
    }
}

SlotRates slot_rates(const LinkCoefficients* strong, const LinkCoefficients* weak, double beta, double p_sc,
                     double b_sc_hz)
{
    SlotRates r;
    if (strong == nullptr) {
        return r;
    }
    if (weak == nullptr) {
        r.strong_sinr = strong->strong_gain * p_sc / strong->base_noise;
        r.strong_rate = achievable_rate(r.strong_sinr, b_sc_hz);
        return r;
    }
    const double p_strong = beta * p_sc;
    const double p_weak = (1.0 - beta) * p_sc;
    r.strong_sinr = strong->strong_gain * p_strong / strong->base_noise;
    r.weak_sinr = weak->weak_gain * p_weak / (weak->theta + weak->interference_gain * p_strong);
    r.strong_rate = achievable_rate(r.strong_sinr, b_sc_hz);
    r.weak_rate = achievable_rate(r.weak_sinr, b_sc_hz);
    return r;
}

double slot_ee(const LinkCoefficients* strong, const LinkCoefficients* weak, double beta, double p_sc,
               double b_sc_hz, double p_m)
{
    if (strong == nullptr) {
        return 0.0;
    }
    const auto r = slot_rates(strong, weak, beta, p_sc, b_sc_hz);
    if (weak == nullptr) {
        return strong->success * r.strong_rate / (p_m + p_sc);
    }
    return strong->success * r.strong_rate / (p_m + beta * p_sc) +
           weak->success * r.weak_rate / (p_m + (1.0 - beta) * p_sc);
}

EEReport total_ee(const Assignment& assignment, const PowerVector& power, const LinkTable& table)
{
    if (assignment.n_uavs() != table.n_uavs() || assignment.n_subchannels() != table.n_subchannels() ||
        power.n_uavs() != table.n_uavs() || power.n_subchannels() != table.n_subchannels()) {
        throw std::invalid_argument("total_ee: assignment, power and channels disagree in shape");
    }
    try {
        assignment.check_invariants(table.users_per_cell());
    } catch (const std::logic_error& e) {
        throw std::invalid_argument(std::string("total_ee: ") + e.what());
    }

    EEReport report;
    report.outage_factor = table.success();
    const double b_sc = table.subchannel_bandwidth_hz();
    const double p_m = table.hover_power_w();
    for (int i = 0; i < assignment.n_uavs(); ++i) {
        for (int k = 0; k < assignment.n_subchannels(); ++k) {
            const auto& s = assignment.slot(i, k);
            if (s.empty()) {
                continue;
            }
            const double p_sc = power(i, k);
            const LinkCoefficients* strong = &table.at(i, s.strong, k);
            const LinkCoefficients* weak = s.weak >= 0 ? &table.at(i, s.weak, k) : nullptr;
            const auto r = slot_rates(strong, weak, s.beta, p_sc, b_sc);
            const double p_strong = weak != nullptr ? s.beta * p_sc : p_sc;
            UserMetrics su{i, s.strong, k, weak != nullptr ? "strong" : "single", p_strong, r.strong_sinr,
                           r.strong_rate, strong->success * r.strong_rate / (p_m + p_strong)};
            report.total_ee += su.ee_bits_per_joule;
            report.users.push_back(su);
            if (weak != nullptr) {
                const double p_weak = (1.0 - s.beta) * p_sc;
                UserMetrics wu{i, s.weak, k, "weak", p_weak, r.weak_sinr, r.weak_rate,
                               weak->success * r.weak_rate / (p_m + p_weak)};
                report.total_ee += wu.ee_bits_per_joule;
                report.users.push_back(wu);
            }
        }
    }
    return report;
}

EEReport total_ee(const Assignment& assignment, const PowerVector& power, const ChannelSet& channels,
                  const ScenarioConfig& config)
{
    return total_ee(assignment, power, LinkTable(channels, config));
}

void write_ee_report_csv(std::ostream& out, const EEReport& report)
{
    out.precision(12);
    out << "uav,user,subchannel,role,power_w,sinr,rate_bps,ee_bits_per_joule\n";
    for (const auto& u : report.users) {
        out << u.uav << ',' << u.user << ',' << u.subchannel << ',' << u.role << ',' << u.power_w << ',' << u.sinr
            << ',' << u.rate_bps << ',' << u.ee_bits_per_joule << '\n';
    }
    out << "total,,,,,,," << report.total_ee << '\n';
}

} // namespace uavnoma
