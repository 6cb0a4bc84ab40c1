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

#include "uavnoma/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace uavnoma {

Assignment::Assignment(int n_uavs, int n_subchannels)
    : unmatched(static_cast<std::size_t>(n_uavs)), n_uavs_(n_uavs), n_sc_(n_subchannels),
      slots_(static_cast<std::size_t>(n_uavs) * n_subchannels)
{
}

void Assignment::place(int uav, int sc, int a, int b, const ChannelSet& channels, double beta)
{
    SubchannelSlot s;
    s.beta = beta;
    if (a < 0) {
        std::swap(a, b);
    }
    if (a >= 0 && b >= 0) {
        const double ga = channels.link(uav, a, sc).h_hat_mag2;
        const double gb = channels.link(uav, b, sc).h_hat_mag2;
        if (gb > ga || (gb == ga && b < a)) {
            std::swap(a, b);
        }
    }
    s.strong = a;
    s.weak = b;
    slot(uav, sc) = s;
}

void Assignment::check_invariants(int users_per_cell) const
{
    for (int i = 0; i < n_uavs_; ++i) {
        std::vector<int> seen(static_cast<std::size_t>(users_per_cell), 0);
        for (int k = 0; k < n_sc_; ++k) {
            const auto& s = slot(i, k);
            if (s.strong < 0 && s.weak >= 0) {
                throw std::logic_error("slot has a weak user without a strong user");
            }
            for (int u : {s.strong, s.weak}) {
                if (u < 0) {
                    continue;
                }
                if (u >= users_per_cell) {
                    throw std::logic_error("assignment references unknown user " + std::to_string(u));
                }
                if (++seen[static_cast<std::size_t>(u)] > 1) {
                    throw std::logic_error("user " + std::to_string(u) + " holds more than one subchannel");
                }
            }
            if (s.paired() && !(s.beta >= 0.0 && s.beta <= 1.0)) {
                throw std::logic_error("beta outside [0, 1]");
            }
        }
    }
}

void write_assignment_csv(std::ostream& out, const Assignment& assignment)
{
    out.precision(12);
    out << "uav,subchannel,strong_user,weak_user,beta\n";
    for (int i = 0; i < assignment.n_uavs(); ++i) {
        for (int k = 0; k < assignment.n_subchannels(); ++k) {
            const auto& s = assignment.slot(i, k);
            out << i << ',' << k << ',';
            if (s.strong >= 0) {
                out << s.strong;
            }
            out << ',';
            if (s.weak >= 0) {
                out << s.weak;
            }
            out << ',';
            if (s.paired()) {
                out << s.beta;
            }
            out << '\n';
        }
    }
}

double PowerVector::uav_total(int uav) const
{
    double total = 0.0;
    for (int k = 0; k < n_sc_; ++k) {
        total += (*this)(uav, k);
    }
    return total;
}

PowerVector equal_power(const ScenarioConfig& config, int n_uavs)
{
    const int k = config.n_subchannels();
    return PowerVector(n_uavs, k, config.p_uav_max_w / k);
}

double macro_interference(const PowerVector& power, const ChannelSet& channels, int macro_user, int sc)
{
    double total = 0.0;
    for (int i = 0; i < power.n_uavs(); ++i) {
        total += power(i, sc) * channels.cross_uav_to_macro(macro_user, i, sc);
    }
    return total;
}

double FeasibilityReport::worst() const
{
    return std::max({negative_power, power_cap_violation, interference_violation});
}

FeasibilityReport check_feasibility(const PowerVector& power, const ChannelSet& channels,
                                    const ScenarioConfig& config)
{
    FeasibilityReport r;
    for (double p : power.values()) {
        r.negative_power = std::max(r.negative_power, -p);
    }
    for (int i = 0; i < power.n_uavs(); ++i) {
        r.power_cap_violation =
            std::max(r.power_cap_violation, (power.uav_total(i) - config.p_uav_max_w) / config.p_uav_max_w);
    }
    const double cap = config.interference_cap_w;
    for (int w = 0; w < channels.n_macro_users(); ++w) {
        for (int k = 0; k < power.n_subchannels(); ++k) {
            const double excess = macro_interference(power, channels, w, k) - cap;
            r.interference_violation = std::max(r.interference_violation, cap > 0.0 ? excess / cap : excess);
        }
    }
    return r;
}

PowerVector scale_to_feasible(PowerVector power, const ChannelSet& channels, const ScenarioConfig& config)
{
    for (double& p : power.values()) {
        p = std::max(p, 0.0);
    }
    const double cap = config.interference_cap_w;
    for (int k = 0; k < power.n_subchannels(); ++k) {
        double scale = 1.0;
        for (int w = 0; w < channels.n_macro_users(); ++w) {
            const double load = macro_interference(power, channels, w, k);
            if (load > cap) {
                scale = std::min(scale, cap > 0.0 ? cap / load : 0.0);
            }
        }
        if (scale < 1.0) {
            for (int i = 0; i < power.n_uavs(); ++i) {
                power(i, k) *= scale;
            }
        }
    }
    for (int i = 0; i < power.n_uavs(); ++i) {
        const double total = power.uav_total(i);
        if (total > config.p_uav_max_w) {
            const double scale = config.p_uav_max_w / total;
            for (int k = 0; k < power.n_subchannels(); ++k) {
                power(i, k) *= scale;
            }
        }
    }
    return power;
}

} // namespace uavnoma
