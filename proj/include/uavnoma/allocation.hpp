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

#include "uavnoma/channel.hpp"
#include "uavnoma/scenario.hpp"

#include <ostream>
#include <vector>

namespace uavnoma {

/// Users sharing one subchannel of one UAV. `strong` has the larger estimated
/// gain |H_hat|^2 on this subchannel and decodes (and removes) the weak
/// user's signal. `beta` is the strong user's share of the subchannel power
/// and is meaningful only when both users are present.
struct SubchannelSlot {
    int strong = -1;
    int weak = -1;
    double beta = 0.5;

    [[nodiscard]] int size() const { return (strong >= 0 ? 1 : 0) + (weak >= 0 ? 1 : 0); }
    [[nodiscard]] bool paired() const { return strong >= 0 && weak >= 0; }
    [[nodiscard]] bool empty() const { return strong < 0 && weak < 0; }
};

/// Subchannel-to-user matching for every UAV cell.
class Assignment {
public:
    Assignment() = default;
    Assignment(int n_uavs, int n_subchannels);

    [[nodiscard]] int n_uavs() const { return n_uavs_; }
    [[nodiscard]] int n_subchannels() const { return n_sc_; }
    [[nodiscard]] const SubchannelSlot& slot(int uav, int sc) const { return slots_[index(uav, sc)]; }
    SubchannelSlot& slot(int uav, int sc) { return slots_[index(uav, sc)]; }

    /// Places `a` and `b` (either may be -1) on the slot, ordering them by
    /// estimated gain on that subchannel (ties: lower index is strong).
    void place(int uav, int sc, int a, int b, const ChannelSet& channels, double beta = 0.5);

    /// Users of each UAV left without a subchannel (only when N > 2K).
    std::vector<std::vector<int>> unmatched;

    /// Throws std::logic_error when a user index is out of range, a user holds
    /// more than one subchannel, or a slot is malformed.
    void check_invariants(int users_per_cell) const;

    friend bool operator==(const Assignment&, const Assignment&) = default;

private:
    [[nodiscard]] std::size_t index(int uav, int sc) const { return static_cast<std::size_t>(uav) * n_sc_ + sc; }

    int n_uavs_ = 0;
    int n_sc_ = 0;
    std::vector<SubchannelSlot> slots_;
};

/// CSV: uav, subchannel, strong_user, weak_user, beta (empty fields for
/// missing users; beta only for pairs).
void write_assignment_csv(std::ostream& out, const Assignment& assignment);

/// Transmit power p_{i,k} of UAV i on subchannel k, watts.
class PowerVector {
public:
    PowerVector() = default;
    PowerVector(int n_uavs, int n_subchannels, double value = 0.0)
        : n_uavs_(n_uavs), n_sc_(n_subchannels), p_(static_cast<std::size_t>(n_uavs) * n_subchannels, value)
    {
    }

    [[nodiscard]] int n_uavs() const { return n_uavs_; }
    [[nodiscard]] int n_subchannels() const { return n_sc_; }
    [[nodiscard]] double operator()(int uav, int sc) const { return p_[static_cast<std::size_t>(uav) * n_sc_ + sc]; }
    double& operator()(int uav, int sc) { return p_[static_cast<std::size_t>(uav) * n_sc_ + sc]; }
    [[nodiscard]] std::vector<double>& values() { return p_; }
    [[nodiscard]] const std::vector<double>& values() const { return p_; }
    [[nodiscard]] double uav_total(int uav) const;

    friend bool operator==(const PowerVector&, const PowerVector&) = default;

private:
    int n_uavs_ = 0;
    int n_sc_ = 0;
    std::vector<double> p_;
};

/// Equal split P_UAV / K on every subchannel (including empty ones).
PowerVector equal_power(const ScenarioConfig& config, int n_uavs);

/// Sum over UAVs of p_{i,k} |H^M_{w,i,k}|^2 at macro user w on subchannel k.
double macro_interference(const PowerVector& power, const ChannelSet& channels, int macro_user, int sc);

struct FeasibilityReport {
    /// max(0, -min p)
    double negative_power = 0.0;
    /// max_i (sum_k p_{i,k} - P_UAV) / P_UAV, clipped at 0
    double power_cap_violation = 0.0;
    /// max_{w,k} (interference - I_k) / I_k, clipped at 0 (absolute when I_k == 0)
    double interference_violation = 0.0;

    [[nodiscard]] double worst() const;
    [[nodiscard]] bool feasible(double tol) const { return worst() <= tol; }
};

/// Constraints C1 (UAV power cap), C2 (non-negativity), C3 (macro interference).
FeasibilityReport check_feasibility(const PowerVector& power, const ChannelSet& channels,
                                    const ScenarioConfig& config);

/// Clips negatives, then scales each subchannel column down to meet every
/// interference cap, then each UAV row down to meet its power cap. Scaling
/// by factors <= 1 cannot break a constraint already met, so the result is
/// feasible.
PowerVector scale_to_feasible(PowerVector power, const ChannelSet& channels, const ScenarioConfig& config);

} // namespace uavnoma
