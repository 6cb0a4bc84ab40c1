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
#include "uavnoma/metrics.hpp"
#include "uavnoma/power.hpp"
#include "uavnoma/random.hpp"
#include "uavnoma/scenario.hpp"
#include "uavnoma/scheduling.hpp"

#include <string>
#include <vector>

namespace uavnoma {

struct SchemeResult {
    std::string scheme_name;
    Assignment assignment;
    PowerVector power;
    EEReport report;
    /// Sum of slot EE at the nominal subchannel power P_UAV / K, the quantity
    /// the scheduler maximizes.
    double scheduling_ee = 0.0;
};

/// Strong user's share when each user's power is proportional to
/// |H_hat|^(-2 decay): g_s^-d / (g_s^-d + g_w^-d), with g = |H_hat|^2.
double ftpa_beta(double strong_gain, double weak_gain, double decay);

struct FtpaAllocation {
    /// Input assignment with every pair's beta replaced by the FTPA split.
    Assignment assignment;
    PowerVector power;
};

/// Fractional transmit power allocation: equal power on occupied subchannels
/// (scaled down to feasibility) and the FTPA split inside each pair.
FtpaAllocation ftpa_allocate(const Assignment& assignment, const ChannelSet& channels, const ScenarioConfig& config);

/// One user per subchannel, chosen greedily by largest estimated gain over the
/// remaining (user, subchannel) pairs; equal power, scaled to feasibility.
SchemeResult ofdma_allocate(const ChannelSet& channels, const LinkTable& table, const ScenarioConfig& config);

struct NomaDcResult {
    PowerVector power;
    /// Global EE success * sum R / sum (p_m + p_user) of each iterate, bits/J.
    std::vector<double> objective_trace;
    int iterations = 0;
    bool converged = false;
};

/// success * sum of rates / sum over served users of (p_m + own power).
double global_ee(const PowerVector& p, const Assignment& assignment, const LinkTable& table);

/// DC power allocation for the global EE with the slot betas fixed. Each
/// round fixes lambda = global EE of the current point and maximizes
/// sum R - lambda * sum P, where every weak user's concave -log2(Theta + 2 Psi beta p)
/// part of the rate is replaced by its tangent at the current point.
NomaDcResult noma_dc_power(const Assignment& assignment, const ChannelSet& channels, const LinkTable& table,
                           const ScenarioConfig& config);

/// Best split of one pair on a beta grid (plus tail points), refined by
/// golden section around the best grid point.
struct PairOptimum {
    double beta = 0.5;
    double ee = 0.0;
};
PairOptimum grid_pair_optimum(const ChannelSet& channels, const LinkTable& table, const ScenarioConfig& config,
                              int uav, int sc, int a, int b, double beta_grid_step);

/// Slot EE at nominal subchannel power P_UAV / K for the given assignment.
double scheduling_ee(const Assignment& assignment, const LinkTable& table, const ScenarioConfig& config);

inline constexpr int kExhaustiveMaxUsers = 8;
inline constexpr int kExhaustiveMaxSubchannels = 4;

/// Enumerates every map of users to subchannels holding at most two users
/// each (leaving users out only when N > 2K), with grid-optimal betas, and
/// keeps the one with the largest scheduling EE. Throws std::invalid_argument
/// beyond N = 8 or K = 4. `enumerated` receives the per-UAV candidate count.
SchemeResult exhaustive_schedule(const ChannelSet& channels, const LinkTable& table, const ScenarioConfig& config,
                                 double beta_grid_step = 1e-3, std::size_t* enumerated = nullptr);

/// Uniformly random valid assignment (every user served when N <= 2K) with
/// grid-optimal betas.
SchemeResult random_schedule(const ChannelSet& channels, const LinkTable& table, const ScenarioConfig& config,
                             Rng& rng, double beta_grid_step = 1e-3);

} // namespace uavnoma
