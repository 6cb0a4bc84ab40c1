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
#include "uavnoma/scenario.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace uavnoma {

/// One candidate user pair on one subchannel during scheduling. The strong
/// user (index 1) decodes and removes the weak user's signal.
///
/// F(beta) = F1(beta) - F2(beta) is the negated per-subchannel energy
/// efficiency divided by the success probability. Both components contain
/// log2 of a power; `log_offset` adds the same constant L to each of those
/// logarithms, which is the same as measuring the log arguments in a
/// different power unit. It changes F1 and F2 by the same convex term
/// b_sc L / (p_m + (1 - beta) p) and leaves F untouched. L = 0 means watts.
struct DCContext {
    double p_sc = 0.0;
    double p_m = 0.0;
    double b_sc = 0.0;
    double success = 1.0;
    LinkCoefficients strong;
    LinkCoefficients weak;
    double log_offset = 0.0;

    /// Delta_2 = Theta_2 + eps F^-1 PL_2^2 p_sc (weak_gain * p_sc in general).
    [[nodiscard]] double delta() const { return weak.theta + weak.weak_gain * p_sc; }
    /// Slope of the F2 log argument in beta: (2 Psi_2 - eps F^-1 PL_2^2) p_sc.
    [[nodiscard]] double f2_slope() const { return (weak.interference_gain - weak.weak_gain) * p_sc; }
};

DCContext make_dc_context(const LinkCoefficients& strong, const LinkCoefficients& weak, double p_sc, double b_sc,
                          double p_m);

double f1(double beta, const DCContext& ctx);
double f2(double beta, const DCContext& ctx);
double grad_f2(double beta, const DCContext& ctx);
/// F1 - F2, evaluated without the cancelling log terms.
double dc_objective(double beta, const DCContext& ctx);
/// success * -F(beta): the subchannel's energy efficiency at split beta.
double pair_ee(double beta, const DCContext& ctx);

/// Smallest log offset for which the tangent of F2 at `anchor` under-estimates
/// F2 on a 200-point grid of (0, 1) and F2 is locally convex at the anchor.
double majorizing_log_offset(const DCContext& ctx, double anchor);

/// Offset L making both F1 and F2 convex on [lo, hi] (checked on a 400-point
/// grid of second differences, with 10% margin). In watts (L = 0) both are
/// mostly concave because their log arguments are far below 1.
double convexifying_log_offset(DCContext ctx, double lo = 1e-3, double hi = 1.0 - 1e-3);

struct DCResult {
    double beta = 0.5;
    double ee = 0.0;
    int iterations = 0;
    bool converged = false;
    /// F(beta^t), t = 0, 1, ... of the run started at 0.5.
    std::vector<double> objective_trace;
    /// Start of the second run when it was used, else NaN.
    double restart_beta = std::numeric_limits<double>::quiet_NaN();
    int restart_iterations = 0;
};

inline constexpr double kBetaMargin = 1e-6;

/// Linearized DC iteration from `start`: each step minimizes
/// F1(beta) - F2(beta^t) - F2'(beta^t)(beta - beta^t) over
/// [kBetaMargin, 1 - kBetaMargin], re-choosing the log offset at every step so
/// the surrogate majorizes F. Stops when |F(beta^{t+1}) - F(beta^t)| <= tol.
DCResult dc_iterate(DCContext ctx, double start, double tol, int max_iters);

/// dc_iterate from 0.5. F can have a second basin (typically a narrow one at
/// beta -> 0 where the weak user is effectively alone), so when a coarse scan
/// of F finds a point below the fixed point, the iteration is rerun from
/// there and the better result kept.
DCResult dc_optimize_beta(const DCContext& ctx, double tol, int max_iters);

struct ScheduleStats {
    int proposals = 0;
    int dc_runs = 0;
    int rejections = 0;
    int surplus_users = 0;
};

using ScheduleObserver = std::function<void(const Assignment&)>;

/// Two-sided user/subchannel matching with equal subchannel power P_UAV / K.
/// Users (queued FIFO, initially by descending best estimated gain) propose
/// to subchannels in descending estimated-gain order; a subchannel holding
/// fewer than two users accepts, a full one keeps the most energy-efficient
/// of the three possible pairs (incumbent on ties) and returns the other user
/// to the queue. Each user proposes to each subchannel at most once.
/// `observer`, when set, sees the assignment after every proposal.
Assignment schedule_users(const ChannelSet& channels, const LinkTable& table, const ScenarioConfig& config,
                          ScheduleStats* stats = nullptr, const ScheduleObserver& observer = {});
Assignment schedule_users(const ChannelSet& channels, const ScenarioConfig& config);

/// DC context for users a, b on (uav, sc), strong/weak ordered by estimated gain.
DCContext pair_context(const ChannelSet& channels, const LinkTable& table, const ScenarioConfig& config, int uav,
                       int sc, int a, int b);

} // namespace uavnoma
