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
#include <vector>

namespace uavnoma {

/// The power polyhedron {p >= 0, sum_k p[i,k] <= P_UAV, sum_i p[i,k] G[w,i,k] <= I_k},
/// with p[i,k] pinned to 0 on empty slots and wherever a zero interference
/// cap meets a positive cross gain.
class FeasibleSet {
public:
    FeasibleSet(const Assignment& assignment, const ChannelSet& channels, const ScenarioConfig& config);

    [[nodiscard]] bool is_free(int uav, int sc) const { return free_[index(uav, sc)]; }
    /// Euclidean projection (Dykstra over the row caps and the violated
    /// halfspaces), finished by scale_to_feasible so the result satisfies
    /// every constraint up to rounding.
    [[nodiscard]] PowerVector project(const PowerVector& y) const;
    /// Pins non-free entries to 0 and applies scale_to_feasible.
    [[nodiscard]] PowerVector scale_into(PowerVector p) const;
    [[nodiscard]] int n_uavs() const { return n_uavs_; }
    [[nodiscard]] int n_subchannels() const { return n_sc_; }

private:
    struct Halfspace {
        int sc = 0;
        std::vector<double> coef; // per UAV, zero where not free
        double cap = 0.0;
    };

    [[nodiscard]] std::size_t index(int uav, int sc) const { return static_cast<std::size_t>(uav) * n_sc_ + sc; }
    void project_rows(std::vector<double>& x) const;
    [[nodiscard]] double excess(const Halfspace& h, const std::vector<double>& x) const;

    const ChannelSet* channels_ = nullptr;
    ScenarioConfig config_;
    int n_uavs_ = 0;
    int n_sc_ = 0;
    std::vector<bool> free_;
    std::vector<Halfspace> halfspaces_;
};

struct PGOptions {
    int max_iters = 2000;
    /// Stop when the projected step moves no coordinate by more than
    /// step_tol * P_UAV.
    double step_tol = 1e-8;
};

struct PGResult {
    PowerVector x;
    double value = 0.0;
    int iterations = 0;
};

using PowerFunction = std::function<double(const PowerVector&)>;
using PowerGradient = std::function<PowerVector(const PowerVector&)>;

/// Projected gradient with Barzilai-Borwein steps and Armijo backtracking.
/// Never returns a point with a larger value than the projected start.
PGResult projected_gradient_minimize(const PowerVector& start, const FeasibleSet& set, const PowerFunction& f,
                                     const PowerGradient& grad, double power_scale, const PGOptions& options = {});

/// Sum over slots of the success-weighted two-user energy efficiency with the
/// slot betas fixed (maximization form).
double ee_power_objective(const PowerVector& p, const Assignment& assignment, const LinkTable& table);
double ee_power_objective(const PowerVector& p, const Assignment& assignment, const ChannelSet& channels,
                          const ScenarioConfig& config);

/// Minimization surrogate: -objective with each weak user's
/// -log2(Theta + 2 Psi beta p) replaced by its tangent at the anchor. It is an
/// upper bound on -objective that is tight at the anchor.
double sca_surrogate(const PowerVector& p, const PowerVector& anchor, const Assignment& assignment,
                     const LinkTable& table);
PowerVector sca_surrogate_gradient(const PowerVector& p, const PowerVector& anchor, const Assignment& assignment,
                                   const LinkTable& table);

/// Minimizes sca_surrogate over the feasible set, starting from the projected anchor.
PowerVector solve_convex_subproblem(const PowerVector& anchor, const Assignment& assignment, const LinkTable& table,
                                    const FeasibleSet& set, const ScenarioConfig& config);

struct PowerAllocation {
    PowerVector power;
    /// Z(p^t) in bits/J, t = 0 is the projected equal split.
    std::vector<double> objective_trace;
    /// FeasibilityReport::worst() of each iterate.
    std::vector<double> violation_trace;
    int iterations = 0;
    bool converged = false;
};

/// Equal split P_UAV / K over occupied subchannels, scaled down column- and
/// row-wise until feasible.
PowerVector initial_power(const Assignment& assignment, const FeasibleSet& set, const ScenarioConfig& config);

/// Successive convex approximation. Stops when |Z(p^{t+1}) - Z(p^t)| / BW <= tol_power
/// (Z measured in bits/J/Hz) or after max_iters rounds.
PowerAllocation allocate_power(const Assignment& assignment, const ChannelSet& channels, const LinkTable& table,
                               const ScenarioConfig& config);
PowerAllocation allocate_power(const Assignment& assignment, const ChannelSet& channels,
                               const ScenarioConfig& config);

} // namespace uavnoma
