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

#include "uavnoma/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace uavnoma {
namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr int kDykstraSweeps = 20000;

// Projection of the free entries of one row onto {x >= 0, sum x <= cap}.
void project_capped_simplex(std::vector<double>& v, double cap)
{
    double sum = 0.0;
    for (double& x : v) {
        x = std::max(x, 0.0);
        sum += x;
    }
    if (sum <= cap) return;
    std::vector<double> sorted(v);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double tau = 0.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        cumulative += sorted[j];
        const double t = (cumulative - cap) / static_cast<double>(j + 1);
        if (j + 1 == sorted.size() || sorted[j + 1] <= t) {
            tau = t;
            break;
        }
    }
    for (double& x : v) x = std::max(x - tau, 0.0);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double d = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
    return d;
}

double dot(const PowerVector& a, const PowerVector& b)
{
    return std::inner_product(a.values().begin(), a.values().end(), b.values().begin(), 0.0);
}

struct SlotLinks {
    const LinkCoefficients* strong = nullptr;
    const LinkCoefficients* weak = nullptr;
    double beta = 1.0;
};

SlotLinks slot_links(const Assignment& assignment, const LinkTable& table, int i, int k)
{
    const auto& s = assignment.slot(i, k);
    SlotLinks l;
    if (s.strong >= 0) l.strong = &table.at(i, s.strong, k);
    if (s.weak >= 0) {
        l.weak = &table.at(i, s.weak, k);
        l.beta = s.beta;
    }
    return l;
}

void check_shapes(const PowerVector& p, const Assignment& assignment, const LinkTable& table)
{
    if (p.n_uavs() != table.n_uavs() || p.n_subchannels() != table.n_subchannels() ||
        assignment.n_uavs() != table.n_uavs() || assignment.n_subchannels() != table.n_subchannels()) {
        throw std::invalid_argument("power: shapes of power vector, assignment and channels disagree");
    }
}

// log2(1 + g x / n) / (p_m + x) and its derivative in x, for x = share * p.
struct EETerm {
    double value;
    double slope;
};

EETerm interference_free_term(double gain, double noise, double share, double p, double p_m)
{
    const double x = share * p;
    const double denom = p_m + x;
    const double rate = std::log2(1.0 + gain * x / noise);
    const double rate_slope = gain * share / (kLn2 * (noise + gain * x));
    return {rate / denom, (rate_slope * denom - rate * share) / (denom * denom)};
}

} // namespace

FeasibleSet::FeasibleSet(const Assignment& assignment, const ChannelSet& channels, const ScenarioConfig& config)
    : channels_(&channels), config_(config), n_uavs_(assignment.n_uavs()), n_sc_(assignment.n_subchannels())
{
    if (channels.n_uavs() != n_uavs_ || channels.n_subchannels() != n_sc_) {
        throw std::invalid_argument("FeasibleSet: assignment and channel set disagree in shape");
    }
    free_.assign(static_cast<std::size_t>(n_uavs_) * n_sc_, false);
    for (int i = 0; i < n_uavs_; ++i) {
        for (int k = 0; k < n_sc_; ++k) free_[index(i, k)] = !assignment.slot(i, k).empty();
    }
    const double cap = config.interference_cap_w;
    for (int w = 0; w < channels.n_macro_users(); ++w) {
        for (int k = 0; k < n_sc_; ++k) {
            Halfspace h;
            h.sc = k;
            h.cap = cap;
            h.coef.assign(n_uavs_, 0.0);
            for (int i = 0; i < n_uavs_; ++i) {
                const double g = channels.cross_uav_to_macro(w, i, k);
                if (cap <= 0.0 && g > 0.0) free_[index(i, k)] = false;
                h.coef[i] = g;
            }
            halfspaces_.push_back(std::move(h));
        }
    }
    for (auto& h : halfspaces_) {
        for (int i = 0; i < n_uavs_; ++i) {
            if (!free_[index(i, h.sc)]) h.coef[i] = 0.0;
        }
    }
    std::erase_if(halfspaces_, [](const Halfspace& h) {
        return std::all_of(h.coef.begin(), h.coef.end(), [](double c) { return c == 0.0; });
    });
}

void FeasibleSet::project_rows(std::vector<double>& x) const
{
    std::vector<double> row;
    for (int i = 0; i < n_uavs_; ++i) {
        row.clear();
        for (int k = 0; k < n_sc_; ++k) {
            if (free_[index(i, k)]) row.push_back(x[index(i, k)]);
        }
        project_capped_simplex(row, config_.p_uav_max_w);
        std::size_t j = 0;
        for (int k = 0; k < n_sc_; ++k) x[index(i, k)] = free_[index(i, k)] ? row[j++] : 0.0;
    }
}

double FeasibleSet::excess(const Halfspace& h, const std::vector<double>& x) const
{
    double load = 0.0;
    for (int i = 0; i < n_uavs_; ++i) load += h.coef[i] * x[index(i, h.sc)];
    return load - h.cap;
}

PowerVector FeasibleSet::project(const PowerVector& y) const
{
    if (y.n_uavs() != n_uavs_ || y.n_subchannels() != n_sc_) {
        throw std::invalid_argument("FeasibleSet::project: shape mismatch");
    }
    const std::vector<double>& target = y.values();
    std::vector<double> x = target;
    project_rows(x);
    const double tol = 1e-13 * std::max(config_.interference_cap_w, 1e-300);

    std::vector<const Halfspace*> working;
    for (int round = 0; round <= static_cast<int>(halfspaces_.size()); ++round) {
        bool added = false;
        for (const auto& h : halfspaces_) {
            if (excess(h, x) > tol && std::find(working.begin(), working.end(), &h) == working.end()) {
                working.push_back(&h);
                added = true;
            }
        }
        if (!added) break;
        // Dykstra from the original point over the rows and the working set.
        x = target;
        std::vector<double> q_rows(x.size(), 0.0);
        std::vector<std::vector<double>> q_half(working.size(), std::vector<double>(x.size(), 0.0));
        std::vector<double> previous;
        for (int sweep = 0; sweep < kDykstraSweeps; ++sweep) {
            previous = x;
            std::vector<double> z(x.size());
            for (std::size_t j = 0; j < x.size(); ++j) z[j] = x[j] + q_rows[j];
            x = z;
            project_rows(x);
            for (std::size_t j = 0; j < x.size(); ++j) q_rows[j] = z[j] - x[j];
            for (std::size_t h = 0; h < working.size(); ++h) {
                const Halfspace& hs = *working[h];
                auto& q = q_half[h];
                double load = -hs.cap;
                double norm2 = 0.0;
                for (int i = 0; i < n_uavs_; ++i) {
                    const std::size_t j = index(i, hs.sc);
                    load += hs.coef[i] * (x[j] + q[j]);
                    norm2 += hs.coef[i] * hs.coef[i];
                }
                const double shift = load > 0.0 ? load / norm2 : 0.0;
                for (int i = 0; i < n_uavs_; ++i) {
                    const std::size_t j = index(i, hs.sc);
                    const double zj = x[j] + q[j];
                    const double xj = zj - shift * hs.coef[i];
                    q[j] = zj - xj;
                    x[j] = xj;
                }
            }
            if (max_abs_diff(x, previous) <= 1e-15 * config_.p_uav_max_w) break;
        }
    }
    PowerVector result(n_uavs_, n_sc_);
    result.values() = x;
    for (int i = 0; i < n_uavs_; ++i) {
        for (int k = 0; k < n_sc_; ++k) {
            if (!free_[index(i, k)]) result(i, k) = 0.0;
        }
    }
    return scale_to_feasible(std::move(result), *channels_, config_);
}

PowerVector FeasibleSet::scale_into(PowerVector p) const
{
    for (int i = 0; i < n_uavs_; ++i) {
        for (int k = 0; k < n_sc_; ++k) {
            if (!free_[index(i, k)]) p(i, k) = 0.0;
        }
    }
    return scale_to_feasible(std::move(p), *channels_, config_);
}

PGResult projected_gradient_minimize(const PowerVector& start, const FeasibleSet& set, const PowerFunction& f,
                                     const PowerGradient& grad, double power_scale, const PGOptions& options)
{
    PGResult r;
    r.x = set.project(start);
    r.value = f(r.x);
    PowerVector g = grad(r.x);
    double g_norm = 0.0;
    for (double v : g.values()) g_norm = std::max(g_norm, std::abs(v));
    if (g_norm == 0.0) return r;
    double step = 0.1 * power_scale / g_norm;
    for (int it = 0; it < options.max_iters; ++it) {
        PowerVector trial;
        double trial_value = 0.0;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            PowerVector y = r.x;
            for (std::size_t j = 0; j < y.values().size(); ++j) y.values()[j] -= step * g.values()[j];
            trial = set.project(y);
            PowerVector d = trial;
            for (std::size_t j = 0; j < d.values().size(); ++j) d.values()[j] -= r.x.values()[j];
            trial_value = f(trial);
            const double predicted = dot(g, d) + dot(d, d) / (2.0 * step);
            if (trial_value <= r.value + 1e-4 * std::min(predicted, 0.0) && trial_value <= r.value) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        r.iterations = it + 1;
        if (!accepted) break;
        double move = 0.0;
        PowerVector s = trial;
        for (std::size_t j = 0; j < s.values().size(); ++j) {
            s.values()[j] -= r.x.values()[j];
            move = std::max(move, std::abs(s.values()[j]));
        }
        const PowerVector g_new = grad(trial);
        PowerVector yk = g_new;
        for (std::size_t j = 0; j < yk.values().size(); ++j) yk.values()[j] -= g.values()[j];
        r.x = std::move(trial);
        r.value = trial_value;
        g = g_new;
        if (move <= options.step_tol * power_scale) break;
        const double sy = dot(s, yk);
        const double ss = dot(s, s);
        step = sy > 0.0 ? ss / sy : 2.0 * step;
    }
    return r;
}

double ee_power_objective(const PowerVector& p, const Assignment& assignment, const LinkTable& table)
{
    check_shapes(p, assignment, table);
    double total = 0.0;
    for (int i = 0; i < assignment.n_uavs(); ++i) {
        for (int k = 0; k < assignment.n_subchannels(); ++k) {
            const auto l = slot_links(assignment, table, i, k);
            total += slot_ee(l.strong, l.weak, l.beta, p(i, k), table.subchannel_bandwidth_hz(), table.hover_power_w());
        }
    }
    return total;
}

double ee_power_objective(const PowerVector& p, const Assignment& assignment, const ChannelSet& channels,
                          const ScenarioConfig& config)
{
    return ee_power_objective(p, assignment, LinkTable(channels, config));
}

namespace {

// Surrogate of one slot and its derivative in p.
EETerm slot_surrogate(const SlotLinks& l, double p, double anchor, double b_sc, double p_m)
{
    if (l.strong == nullptr) return {0.0, 0.0};
    const double scale = l.strong->success * b_sc;
    if (l.weak == nullptr) {
        const auto t = interference_free_term(l.strong->strong_gain, l.strong->base_noise, 1.0, p, p_m);
        return {-scale * t.value, -scale * t.slope};
    }
    const double beta = l.beta;
    const auto& w = *l.weak;
    const auto s = interference_free_term(l.strong->strong_gain, l.strong->base_noise, beta, p, p_m);
    const double d = p_m + (1.0 - beta) * p;
    const double a_slope = w.interference_gain * beta + w.weak_gain * (1.0 - beta);
    const double a = w.theta + a_slope * p;
    const double c_anchor = w.theta + w.interference_gain * beta * anchor;
    const double c_slope = w.interference_gain * beta / (c_anchor * kLn2);
    const double lin = std::log2(c_anchor) + c_slope * (p - anchor);
    const double value = -s.value + (lin - std::log2(a)) / d;
    const double slope = -s.slope + (c_slope - a_slope / (a * kLn2)) / d - (lin - std::log2(a)) * (1.0 - beta) / (d * d);
    return {l.weak->success * b_sc * value, l.weak->success * b_sc * slope};
}

} // namespace

double sca_surrogate(const PowerVector& p, const PowerVector& anchor, const Assignment& assignment,
                     const LinkTable& table)
{
    check_shapes(p, assignment, table);
    check_shapes(anchor, assignment, table);
    double total = 0.0;
    for (int i = 0; i < assignment.n_uavs(); ++i) {
        for (int k = 0; k < assignment.n_subchannels(); ++k) {
            total += slot_surrogate(slot_links(assignment, table, i, k), p(i, k), anchor(i, k),
                                    table.subchannel_bandwidth_hz(), table.hover_power_w())
                         .value;
        }
    }
    return total;
}

PowerVector sca_surrogate_gradient(const PowerVector& p, const PowerVector& anchor, const Assignment& assignment,
                                   const LinkTable& table)
{
    check_shapes(p, assignment, table);
    PowerVector g(p.n_uavs(), p.n_subchannels());
    for (int i = 0; i < assignment.n_uavs(); ++i) {
        for (int k = 0; k < assignment.n_subchannels(); ++k) {
            g(i, k) = slot_surrogate(slot_links(assignment, table, i, k), p(i, k), anchor(i, k),
                                     table.subchannel_bandwidth_hz(), table.hover_power_w())
                          .slope;
        }
    }
    return g;
}

PowerVector solve_convex_subproblem(const PowerVector& anchor, const Assignment& assignment, const LinkTable& table,
                                    const FeasibleSet& set, const ScenarioConfig& config)
{
    const auto f = [&](const PowerVector& p) { return sca_surrogate(p, anchor, assignment, table); };
    const auto g = [&](const PowerVector& p) { return sca_surrogate_gradient(p, anchor, assignment, table); };
    return projected_gradient_minimize(anchor, set, f, g, config.p_uav_max_w).x;
}

PowerVector initial_power(const Assignment& assignment, const FeasibleSet& set, const ScenarioConfig& config)
{
    PowerVector p(assignment.n_uavs(), assignment.n_subchannels());
    const double share = config.p_uav_max_w / assignment.n_subchannels();
    for (int i = 0; i < assignment.n_uavs(); ++i) {
        for (int k = 0; k < assignment.n_subchannels(); ++k) {
            if (set.is_free(i, k)) p(i, k) = share;
        }
    }
    return set.scale_into(std::move(p));
}

PowerAllocation allocate_power(const Assignment& assignment, const ChannelSet& channels, const LinkTable& table,
                               const ScenarioConfig& config)
{
    const FeasibleSet set(assignment, channels, config);
    PowerAllocation out;
    out.power = initial_power(assignment, set, config);
    double z = ee_power_objective(out.power, assignment, table);
    out.objective_trace.push_back(z);
    out.violation_trace.push_back(check_feasibility(out.power, channels, config).worst());
    for (int t = 1; t <= config.max_iters; ++t) {
        PowerVector next = solve_convex_subproblem(out.power, assignment, table, set, config);
        double z_next = ee_power_objective(next, assignment, table);
        if (z_next < z) {
            next = out.power;
            z_next = z;
        }
        out.iterations = t;
        out.objective_trace.push_back(z_next);
        out.violation_trace.push_back(check_feasibility(next, channels, config).worst());
        const double change = std::abs(z_next - z) / config.bandwidth_hz;
        out.power = std::move(next);
        z = z_next;
        if (change <= config.tol_power) {
            out.converged = true;
            break;
        }
    }
    return out;
}

PowerAllocation allocate_power(const Assignment& assignment, const ChannelSet& channels,
                               const ScenarioConfig& config)
{
    return allocate_power(assignment, channels, LinkTable(channels, config), config);
}

} // namespace uavnoma
