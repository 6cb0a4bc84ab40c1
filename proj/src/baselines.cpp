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

#include "uavnoma/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace uavnoma {
namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kBetaEdge = 1e-6;

PowerVector equal_occupied_power(const Assignment& assignment, const FeasibleSet& set, const ScenarioConfig& config)
{
    return initial_power(assignment, set, config);
}

SchemeResult finish(std::string name, Assignment assignment, const ChannelSet& channels, const LinkTable& table,
                    const ScenarioConfig& config)
{
    SchemeResult r;
    r.scheme_name = std::move(name);
    const FeasibleSet set(assignment, channels, config);
    r.power = equal_occupied_power(assignment, set, config);
    r.report = total_ee(assignment, r.power, table);
    r.scheduling_ee = scheduling_ee(assignment, table, config);
    r.assignment = std::move(assignment);
    return r;
}

template <class F>
double golden_max(F&& f, double a, double b, double tol, double& arg)
{
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    arg = 0.5 * (a + b);
    return f(arg);
}

std::size_t uniform_index(Rng& rng, std::size_t n)
{
    return std::min(static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)), n - 1);
}

template <class T>
void shuffle(std::vector<T>& v, Rng& rng)
{
    for (std::size_t j = v.size(); j > 1; --j) std::swap(v[j - 1], v[uniform_index(rng, j)]);
}

} // namespace

double ftpa_beta(double strong_gain, double weak_gain, double decay)
{
    if (!(strong_gain > 0.0) || !(weak_gain > 0.0) || !(decay >= 0.0)) {
        throw std::invalid_argument("ftpa_beta: gains must be positive and decay non-negative");
    }
    const double s = std::pow(strong_gain, -decay);
    const double w = std::pow(weak_gain, -decay);
    return s / (s + w);
}

FtpaAllocation ftpa_allocate(const Assignment& assignment, const ChannelSet& channels, const ScenarioConfig& config)
{
    FtpaAllocation out;
    out.assignment = assignment;
    for (int i = 0; i < assignment.n_uavs(); ++i) {
        for (int k = 0; k < assignment.n_subchannels(); ++k) {
            auto& s = out.assignment.slot(i, k);
            if (!s.paired()) continue;
            s.beta = ftpa_beta(channels.link(i, s.strong, k).h_hat_mag2, channels.link(i, s.weak, k).h_hat_mag2,
                               config.ftpa_decay);
        }
    }
    const FeasibleSet set(assignment, channels, config);
    out.power = equal_occupied_power(assignment, set, config);
    return out;
}

SchemeResult ofdma_allocate(const ChannelSet& channels, const LinkTable& table, const ScenarioConfig& config)
{
    const int n_users = channels.users_per_cell();
    const int n_sc = channels.n_subchannels();
    Assignment assignment(channels.n_uavs(), n_sc);
    assignment.unmatched.assign(channels.n_uavs(), {});
    for (int i = 0; i < channels.n_uavs(); ++i) {
        std::vector<std::tuple<double, int, int>> links;
        for (int n = 0; n < n_users; ++n) {
            for (int k = 0; k < n_sc; ++k) links.emplace_back(channels.link(i, n, k).h_hat_mag2, n, k);
        }
        std::stable_sort(links.begin(), links.end(),
                         [](const auto& x, const auto& y) { return std::get<0>(x) > std::get<0>(y); });
        std::vector<bool> user_done(n_users, false);
        std::vector<bool> sc_done(n_sc, false);
        for (const auto& [g, n, k] : links) {
            if (user_done[n] || sc_done[k]) continue;
            user_done[n] = true;
            sc_done[k] = true;
            assignment.place(i, k, n, -1, channels);
        }
        for (int n = 0; n < n_users; ++n) {
            if (!user_done[n]) assignment.unmatched[i].push_back(n);
        }
    }
    return finish("ofdma", std::move(assignment), channels, table, config);
}

double global_ee(const PowerVector& p, const Assignment& assignment, const LinkTable& table)
{
    double rate = 0.0;
    double consumed = 0.0;
    const double b_sc = table.subchannel_bandwidth_hz();
    for (int i = 0; i < assignment.n_uavs(); ++i) {
        for (int k = 0; k < assignment.n_subchannels(); ++k) {
            const auto& s = assignment.slot(i, k);
            if (s.empty()) continue;
            const LinkCoefficients* strong = &table.at(i, s.strong, k);
            const LinkCoefficients* weak = s.weak >= 0 ? &table.at(i, s.weak, k) : nullptr;
            const auto r = slot_rates(strong, weak, s.beta, p(i, k), b_sc);
            rate += r.strong_rate + r.weak_rate;
            consumed += s.size() * table.hover_power_w() + p(i, k);
        }
    }
    return consumed > 0.0 ? table.success() * rate / consumed : 0.0;
}

namespace {

struct DinkelbachTerms {
    double value;
    PowerVector gradient;
};

// -(sum R_lin - lambda sum P) / success, with R_lin the rate after
// linearizing every log2(Theta + 2 Psi beta p) at `anchor`.
DinkelbachTerms dinkelbach_surrogate(const PowerVector& p, const PowerVector& anchor, double lambda,
                                     const Assignment& assignment, const LinkTable& table, bool with_gradient)
{
    DinkelbachTerms out{0.0, PowerVector(p.n_uavs(), p.n_subchannels())};
    const double b = table.subchannel_bandwidth_hz();
    const double success = table.success();
    for (int i = 0; i < assignment.n_uavs(); ++i) {
        for (int k = 0; k < assignment.n_subchannels(); ++k) {
            const auto& s = assignment.slot(i, k);
            if (s.empty()) continue;
            const auto& st = table.at(i, s.strong, k);
            const double x = p(i, k);
            const double share = s.weak >= 0 ? s.beta : 1.0;
            double rate = std::log2(1.0 + st.strong_gain * share * x / st.base_noise);
            double slope = st.strong_gain * share / (kLn2 * (st.base_noise + st.strong_gain * share * x));
            if (s.weak >= 0) {
                const auto& w = table.at(i, s.weak, k);
                const double a_slope = w.interference_gain * s.beta + w.weak_gain * (1.0 - s.beta);
                const double a = w.theta + a_slope * x;
                const double c_anchor = w.theta + w.interference_gain * s.beta * anchor(i, k);
                const double c_slope = w.interference_gain * s.beta / (c_anchor * kLn2);
                rate += std::log2(a) - std::log2(c_anchor) - c_slope * (x - anchor(i, k));
                slope += a_slope / (a * kLn2) - c_slope;
            }
            out.value -= success * b * rate - lambda * (s.size() * table.hover_power_w() + x);
            if (with_gradient) out.gradient(i, k) = -(success * b * slope - lambda);
        }
    }
    return out;
}

} // namespace

NomaDcResult noma_dc_power(const Assignment& assignment, const ChannelSet& channels, const LinkTable& table,
                           const ScenarioConfig& config)
{
    const FeasibleSet set(assignment, channels, config);
    NomaDcResult out;
    out.power = initial_power(assignment, set, config);
    double eta = global_ee(out.power, assignment, table);
    out.objective_trace.push_back(eta);
    for (int t = 1; t <= config.max_iters; ++t) {
        const PowerVector anchor = out.power;
        const double lambda = eta;
        const auto f = [&](const PowerVector& p) {
            return dinkelbach_surrogate(p, anchor, lambda, assignment, table, false).value;
        };
        const auto g = [&](const PowerVector& p) {
            return dinkelbach_surrogate(p, anchor, lambda, assignment, table, true).gradient;
        };
        PowerVector next = projected_gradient_minimize(anchor, set, f, g, config.p_uav_max_w).x;
        double eta_next = global_ee(next, assignment, table);
        if (eta_next < eta) {
            next = out.power;
            eta_next = eta;
        }
        out.iterations = t;
        out.objective_trace.push_back(eta_next);
        const double change = std::abs(eta_next - eta) / config.bandwidth_hz;
        out.power = std::move(next);
        eta = eta_next;
        if (change <= config.tol_power) {
            out.converged = true;
            break;
        }
    }
    return out;
}

PairOptimum grid_pair_optimum(const ChannelSet& channels, const LinkTable& table, const ScenarioConfig& config,
                              int uav, int sc, int a, int b, double beta_grid_step)
{
    if (!(beta_grid_step > 0.0) || beta_grid_step >= 0.5) {
        throw std::invalid_argument("grid_pair_optimum: beta_grid_step must be in (0, 0.5)");
    }
    const DCContext ctx = pair_context(channels, table, config, uav, sc, a, b);
    std::vector<double> grid;
    const int steps = static_cast<int>(std::floor(1.0 / beta_grid_step + 1e-9));
    for (int j = 1; j < steps; ++j) grid.push_back(j * beta_grid_step);
    for (double e : {kBetaEdge, 1e-5, 1e-4}) {
        grid.push_back(e);
        grid.push_back(1.0 - e);
    }
    PairOptimum best{0.5, -std::numeric_limits<double>::infinity()};
    for (double beta : grid) {
        const double v = pair_ee(beta, ctx);
        if (v > best.ee) best = {beta, v};
    }
    double arg = best.beta;
    const double lo = std::max(kBetaEdge, best.beta - beta_grid_step);
    const double hi = std::min(1.0 - kBetaEdge, best.beta + beta_grid_step);
    const double refined = golden_max([&](double x) { return pair_ee(x, ctx); }, lo, hi, 1e-10, arg);
    if (refined > best.ee) best = {arg, refined};
    return best;
}

double scheduling_ee(const Assignment& assignment, const LinkTable& table, const ScenarioConfig& config)
{
    const double p_sc = config.p_uav_max_w / config.n_subchannels();
    double total = 0.0;
    for (int i = 0; i < assignment.n_uavs(); ++i) {
        for (int k = 0; k < assignment.n_subchannels(); ++k) {
            const auto& s = assignment.slot(i, k);
            if (s.empty()) continue;
            const LinkCoefficients* weak = s.weak >= 0 ? &table.at(i, s.weak, k) : nullptr;
            total += slot_ee(&table.at(i, s.strong, k), weak, s.beta, p_sc, table.subchannel_bandwidth_hz(),
                             table.hover_power_w());
        }
    }
    return total;
}

SchemeResult exhaustive_schedule(const ChannelSet& channels, const LinkTable& table, const ScenarioConfig& config,
                                 double beta_grid_step, std::size_t* enumerated)
{
    const int n_users = channels.users_per_cell();
    const int n_sc = channels.n_subchannels();
    if (n_users > kExhaustiveMaxUsers || n_sc > kExhaustiveMaxSubchannels) {
        throw std::invalid_argument("exhaustive_schedule: instance too large (limit N <= 8, K <= 4)");
    }
    const double p_sc = config.p_uav_max_w / n_sc;
    const int may_skip = std::max(0, n_users - 2 * n_sc);
    Assignment best_assignment(channels.n_uavs(), n_sc);
    best_assignment.unmatched.assign(channels.n_uavs(), {});
    std::size_t count_first = 0;

    for (int i = 0; i < channels.n_uavs(); ++i) {
        std::map<std::tuple<int, int, int>, PairOptimum> pair_cache;
        auto pair = [&](int k, int a, int b) -> const PairOptimum& {
            const auto key = std::make_tuple(k, std::min(a, b), std::max(a, b));
            auto it = pair_cache.find(key);
            if (it == pair_cache.end()) {
                it = pair_cache.emplace(key, grid_pair_optimum(channels, table, config, i, k, a, b, beta_grid_step))
                         .first;
            }
            return it->second;
        };
        std::vector<std::vector<int>> members(n_sc);
        std::vector<std::vector<int>> best_members;
        double best_value = -std::numeric_limits<double>::infinity();
        std::size_t count = 0;
        int skipped = 0;

        auto score = [&]() {
            double v = 0.0;
            for (int k = 0; k < n_sc; ++k) {
                if (members[k].size() == 1) {
                    v += slot_ee(&table.at(i, members[k][0], k), nullptr, 1.0, p_sc, table.subchannel_bandwidth_hz(),
                                 table.hover_power_w());
                } else if (members[k].size() == 2) {
                    v += pair(k, members[k][0], members[k][1]).ee;
                }
            }
            return v;
        };

        auto recurse = [&](auto&& self, int n) -> void {
            if (n == n_users) {
                ++count;
                const double v = score();
                if (v > best_value) {
                    best_value = v;
                    best_members = members;
                }
                return;
            }
            for (int k = 0; k < n_sc; ++k) {
                if (members[k].size() >= 2) continue;
                members[k].push_back(n);
                self(self, n + 1);
                members[k].pop_back();
            }
            if (skipped < may_skip) {
                ++skipped;
                self(self, n + 1);
                --skipped;
            }
        };
        recurse(recurse, 0);
        if (i == 0) count_first = count;

        std::vector<bool> served(n_users, false);
        for (int k = 0; k < n_sc; ++k) {
            const auto& m = best_members[k];
            for (int u : m) served[u] = true;
            if (m.size() == 1) best_assignment.place(i, k, m[0], -1, channels);
            if (m.size() == 2) best_assignment.place(i, k, m[0], m[1], channels, pair(k, m[0], m[1]).beta);
        }
        for (int n = 0; n < n_users; ++n) {
            if (!served[n]) best_assignment.unmatched[i].push_back(n);
        }
    }
    if (enumerated != nullptr) *enumerated = count_first;
    return finish("exhaustive", std::move(best_assignment), channels, table, config);
}

SchemeResult random_schedule(const ChannelSet& channels, const LinkTable& table, const ScenarioConfig& config,
                             Rng& rng, double beta_grid_step)
{
    const int n_users = channels.users_per_cell();
    const int n_sc = channels.n_subchannels();
    Assignment assignment(channels.n_uavs(), n_sc);
    assignment.unmatched.assign(channels.n_uavs(), {});
    for (int i = 0; i < channels.n_uavs(); ++i) {
        std::vector<int> places;
        for (int k = 0; k < n_sc; ++k) {
            places.push_back(k);
            places.push_back(k);
        }
        std::vector<int> users(n_users);
        std::iota(users.begin(), users.end(), 0);
        shuffle(places, rng);
        shuffle(users, rng);
        std::vector<std::vector<int>> members(n_sc);
        for (std::size_t j = 0; j < users.size(); ++j) {
            if (j < places.size()) {
                members[places[j]].push_back(users[j]);
            } else {
                assignment.unmatched[i].push_back(users[j]);
            }
        }
        for (int k = 0; k < n_sc; ++k) {
            const auto& m = members[k];
            if (m.size() == 1) assignment.place(i, k, m[0], -1, channels);
            if (m.size() == 2) {
                const double beta = grid_pair_optimum(channels, table, config, i, k, m[0], m[1], beta_grid_step).beta;
                assignment.place(i, k, m[0], m[1], channels, beta);
            }
        }
        std::sort(assignment.unmatched[i].begin(), assignment.unmatched[i].end());
    }
    return finish("random", std::move(assignment), channels, table, config);
}

} // namespace uavnoma
