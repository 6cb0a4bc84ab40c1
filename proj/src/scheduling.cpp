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

#include "uavnoma/scheduling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace uavnoma {
namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr int kOffsetGrid = 200;
constexpr int kScanPoints = 128;
constexpr double kGoldenTol = 1e-8;
constexpr int kDCMaxIters = 200;

double weak_denominator(double beta, const DCContext& ctx) { return ctx.p_m + (1.0 - beta) * ctx.p_sc; }

double strong_term(double beta, const DCContext& ctx)
{
    const double p = beta * ctx.p_sc;
    return ctx.b_sc * std::log2(1.0 + ctx.strong.strong_gain * p / ctx.strong.base_noise) / (ctx.p_m + p);
}

// F2 with L = 0, scaled by ln 2 / b_sc: ln(y) / D.
double f2_nat(double beta, const DCContext& ctx)
{
    return std::log(ctx.f2_slope() * beta + ctx.delta()) / weak_denominator(beta, ctx);
}

double f2_nat_grad(double beta, const DCContext& ctx)
{
    const double a = ctx.f2_slope();
    const double y = a * beta + ctx.delta();
    const double d = weak_denominator(beta, ctx);
    return a / (y * d) + std::log(y) * ctx.p_sc / (d * d);
}

// Lower bound on L making F2 convex at beta: (t^2 - 2t - 2 ln y) / (2 ln 2), t = a D / y.
double local_convexity_offset(double beta, const DCContext& ctx)
{
    const double y = ctx.f2_slope() * beta + ctx.delta();
    const double t = ctx.f2_slope() * weak_denominator(beta, ctx) / y;
    return (t * t - 2.0 * t - 2.0 * std::log(y)) / (2.0 * kLn2);
}

// Surrogate up to a constant: F1(beta) - F2'(anchor) beta.
double surrogate(double beta, const DCContext& ctx, double slope) { return f1(beta, ctx) - slope * beta; }

double argmin_surrogate(const DCContext& ctx, double anchor)
{
    const double slope = grad_f2(anchor, ctx);
    const double lo = kBetaMargin;
    const double hi = 1.0 - kBetaMargin;
    const double step = (hi - lo) / (kScanPoints - 1);
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int j = 0; j < kScanPoints; ++j) {
        const double v = surrogate(lo + j * step, ctx, slope);
        if (v < best_val) {
            best_val = v;
            best = j;
        }
    }
    double a = lo + std::max(best - 1, 0) * step;
    double b = lo + std::min(best + 1, kScanPoints - 1) * step;
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = surrogate(c, ctx, slope);
    double fd = surrogate(d, ctx, slope);
    while (b - a > kGoldenTol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = surrogate(c, ctx, slope);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = surrogate(d, ctx, slope);
        }
    }
    double x = 0.5 * (a + b);
    if (surrogate(x, ctx, slope) > best_val) x = lo + best * step;
    if (surrogate(anchor, ctx, slope) <= surrogate(x, ctx, slope)) x = anchor;
    return x;
}

} // namespace

DCContext make_dc_context(const LinkCoefficients& strong, const LinkCoefficients& weak, double p_sc, double b_sc,
                          double p_m)
{
    if (!(p_sc > 0.0) || !(b_sc > 0.0) || !(p_m >= 0.0)) {
        throw std::invalid_argument("make_dc_context: p_sc and b_sc must be positive and p_m non-negative");
    }
    DCContext ctx;
    ctx.p_sc = p_sc;
    ctx.p_m = p_m;
    ctx.b_sc = b_sc;
    ctx.success = weak.success;
    ctx.strong = strong;
    ctx.weak = weak;
    return ctx;
}

double f1(double beta, const DCContext& ctx)
{
    const double c = ctx.weak.theta + ctx.weak.interference_gain * beta * ctx.p_sc;
    return -strong_term(beta, ctx) + ctx.b_sc * (std::log2(c) + ctx.log_offset) / weak_denominator(beta, ctx);
}

double f2(double beta, const DCContext& ctx)
{
    const double y = ctx.f2_slope() * beta + ctx.delta();
    return ctx.b_sc * (std::log2(y) + ctx.log_offset) / weak_denominator(beta, ctx);
}

double grad_f2(double beta, const DCContext& ctx)
{
    const double a = ctx.f2_slope();
    const double y = a * beta + ctx.delta();
    const double d = weak_denominator(beta, ctx);
    return ctx.b_sc * (a / (y * kLn2 * d) + (std::log2(y) + ctx.log_offset) * ctx.p_sc / (d * d));
}

double dc_objective(double beta, const DCContext& ctx)
{
    const double c = ctx.weak.theta + ctx.weak.interference_gain * beta * ctx.p_sc;
    const double weak = ctx.b_sc * std::log2(1.0 + ctx.weak.weak_gain * (1.0 - beta) * ctx.p_sc / c) /
                        weak_denominator(beta, ctx);
    return -(strong_term(beta, ctx) + weak);
}

double pair_ee(double beta, const DCContext& ctx) { return -ctx.success * dc_objective(beta, ctx); }

double majorizing_log_offset(const DCContext& ctx, double anchor)
{
    // F2_L(beta) - tangent = (b / ln 2) G0(beta) + b L H(beta), where G0 is the
    // tangent gap of ln(y)/D and H >= 0 that of 1/D. The tangent is below F2_L
    // wherever L >= -G0 / (ln 2 H).
    double offset = local_convexity_offset(anchor, ctx);
    const double d_anchor = weak_denominator(anchor, ctx);
    const double g_anchor = f2_nat(anchor, ctx);
    const double s_anchor = f2_nat_grad(anchor, ctx);
    const double lo = kBetaMargin;
    const double step = (1.0 - 2.0 * kBetaMargin) / (kOffsetGrid - 1);
    for (int j = 0; j < kOffsetGrid; ++j) {
        const double beta = lo + j * step;
        const double delta = beta - anchor;
        if (std::abs(delta) < 1e-4) continue;
        const double d = weak_denominator(beta, ctx);
        const double h = ctx.p_sc * ctx.p_sc * delta * delta / (d_anchor * d_anchor * d);
        const double g0 = f2_nat(beta, ctx) - g_anchor - s_anchor * delta;
        offset = std::max(offset, -g0 / (kLn2 * h));
    }
    return offset + 1e-9 * std::abs(offset);
}

double convexifying_log_offset(DCContext ctx, double lo, double hi)
{
    if (!(lo > 0.0) || !(hi < 1.0) || !(lo < hi)) throw std::invalid_argument("convexifying_log_offset: need 0 < lo < hi < 1");
    // F_L'' = F_0'' + 2 b L p^2 / D^3 for both components.
    ctx.log_offset = 0.0;
    constexpr int points = 400;
    const double h = 1e-4 * (hi - lo);
    double offset = 0.0;
    for (int j = 0; j <= points; ++j) {
        const double beta = lo + (hi - lo) * j / points;
        const double d = weak_denominator(beta, ctx);
        const double lift = 2.0 * ctx.b_sc * ctx.p_sc * ctx.p_sc / (d * d * d);
        for (auto* fn : {&f1, &f2}) {
            const double second = ((*fn)(beta + h, ctx) - 2.0 * (*fn)(beta, ctx) + (*fn)(beta - h, ctx)) / (h * h);
            offset = std::max(offset, -second / lift);
        }
    }
    return 1.1 * offset + 1.0;
}

DCResult dc_iterate(DCContext ctx, double start, double tol, int max_iters)
{
    if (!(tol > 0.0) || max_iters < 1) throw std::invalid_argument("dc_iterate: tol > 0 and max_iters >= 1");
    DCResult result;
    double beta = std::clamp(start, kBetaMargin, 1.0 - kBetaMargin);
    double value = dc_objective(beta, ctx);
    result.objective_trace.push_back(value);
    for (int it = 1; it <= max_iters; ++it) {
        ctx.log_offset = majorizing_log_offset(ctx, beta);
        double next = argmin_surrogate(ctx, beta);
        double next_value = dc_objective(next, ctx);
        // The offset grid can miss a sliver where the tangent overshoots; a
        // larger offset only tightens the majorizer.
        for (int retry = 0; next_value > value && retry < 30; ++retry) {
            ctx.log_offset += std::max(1.0, std::abs(ctx.log_offset));
            next = argmin_surrogate(ctx, beta);
            next_value = dc_objective(next, ctx);
        }
        if (next_value > value) {
            next = beta;
            next_value = value;
        }
        result.objective_trace.push_back(next_value);
        result.iterations = it;
        const double change = std::abs(next_value - value);
        beta = next;
        value = next_value;
        if (change <= tol) {
            result.converged = true;
            break;
        }
    }
    result.beta = beta;
    result.ee = -ctx.success * value;
    return result;
}

DCResult dc_optimize_beta(const DCContext& ctx, double tol, int max_iters)
{
    DCResult result = dc_iterate(ctx, 0.5, tol, max_iters);
    const double final_value = result.objective_trace.back();

    // F is not unimodal in beta; seed a second run from the best scan point
    // when it beats the fixed point reached from 0.5.
    std::vector<double> probes;
    for (int j = 0; j < kScanPoints; ++j) probes.push_back(kBetaMargin + j * (1.0 - 2.0 * kBetaMargin) / (kScanPoints - 1));
    for (double e : {1e-5, 1e-4, 1e-3}) {
        probes.push_back(e);
        probes.push_back(1.0 - e);
    }
    double seed = result.beta;
    double seed_value = final_value;
    for (double b : probes) {
        const double v = dc_objective(b, ctx);
        if (v < seed_value) {
            seed_value = v;
            seed = b;
        }
    }
    if (seed != result.beta) {
        const DCResult second = dc_iterate(ctx, seed, tol, max_iters);
        if (second.objective_trace.back() < final_value) {
            result.restart_beta = seed;
            result.beta = second.beta;
            result.ee = second.ee;
            result.converged = result.converged && second.converged;
            result.restart_iterations = second.iterations;
        }
    }
    return result;
}

DCContext pair_context(const ChannelSet& channels, const LinkTable& table, const ScenarioConfig& config, int uav,
                       int sc, int a, int b)
{
    int strong = a;
    int weak = b;
    const double ga = channels.link(uav, a, sc).h_hat_mag2;
    const double gb = channels.link(uav, b, sc).h_hat_mag2;
    if (gb > ga || (gb == ga && b < a)) std::swap(strong, weak);
    const double p_sc = config.p_uav_max_w / config.n_subchannels();
    return make_dc_context(table.at(uav, strong, sc), table.at(uav, weak, sc), p_sc, table.subchannel_bandwidth_hz(),
                           table.hover_power_w());
}

Assignment schedule_users(const ChannelSet& channels, const LinkTable& table, const ScenarioConfig& config,
                          ScheduleStats* stats, const ScheduleObserver& observer)
{
    const int n_uavs = channels.n_uavs();
    const int n_users = channels.users_per_cell();
    const int n_sc = channels.n_subchannels();
    if (table.n_uavs() != n_uavs || table.users_per_cell() != n_users || table.n_subchannels() != n_sc ||
        config.n_subchannels() != n_sc) {
        throw std::invalid_argument("schedule_users: channel set, link table and config disagree on dimensions");
    }
    ScheduleStats local;
    Assignment assignment(n_uavs, n_sc);
    assignment.unmatched.assign(n_uavs, {});

    struct Holding {
        std::vector<int> users;
        double beta = 0.5;
        double ee = 0.0;
    };

    for (int i = 0; i < n_uavs; ++i) {
        std::vector<std::vector<int>> prefs(n_users, std::vector<int>(n_sc));
        std::vector<double> best_gain(n_users, 0.0);
        for (int n = 0; n < n_users; ++n) {
            std::iota(prefs[n].begin(), prefs[n].end(), 0);
            std::stable_sort(prefs[n].begin(), prefs[n].end(), [&](int x, int y) {
                return channels.link(i, n, x).h_hat_mag2 > channels.link(i, n, y).h_hat_mag2;
            });
            best_gain[n] = channels.link(i, n, prefs[n][0]).h_hat_mag2;
        }
        std::vector<int> order(n_users);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return best_gain[x] > best_gain[y]; });
        std::deque<int> pool(order.begin(), order.end());
        std::vector<int> next_choice(n_users, 0);
        std::vector<Holding> held(n_sc);

        auto evaluate = [&](int sc, int a, int b) {
            ++local.dc_runs;
            const auto r = dc_optimize_beta(pair_context(channels, table, config, i, sc, a, b), config.tol_dc, kDCMaxIters);
            return std::pair<double, double>{r.beta, r.ee};
        };

        auto publish = [&]() {
            for (int k = 0; k < n_sc; ++k) {
                const auto& h = held[k];
                const int a = h.users.size() > 0 ? h.users[0] : -1;
                const int b = h.users.size() > 1 ? h.users[1] : -1;
                assignment.place(i, k, a, b, channels, h.beta);
            }
        };

        while (!pool.empty()) {
            const int u = pool.front();
            pool.pop_front();
            if (next_choice[u] >= n_sc) {
                assignment.unmatched[i].push_back(u);
                ++local.surplus_users;
                continue;
            }
            const int k = prefs[u][next_choice[u]++];
            ++local.proposals;
            Holding& h = held[k];
            if (h.users.empty()) {
                h.users = {u};
            } else if (h.users.size() == 1) {
                h.users.push_back(u);
                std::tie(h.beta, h.ee) = evaluate(k, h.users[0], u);
            } else {
                const int x = h.users[0];
                const int y = h.users[1];
                const auto with_x = evaluate(k, u, x);
                const auto with_y = evaluate(k, u, y);
                int loser = u;
                if (with_x.second > h.ee && with_x.second >= with_y.second) {
                    loser = y;
                    h.users = {x, u};
                    std::tie(h.beta, h.ee) = with_x;
                } else if (with_y.second > h.ee) {
                    loser = x;
                    h.users = {y, u};
                    std::tie(h.beta, h.ee) = with_y;
                }
                ++local.rejections;
                pool.push_back(loser);
            }
            if (observer) {
                publish();
                observer(assignment);
            }
        }
        publish();
    }
    if (stats != nullptr) *stats = local;
    return assignment;
}

Assignment schedule_users(const ChannelSet& channels, const ScenarioConfig& config)
{
    const LinkTable table(channels, config);
    return schedule_users(channels, table, config);
}

} // namespace uavnoma
