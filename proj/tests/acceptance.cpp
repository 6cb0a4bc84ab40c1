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

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "uavnoma/baselines.hpp"
#include "uavnoma/harness.hpp"
#include "uavnoma/outage.hpp"
#include "uavnoma/power.hpp"
#include "support.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace uavnoma;

namespace {

int failures = 0;
double worst_violation = 0.0;

void report(int id, const char* name, bool pass, const std::string& detail)
{
    std::printf("%s C%d %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    failures += pass ? 0 : 1;
}

std::string num(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentResult run(ExperimentSpec spec)
{
    spec.trials = 100;
    spec.seed = 1;
    auto r = run_experiment(spec);
    worst_violation = std::max(worst_violation, r.max_violation);
    if (r.failed_trials > 0) {
        for (const auto& f : r.failures) std::printf("  trial failure: %s\n", f.c_str());
        worst_violation = std::max(worst_violation, 1.0);
    }
    return r;
}

double mean_of(const ExperimentResult& r, double sweep, double series, Scheme s)
{
    for (const auto& row : r.rows) {
        if (row.sweep_value == sweep && row.series_value == series && row.scheme == s) return row.mean;
    }
    return std::nan("");
}

void scheme_ordering()
{
    const auto t0 = std::chrono::steady_clock::now();
    auto spec = make_preset(Preset::fig2);
    spec.sweep_values = {30};
    const auto r = run(spec);
    const double p = mean_of(r, 30, 0, Scheme::proposed);
    const double d = mean_of(r, 30, 0, Scheme::noma_dc);
    const double f = mean_of(r, 30, 0, Scheme::ftpa);
    const double o = mean_of(r, 30, 0, Scheme::ofdma);
    const double secs = seconds_since(t0);
    report(1, "scheme ordering at N=30", p > d && d > f && f > o && secs <= 600.0,
           "proposed " + num(p) + " > NOMA-DC " + num(d) + " > FTPA " + num(f) + " > OFDMA " + num(o) +
               " bits/J, " + num(secs) + " s");
}

void sca_convergence()
{
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (int n : {10, 30}) {
        ScenarioConfig c;
        c.users_per_cell = n;
        int fast = 0;
        bool monotone = true;
        for (std::uint64_t t = 0; t < 100; ++t) {
            const auto o = run_trial(c, 1 + t, {Scheme::proposed}, true);
            if (o.failed) {
                monotone = false;
                continue;
            }
            worst_violation = std::max(worst_violation, o.max_violation);
            for (double v : o.trace_violation) worst_violation = std::max(worst_violation, v);
            const auto& z = o.trace;
            for (std::size_t j = 1; j < z.size(); ++j) monotone = monotone && z[j] >= z[j - 1] - 1e-9 * std::abs(z[j - 1]);
            const std::size_t rounds = z.size() - 1;
            const bool settled = rounds >= 1 && std::abs(z[rounds] - z[rounds - 1]) / c.bandwidth_hz <= c.tol_power;
            fast += settled && rounds <= 10 ? 1 : 0;
        }
        ok = ok && fast >= 95 && monotone;
        detail += "N=" + std::to_string(n) + ": " + std::to_string(fast) + "/100 within 10 rounds, " +
                  (monotone ? "monotone" : "NOT monotone") + "; ";
    }
    const double secs = seconds_since(t0);
    report(2, "SCA convergence", ok && secs <= 120.0, detail + num(secs) + " s");
}

void estimation_error()
{
    auto spec = make_preset(Preset::fig4);
    spec.sweep_values = {30};
    const auto r = run(spec);
    const double a = mean_of(r, 30, 0.01, Scheme::proposed);
    const double b = mean_of(r, 30, 0.05, Scheme::proposed);
    const double c = mean_of(r, 30, 0.2, Scheme::proposed);
    report(3, "estimation-error monotonicity", a > b && b > c,
           "sigma_e2 0.01: " + num(a) + ", 0.05: " + num(b) + ", 0.2: " + num(c) + " (gaps " +
               num(100.0 * (a - b) / a) + "%, " + num(100.0 * (a - c) / a) + "%)");
}

void perfect_csi()
{
    auto spec = make_preset(Preset::fig5);
    spec.sweep_values = {40};
    spec.schemes = {Scheme::proposed};
    const auto r = run(spec);
    const double a = mean_of(r, 40, 0.0, Scheme::proposed);
    const double b = mean_of(r, 40, 0.2, Scheme::proposed);
    report(4, "perfect vs imperfect CSI", a > b,
           "sigma_e2 0: " + num(a) + " > 0.2: " + num(b) + " (gap " + num(100.0 * (a - b) / a) + "%)");
}

void hover_power()
{
    bool ok = true;
    std::string detail;
    for (Preset p : {Preset::fig6, Preset::fig7}) {
        auto spec = make_preset(p);
        spec.schemes = {Scheme::proposed};
        const auto r = run(spec);
        bool decreasing = true;
        for (std::size_t j = 1; j < spec.sweep_values.size(); ++j) {
            decreasing = decreasing && mean_of(r, spec.sweep_values[j], 0, Scheme::proposed) <
                                           mean_of(r, spec.sweep_values[j - 1], 0, Scheme::proposed);
        }
        ok = ok && decreasing;
        detail += "P_UAV=" + num(spec.base_config.p_uav_max_w) + " W: " +
                  num(mean_of(r, spec.sweep_values.front(), 0, Scheme::proposed)) + " -> " +
                  num(mean_of(r, spec.sweep_values.back(), 0, Scheme::proposed)) +
                  (decreasing ? " strictly decreasing; " : " NOT strictly decreasing; ");
    }
    report(5, "hover-power monotonicity", ok, detail);
}

void height_unimodal()
{
    auto spec = make_preset(Preset::fig9);
    spec.schemes = {Scheme::proposed};
    const auto r = run(spec);
    std::vector<double> m;
    for (double h : spec.sweep_values) m.push_back(mean_of(r, h, 0, Scheme::proposed));
    int changes = 0;
    bool rises_first = m[1] > m[0];
    for (std::size_t j = 2; j < m.size(); ++j) {
        const bool up_prev = m[j - 1] > m[j - 2];
        const bool up = m[j] > m[j - 1];
        changes += up != up_prev ? 1 : 0;
    }
    const auto peak = std::max_element(m.begin(), m.end()) - m.begin();
    std::string curve;
    for (double x : m) curve += num(x) + " ";
    report(6, "height unimodality", rises_first && changes == 1,
           "peak at " + num(spec.sweep_values[static_cast<std::size_t>(peak)]) + " m, " + std::to_string(changes) +
               " sign change(s); means " + curve);
}

double marcum_quadrature(double a, double b)
{
    const auto f = [a](double x) {
        return x * std::exp(-(x * x + a * a) / 2.0) * boost::math::cyl_bessel_i(0, a * x);
    };
    using boost::math::quadrature::gauss_kronrod;
    if (b <= a) return 1.0 - gauss_kronrod<double, 61>::integrate(f, 0.0, b, 15, 1e-14);
    return gauss_kronrod<double, 61>::integrate(f, b, std::max(a, b) + 40.0, 15, 1e-14);
}

void special_functions()
{
    double marcum = 0.0;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const double a = 0.1 + 1.0 * i;
            const double b = 0.1 + 1.0 * j;
            marcum = std::max(marcum, std::abs(marcum_q1(a, b) - marcum_quadrature(a, b)));
        }
    }
    Rng rng = make_stream(7, 7);
    double sup = 0.0;
    const double g2 = 0.8;
    const double s2 = 0.05;
    std::vector<double> draws(1000000);
    for (auto& x : draws) x = std::norm(std::sqrt(g2) + complex_gaussian(rng, s2));
    std::sort(draws.begin(), draws.end());
    const double n = static_cast<double>(draws.size());
    for (std::size_t j = 0; j < draws.size(); j += 53) {
        const double f = fading_cdf(draws[j], g2, s2);
        sup = std::max({sup, std::abs(f - (j + 1) / n), std::abs(f - j / n)});
    }
    double trip = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const double eps = 1e-4 + 0.99 * uniform01(rng);
        const double g = 5.0 * uniform01(rng);
        const double s = 0.01 + 0.49 * uniform01(rng);
        trip = std::max(trip, std::abs(fading_cdf(fading_quantile(eps, g, s), g, s) - eps));
    }
    report(7, "special-function accuracy", marcum <= 1e-8 && sup <= 5e-3 && trip <= 1e-9,
           "Marcum vs quadrature " + num(marcum) + ", CDF vs 1e6 MC sup " + num(sup) + ", round trip " + num(trip));
}

void outage_conservativeness()
{
    Rng rng = make_stream(8, 8);
    const double sigmas[] = {0.01, 0.05, 0.2, 0.5};
    const int links = 1000;
    const int draws = 100000;
    int violations = 0;
    double worst = 0.0;
    double eps = 0.0;
    for (int l = 0; l < links; ++l) {
        ScenarioConfig c;
        c.users_per_cell = 2;
        c.sigma_e2 = sigmas[l % 4];
        eps = c.eps_out;
        const auto inst = testing::make_instance(c, static_cast<std::uint64_t>(l));
        const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(c.n_uavs));
        const int n = static_cast<int>(rng() % 2);
        const auto& link = inst.channels.link(i, n, 0);
        const auto& ch = inst.channels;
        const double cross = ch.p_macro_per_sc * ch.cross_bs_to_uav_user(i, n, 0);
        const auto ctx = make_outage_context(c.eps_out, link.g_hat_mag2(), link.sigma_e2, link.path_loss_gain,
                                             ch.noise_power, cross);
        const double p = c.p_uav_max_w * uniform01(rng);
        const double beta = uniform01(rng);
        const bool weak = l % 2 == 1;
        const double p_self = weak ? (1.0 - beta) * p : beta * p;
        std::vector<double> inter;
        if (weak) inter.push_back(beta * p);
        const double rate = std::log2(1.0 + outage_sinr(p_self, inter, ctx));
        const double pl2 = link.path_loss_gain * link.path_loss_gain;
        const double sd = std::sqrt(link.sigma_e2);
        int outages = 0;
        std::normal_distribution<double> normal(0.0, sd / std::sqrt(2.0));
        const double g_re = link.g_hat.real();
        const double g_im = link.g_hat.imag();
        for (int d = 0; d < draws; ++d) {
            const double re = g_re + normal(rng);
            const double im = g_im + normal(rng);
            const double h2 = pl2 * (re * re + im * im);
            const double interference = weak ? beta * p * h2 : 0.0;
            outages += std::log2(1.0 + p_self * h2 / (ch.noise_power + cross + interference)) < rate ? 1 : 0;
        }
        const double rate_out = static_cast<double>(outages) / draws;
        worst = std::max(worst, rate_out);
        violations += rate_out > c.eps_out + 3.0 * std::sqrt(c.eps_out * (1.0 - c.eps_out) / draws) ? 1 : 0;
    }
    report(8, "outage conservativeness", violations == 0,
           std::to_string(links) + " links x 1e5 draws, worst empirical outage " + num(worst) + " vs eps_out " +
               num(eps) + " + 3 sd, " + std::to_string(violations) + " above the band");
}

void dc_machinery()
{
    const auto contexts = testing::sample_contexts(1000, 9);
    Rng rng = make_stream(9, 9);
    double grad = 0.0;
    for (int j = 0; j < 100; ++j) {
        const auto& ctx = contexts[static_cast<std::size_t>(j)];
        const double beta = 0.01 + 0.98 * uniform01(rng);
        const auto central = [&](double h) { return (f2(beta + h, ctx) - f2(beta - h, ctx)) / (2.0 * h); };
        const double fd = (4.0 * central(5e-6) - central(1e-5)) / 3.0;
        grad = std::max(grad, std::abs(grad_f2(beta, ctx) - fd) / std::abs(fd));
    }
    int ascents = 0;
    for (const auto& ctx : contexts) {
        const auto r = dc_iterate(ctx, 0.5, 0.01, 200);
        for (std::size_t t = 1; t < r.objective_trace.size(); ++t) {
            ascents += r.objective_trace[t] > r.objective_trace[t - 1] ? 1 : 0;
        }
    }
    double gap = 0.0;
    for (int j = 0; j < 100; ++j) {
        const auto& ctx = contexts[static_cast<std::size_t>(j)];
        double best = 0.0;
        for (int g = 1; g <= 9999; ++g) best = std::max(best, pair_ee(g * 1e-4, ctx));
        const double got = dc_optimize_beta(ctx, 0.01, 200).ee;
        gap = std::max(gap, (best - got) / best);
    }
    report(9, "DC machinery", grad <= 1e-6 && ascents == 0 && gap <= 1e-4,
           "grad rel error " + num(grad) + " (100 contexts), " + std::to_string(ascents) +
               " ascents over 1000 contexts, worst grid shortfall " + num(gap));
}

void dc_identity()
{
    Rng rng = make_stream(10, 10);
    double worst = 0.0;
    for (const auto& ctx : testing::sample_contexts(1000, 10)) {
        const double beta = 1e-4 + (1.0 - 2e-4) * uniform01(rng);
        const double ee = slot_ee(&ctx.strong, &ctx.weak, beta, ctx.p_sc, ctx.b_sc, ctx.p_m);
        // success is 1 - eps_out, or 1 with perfect CSI.
        const double rhs = -ee / ctx.success;
        worst = std::max(worst, std::abs(f1(beta, ctx) - f2(beta, ctx) - rhs) / std::abs(rhs));
    }
    report(10, "F1 - F2 identity", worst <= 1e-9, "max relative error " + num(worst) + " over 1000 contexts");
}

void sca_surrogate_check()
{
    Rng rng = make_stream(11, 11);
    double tight = 0.0;
    double below = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        ScenarioConfig c;
        c.users_per_cell = 10 + 2 * static_cast<int>(seed % 11);
        const auto inst = testing::make_instance(c, seed);
        const auto a = schedule_users(inst.channels, inst.table, c);
        const FeasibleSet set(a, inst.channels, c);
        const auto anchor = allocate_power(a, inst.channels, inst.table, c).power;
        const double z = ee_power_objective(anchor, a, inst.table);
        tight = std::max(tight, std::abs(sca_surrogate(anchor, anchor, a, inst.table) + z) / z);
        for (int t = 0; t < 1000; ++t) {
            PowerVector p(c.n_uavs, c.n_subchannels());
            for (auto& v : p.values()) v = 2.0 * c.p_uav_max_w / c.n_subchannels() * uniform01(rng);
            const double zp = ee_power_objective(p, a, inst.table);
            below = std::max(below, (-zp - sca_surrogate(p, anchor, a, inst.table)) / z);
        }
    }
    report(11, "SCA surrogate", tight <= 1e-9 && below <= 1e-9,
           "anchor gap " + num(tight) + ", worst bound violation " + num(std::max(below, 0.0)) +
               " (20 instances x 1e3 points, relative)");
}

void oracle_gap()
{
    ScenarioConfig c;
    c.users_per_cell = 4;
    const auto s = oracle_compare(c, 100, 1);
    report(12, "oracle gap", s.bounded && s.mean_ratio > s.mean_random_ratio,
           "min ratio " + num(s.min_ratio) + ", mean ratio " + num(s.mean_ratio) + " vs random " +
               num(s.mean_random_ratio) + (s.bounded ? ", never above exhaustive" : ", EXCEEDS exhaustive"));
}

} // namespace

int main()
{
    scheme_ordering();
    sca_convergence();
    estimation_error();
    perfect_csi();
    hover_power();
    height_unimodal();
    special_functions();
    outage_conservativeness();
    dc_machinery();
    dc_identity();
    sca_surrogate_check();
    oracle_gap();
    report(13, "feasibility", worst_violation <= 1e-9, "worst violation over all experiments " + num(worst_violation));
    return failures == 0 ? 0 : 1;
}
