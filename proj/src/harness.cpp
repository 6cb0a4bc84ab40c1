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

#include "uavnoma/harness.hpp"

#include "uavnoma/baselines.hpp"
#include "uavnoma/channel.hpp"
#include "uavnoma/metrics.hpp"
#include "uavnoma/outage.hpp"
#include "uavnoma/power.hpp"
#include "uavnoma/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace uavnoma {
namespace {

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string join(const std::vector<double>& values)
{
    std::string s;
    for (std::size_t j = 0; j < values.size(); ++j) s += (j ? "," : "") + fmt(values[j]);
    return s;
}

std::vector<double> range(double from, double to, double step)
{
    std::vector<double> v;
    const int n = static_cast<int>(std::floor((to - from) / step + 1e-9));
    for (int j = 0; j <= n; ++j) v.push_back(std::round((from + j * step) * 1e9) / 1e9);
    return v;
}

void apply(ScenarioConfig& config, const std::string& key, double value)
{
    if (!key.empty()) set_config_value(config, key, fmt(value));
}

std::pair<double, double> mean_stderr(const std::vector<double>& v)
{
    if (v.empty()) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()))};
}

const std::vector<std::pair<Scheme, std::string>>& scheme_names()
{
    static const std::vector<std::pair<Scheme, std::string>> names = {
        {Scheme::proposed, "proposed"}, {Scheme::noma_dc, "noma_dc"}, {Scheme::ftpa, "ftpa"}, {Scheme::ofdma, "ofdma"}};
    return names;
}

const std::vector<std::pair<Preset, std::string>>& preset_names()
{
    static const std::vector<std::pair<Preset, std::string>> names = {
        {Preset::fig2, "fig2"}, {Preset::fig3, "fig3"}, {Preset::fig4, "fig4"}, {Preset::fig5, "fig5"},
        {Preset::fig6, "fig6"}, {Preset::fig7, "fig7"}, {Preset::fig8, "fig8"}, {Preset::fig9, "fig9"},
        {Preset::custom, "custom"}};
    return names;
}

} // namespace

std::string scheme_name(Scheme s)
{
    for (const auto& [k, v] : scheme_names()) {
        if (k == s) return v;
    }
    return "unknown";
}

Scheme parse_scheme(const std::string& name)
{
    for (const auto& [k, v] : scheme_names()) {
        if (v == name) return k;
    }
    throw ConfigError("unknown scheme '" + name + "'");
}

std::string preset_name(Preset p)
{
    for (const auto& [k, v] : preset_names()) {
        if (k == p) return v;
    }
    return "unknown";
}

Preset parse_preset(const std::string& name)
{
    for (const auto& [k, v] : preset_names()) {
        if (v == name) return k;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

void ExperimentSpec::validate() const
{
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (sweep_values.empty()) throw ConfigError("sweep has no values");
    if (schemes.empty()) throw ConfigError("no schemes selected");
    if (!series_key.empty() && series_values.empty()) throw ConfigError("series '" + series_key + "' has no values");
    const std::vector<double> series = series_key.empty() ? std::vector<double>{0.0} : series_values;
    for (double x : sweep_values) {
        for (double s : series) {
            ScenarioConfig c = base_config;
            apply(c, sweep_key, x);
            apply(c, series_key, s);
            c.validate();
        }
    }
}

ExperimentSpec make_preset(Preset preset, const ScenarioConfig& base)
{
    ExperimentSpec spec;
    spec.preset = preset;
    spec.base_config = base;
    const std::vector<Scheme> all = {Scheme::proposed, Scheme::noma_dc, Scheme::ftpa, Scheme::ofdma};
    const auto users = range(10, 40, 5);
    const auto hover = range(0.1, 1.0, 0.1);
    auto sweep = [&](std::string key, std::string column, std::vector<double> values) {
        spec.sweep_key = std::move(key);
        spec.sweep_column = std::move(column);
        spec.sweep_values = std::move(values);
    };
    auto series = [&](std::string key, std::string column, std::vector<double> values) {
        spec.series_key = std::move(key);
        spec.series_column = std::move(column);
        spec.series_values = std::move(values);
    };
    switch (preset) {
    case Preset::fig2:
        sweep("users_per_cell", "n_users", users);
        spec.schemes = all;
        break;
    case Preset::fig3:
        sweep("users_per_cell", "n_users", {10, 30});
        spec.schemes = {Scheme::proposed};
        spec.record_traces = true;
        break;
    case Preset::fig4:
        sweep("users_per_cell", "n_users", users);
        series("sigma_e2", "sigma_e2", {0.01, 0.05, 0.2});
        spec.schemes = {Scheme::proposed};
        break;
    case Preset::fig5:
        sweep("users_per_cell", "n_users", users);
        series("sigma_e2", "sigma_e2", {0.0, 0.2});
        spec.schemes = {Scheme::proposed, Scheme::ftpa};
        break;
    case Preset::fig6:
        sweep("p_hover_w", "p_m", hover);
        spec.base_config.p_uav_max_w = 10.0;
        spec.base_config.users_per_cell = 10;
        spec.schemes = all;
        break;
    case Preset::fig7:
        sweep("p_hover_w", "p_m", hover);
        spec.base_config.p_uav_max_w = 5.0;
        spec.base_config.users_per_cell = 10;
        spec.base_config.sigma_e2 = 0.05;
        spec.schemes = all;
        break;
    case Preset::fig8:
        sweep("p_hover_w", "p_m", hover);
        series("sigma_e2", "sigma_e2", {0.01, 0.1, 0.5});
        spec.base_config.users_per_cell = 10;
        spec.schemes = {Scheme::proposed};
        break;
    case Preset::fig9:
        sweep("uav_height_m", "height_m", range(100, 500, 50));
        spec.base_config.users_per_cell = 20;
        spec.base_config.sigma_e2 = 0.05;
        spec.schemes = {Scheme::proposed, Scheme::ftpa, Scheme::ofdma};
        break;
    case Preset::custom:
        sweep("users_per_cell", "n_users", {static_cast<double>(base.users_per_cell)});
        spec.schemes = all;
        break;
    }
    return spec;
}

TrialOutcome run_trial(const ScenarioConfig& config, std::uint64_t seed, const std::vector<Scheme>& schemes,
                       bool record_trace)
{
    TrialOutcome out;
    try {
        const ChannelSet channels = build_channel_set(generate_topology(config, seed), config, seed);
        const LinkTable table(channels, config);
        const bool needs_schedule = std::any_of(schemes.begin(), schemes.end(), [](Scheme s) { return s != Scheme::ofdma; });
        Assignment assignment;
        if (needs_schedule) assignment = schedule_users(channels, table, config);
        auto note = [&](const PowerVector& p) {
            out.max_violation = std::max(out.max_violation, check_feasibility(p, channels, config).worst());
        };
        for (Scheme s : schemes) {
            switch (s) {
            case Scheme::proposed: {
                const auto pa = allocate_power(assignment, channels, table, config);
                note(pa.power);
                out.ee[s] = total_ee(assignment, pa.power, table).total_ee;
                if (record_trace) {
                    out.trace = pa.objective_trace;
                    out.trace_violation = pa.violation_trace;
                }
                break;
            }
            case Scheme::noma_dc: {
                const auto nd = noma_dc_power(assignment, channels, table, config);
                note(nd.power);
                out.ee[s] = total_ee(assignment, nd.power, table).total_ee;
                break;
            }
            case Scheme::ftpa: {
                const auto fa = ftpa_allocate(assignment, channels, config);
                note(fa.power);
                out.ee[s] = total_ee(fa.assignment, fa.power, table).total_ee;
                break;
            }
            case Scheme::ofdma: {
                const auto r = ofdma_allocate(channels, table, config);
                note(r.power);
                out.ee[s] = r.report.total_ee;
                break;
            }
            }
        }
    } catch (const std::exception& e) {
        out.failed = true;
        out.error = e.what();
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec)
{
    spec.validate();
    const std::vector<double> series = spec.series_key.empty() ? std::vector<double>{0.0} : spec.series_values;
    const std::size_t n_points = spec.sweep_values.size() * series.size();
    const std::size_t n_jobs = n_points * static_cast<std::size_t>(spec.trials);
    std::vector<TrialOutcome> outcomes(n_jobs);

    auto config_for = [&](std::size_t point) {
        ScenarioConfig c = spec.base_config;
        apply(c, spec.sweep_key, spec.sweep_values[point / series.size()]);
        apply(c, spec.series_key, series[point % series.size()]);
        return c;
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t job = next++; job < n_jobs; job = next++) {
            const std::size_t point = job / spec.trials;
            const auto t = static_cast<std::uint64_t>(job % spec.trials);
            outcomes[job] = run_trial(config_for(point), spec.seed + t, spec.schemes, spec.record_traces);
        }
    };
    const unsigned n_threads = std::max(1u, spec.threads ? spec.threads : std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < n_threads; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    ExperimentResult result;
    for (std::size_t point = 0; point < n_points; ++point) {
        const std::size_t si = point / series.size();
        const std::size_t ri = point % series.size();
        const double x = spec.sweep_values[si];
        const double r = series[ri];
        const auto first = outcomes.begin() + static_cast<std::ptrdiff_t>(point * spec.trials);
        const std::vector<TrialOutcome> trials(first, first + spec.trials);
        for (std::size_t t = 0; t < trials.size(); ++t) {
            if (trials[t].failed) {
                ++result.failed_trials;
                result.failures.push_back(spec.sweep_column + "=" + fmt(x) + " trial " + std::to_string(t) + ": " +
                                          trials[t].error);
            } else {
                result.max_violation = std::max(result.max_violation, trials[t].max_violation);
            }
        }
        for (Scheme s : spec.schemes) {
            std::vector<double> values;
            auto& samples = result.samples[{si, ri, s}];
            for (const auto& o : trials) {
                samples.push_back(o.failed ? std::numeric_limits<double>::quiet_NaN() : o.ee.at(s));
                if (!o.failed) values.push_back(o.ee.at(s));
            }
            const auto [mean, se] = mean_stderr(values);
            result.rows.push_back({x, r, s, mean, se, static_cast<int>(values.size())});
        }
        if (spec.record_traces) {
            std::size_t length = 0;
            for (const auto& o : trials) {
                if (!o.failed) length = std::max(length, o.trace.size());
            }
            for (std::size_t it = 0; it < length; ++it) {
                std::vector<double> values;
                double violation = 0.0;
                for (const auto& o : trials) {
                    if (o.failed || o.trace.empty()) continue;
                    const std::size_t j = std::min(it, o.trace.size() - 1);
                    values.push_back(o.trace[j]);
                    violation = std::max(violation, o.trace_violation[j]);
                }
                const auto [mean, se] = mean_stderr(values);
                result.traces.push_back(
                    {x, r, Scheme::proposed, static_cast<int>(it), mean, se, violation, static_cast<int>(values.size())});
            }
        }
    }
    return result;
}

void write_experiment_csv(std::ostream& out, const ExperimentSpec& spec, const ExperimentResult& result)
{
    out << "# preset=" << preset_name(spec.preset) << "\n";
    out << "# sweep=" << spec.sweep_key << ":" << join(spec.sweep_values) << "\n";
    if (!spec.series_key.empty()) out << "# series=" << spec.series_key << ":" << join(spec.series_values) << "\n";
    out << "# schemes=";
    for (std::size_t j = 0; j < spec.schemes.size(); ++j) out << (j ? "," : "") << scheme_name(spec.schemes[j]);
    out << "\n# trials=" << spec.trials << "\n# base_seed=" << spec.seed << "\n";
    out << "# ee_unit=bits/J\n";
    for (const auto& line : describe_config(spec.base_config)) out << "# " << line << "\n";
    out << "# failed_trials=" << result.failed_trials << "\n";
    out << "# max_violation=" << fmt(result.max_violation) << "\n";
    const bool has_series = !spec.series_key.empty();
    auto lead = [&](double x, double r) {
        out << fmt(x) << ",";
        if (has_series) out << fmt(r) << ",";
    };
    out << spec.sweep_column << ",";
    if (has_series) out << spec.series_column << ",";
    if (spec.record_traces) {
        out << "scheme,iteration,mean_objective,stderr,max_violation,trials\n";
        for (const auto& row : result.traces) {
            lead(row.sweep_value, row.series_value);
            out << scheme_name(row.scheme) << "," << row.iteration << "," << fmt(row.mean) << "," << fmt(row.stderr_)
                << "," << fmt(row.max_violation) << "," << row.trials << "\n";
        }
    } else {
        out << "scheme,mean_ee,stderr,trials\n";
        for (const auto& row : result.rows) {
            lead(row.sweep_value, row.series_value);
            out << scheme_name(row.scheme) << "," << fmt(row.mean) << "," << fmt(row.stderr_) << "," << row.trials
                << "\n";
        }
    }
}

ExperimentResult run_and_write(const ExperimentSpec& spec, std::ostream& fallback)
{
    const ExperimentResult result = run_experiment(spec);
    if (spec.output_path.empty()) {
        write_experiment_csv(fallback, spec, result);
        return result;
    }
    std::ofstream file(spec.output_path, std::ios::binary);
    if (!file) throw IoError("cannot open '" + spec.output_path.string() + "' for writing");
    write_experiment_csv(file, spec, result);
    file.flush();
    if (!file) throw IoError("failed writing '" + spec.output_path.string() + "'");
    return result;
}

namespace {

double rician_tail_quadrature(double a, double b)
{
    // 1 - integral_0^b x exp(-(x^2 + a^2) / 2) I0(a x) dx, composite Simpson.
    if (b == 0.0) return 1.0;
    const int n = 4000;
    const double h = b / n;
    auto pdf = [a](double x) {
        const double ax = a * x;
        return x * std::exp(-0.5 * (x - a) * (x - a)) * std::cyl_bessel_i(0.0, ax) * std::exp(-ax);
    };
    double s = pdf(0.0) + pdf(b);
    for (int j = 1; j < n; ++j) s += (j % 2 ? 4.0 : 2.0) * pdf(j * h);
    return 1.0 - s * h / 3.0;
}

std::vector<DCContext> sample_contexts(const ScenarioConfig& config, const ValidationOptions& options, int count)
{
    std::vector<DCContext> out;
    if (config.users_per_cell < 2) return out;
    Rng rng = make_stream(options.seed, 0x63747874);
    for (int inst = 0; inst < options.instances; ++inst) {
        const std::uint64_t seed = options.seed + static_cast<std::uint64_t>(inst);
        const ChannelSet channels = build_channel_set(generate_topology(config, seed), config, seed);
        const LinkTable table(channels, config);
        for (int j = 0; j < count / options.instances + 1; ++j) {
            const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(config.n_uavs));
            const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(config.n_subchannels()));
            const int a = static_cast<int>(rng() % static_cast<std::uint64_t>(config.users_per_cell));
            const int b = (a + 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(config.users_per_cell - 1))) %
                          config.users_per_cell;
            out.push_back(pair_context(channels, table, config, i, k, a, b));
        }
    }
    out.resize(std::min<std::size_t>(out.size(), count));
    return out;
}

} // namespace

std::vector<ValidationEntry> validate(const ScenarioConfig& config, const ValidationOptions& options)
{
    config.validate();
    std::vector<ValidationEntry> report;
    auto add = [&](std::string name, bool passed, std::string detail) {
        report.push_back({std::move(name), passed, false, std::move(detail)});
    };
    auto skip = [&](std::string name, std::string reason) { report.push_back({std::move(name), true, true, std::move(reason)}); };
    Rng rng = make_stream(options.seed, 0x76616c69);

    {
        double worst = 0.0;
        for (int j = 0; j < 10; ++j) {
            for (int l = 0; l < 10; ++l) {
                const double a = 0.6 * j;
                const double b = 0.8 * l + 0.05;
                worst = std::max(worst, std::abs(marcum_q1(a, b) - rician_tail_quadrature(a, b)));
            }
        }
        add("marcum_q1 matches quadrature", worst <= 1e-8, "max abs error " + fmt(worst));
    }
    {
        bool monotone = true;
        for (int j = 0; j < 200; ++j) {
            const double a = 10.0 * uniform01(rng);
            const double b = 10.0 * uniform01(rng);
            const double d = 0.5 * uniform01(rng);
            monotone = monotone && marcum_q1(a + d, b) >= marcum_q1(a, b) - 1e-15 &&
                       marcum_q1(a, b + d) <= marcum_q1(a, b) + 1e-15;
        }
        add("marcum_q1 monotone in a and b", monotone, "200 random points");
    }

    if (config.sigma_e2 == 0.0) {
        skip("fading quantile round trip", "sigma_e2 = 0: outage transform bypassed");
        skip("fading_cdf matches Monte Carlo", "sigma_e2 = 0: outage transform bypassed");
        skip("outage rate is conservative", "sigma_e2 = 0: outage transform bypassed");
    } else {
        double worst = 0.0;
        for (int j = 0; j < 50; ++j) {
            const double g = 3.0 * uniform01(rng);
            const double eps = 0.01 + 0.3 * uniform01(rng);
            const double x = fading_quantile(eps, g, config.sigma_e2);
            worst = std::max(worst, std::abs(fading_cdf(x, g, config.sigma_e2) - eps));
        }
        add("fading quantile round trip", worst <= 1e-9, "max |cdf(q(eps)) - eps| " + fmt(worst));

        const double g = 0.8;
        const int draws = 100000;
        std::vector<double> samples(draws);
        for (double& s : samples) s = std::norm(std::sqrt(g) + complex_gaussian(rng, config.sigma_e2));
        std::sort(samples.begin(), samples.end());
        double sup = 0.0;
        for (int j = 0; j < 50; ++j) {
            const double x = samples[static_cast<std::size_t>((j + 0.5) / 50.0 * draws)];
            const double empirical = static_cast<double>(std::upper_bound(samples.begin(), samples.end(), x) - samples.begin()) / draws;
            sup = std::max(sup, std::abs(empirical - fading_cdf(x, g, config.sigma_e2)));
        }
        add("fading_cdf matches Monte Carlo", sup <= 1e-2, "sup error " + fmt(sup) + " over 1e5 draws");

        // Empirical outage of B log2(1 + outage_sinr) against the true channel.
        int outages = 0;
        const int links = 20;
        const int per_link = 5000;
        for (int l = 0; l < links; ++l) {
            const double g_hat = 0.2 + 2.0 * uniform01(rng);
            const double noise = 1e-12;
            const double cross = 1e-12 * uniform01(rng);
            const double pl = 1e-3;
            const auto ctx = make_outage_context(config.eps_out, g_hat, config.sigma_e2, pl, noise, cross);
            const double p_self = 0.5;
            const double p_int = 0.5 * uniform01(rng);
            const double sinr = outage_sinr(p_self, std::span<const double>(&p_int, 1), ctx);
            for (int d = 0; d < per_link; ++d) {
                const double h_self = pl * pl * std::norm(std::sqrt(g_hat) + complex_gaussian(rng, config.sigma_e2));
                const double h_int = h_self;
                const double true_sinr = p_self * h_self / (noise + cross + p_int * h_int);
                if (true_sinr < sinr) ++outages;
            }
        }
        const double n = static_cast<double>(links) * per_link;
        const double rate = outages / n;
        const double bound = config.eps_out + 3.0 * std::sqrt(config.eps_out * (1 - config.eps_out) / n);
        add("outage rate is conservative", rate <= bound, "empirical outage " + fmt(rate) + " vs " + fmt(bound));
    }

    {
        Rng mrng = make_stream(options.seed, 0x6d61726b);
        const std::vector<double> powers = {0.3, 0.7, 1.1};
        const std::vector<double> means = {1.0, 0.5, 2.0};
        const double threshold = 4.0;
        const double bound = markov_interference_bound(powers, means, threshold);
        int exceed = 0;
        const int draws = 100000;
        std::exponential_distribution<double> expo(1.0);
        for (int d = 0; d < draws; ++d) {
            double sum = 0.0;
            for (std::size_t j = 0; j < powers.size(); ++j) sum += powers[j] * means[j] * expo(mrng);
            if (sum > threshold) ++exceed;
        }
        const double rate = static_cast<double>(exceed) / draws;
        add("Markov interference bound holds", rate <= bound, "exceedance " + fmt(rate) + " <= bound " + fmt(bound));
    }

    const auto contexts = sample_contexts(config, options, 60);
    if (contexts.empty()) {
        skip("grad_f2 matches finite differences", "fewer than two users per cell");
        skip("F1 - F2 equals negated pair EE", "fewer than two users per cell");
        skip("DC iteration descends", "fewer than two users per cell");
    } else {
        double worst_grad = 0.0;
        double worst_identity = 0.0;
        bool descends = true;
        for (const auto& ctx : contexts) {
            for (double beta : {0.1, 0.37, 0.5, 0.81}) {
                double h = 1e-4 * std::min(beta, 1.0 - beta);
                auto central = [&](double step) { return (f2(beta + step, ctx) - f2(beta - step, ctx)) / (2.0 * step); };
                const double fd = (4.0 * central(h / 2.0) - central(h)) / 3.0;
                const double an = options.grad_f2(beta, ctx);
                worst_grad = std::max(worst_grad, std::abs(an - fd) / std::max(std::abs(fd), 1e-300));
                const double lhs = f1(beta, ctx) - f2(beta, ctx);
                const double rhs = -pair_ee(beta, ctx) / ctx.success;
                worst_identity = std::max(worst_identity, std::abs(lhs - rhs) / std::abs(rhs));
            }
            const auto r = dc_optimize_beta(ctx, config.tol_dc, 200);
            for (std::size_t t = 1; t < r.objective_trace.size(); ++t) {
                descends = descends && r.objective_trace[t] <= r.objective_trace[t - 1];
            }
        }
        add("grad_f2 matches finite differences", worst_grad <= 1e-6, "max relative error " + fmt(worst_grad));
        add("F1 - F2 equals negated pair EE", worst_identity <= 1e-9, "max relative error " + fmt(worst_identity));
        add("DC iteration descends", descends, std::to_string(contexts.size()) + " contexts");
    }

    {
        const std::uint64_t seed = options.seed;
        const ChannelSet channels = build_channel_set(generate_topology(config, seed), config, seed);
        const LinkTable table(channels, config);
        const Assignment assignment = schedule_users(channels, table, config);
        const FeasibleSet set(assignment, channels, config);
        const PowerVector anchor = initial_power(assignment, set, config);
        const double z = ee_power_objective(anchor, assignment, table);
        const double tight = std::abs(sca_surrogate(anchor, anchor, assignment, table) + z) / std::abs(z);
        add("SCA surrogate tight at anchor", tight <= 1e-9, "relative gap " + fmt(tight));
        bool bound = true;
        for (int j = 0; j < 200; ++j) {
            PowerVector p(anchor.n_uavs(), anchor.n_subchannels());
            for (double& v : p.values()) v = config.p_uav_max_w / config.n_subchannels() * 2.0 * uniform01(rng);
            bound = bound && sca_surrogate(p, anchor, assignment, table) >= -ee_power_objective(p, assignment, table) -
                                                                                 1e-9 * std::abs(z);
        }
        add("SCA surrogate bounds the objective", bound, "200 sampled points");
        const auto pa = allocate_power(assignment, channels, table, config);
        bool ascent = true;
        for (std::size_t t = 1; t < pa.objective_trace.size(); ++t) {
            ascent = ascent && pa.objective_trace[t] >= pa.objective_trace[t - 1] - 1e-9 * std::abs(pa.objective_trace[0]);
        }
        const double worst = *std::max_element(pa.violation_trace.begin(), pa.violation_trace.end());
        add("power iterates feasible", worst <= 1e-9, "max violation " + fmt(worst));
        add("power objective non-decreasing", ascent, std::to_string(pa.objective_trace.size()) + " iterates");
        double load_gap = 0.0;
        for (int w = 0; w < channels.n_macro_users(); ++w) {
            for (int k = 0; k < channels.n_subchannels(); ++k) {
                double direct = 0.0;
                for (int i = 0; i < channels.n_uavs(); ++i) direct += pa.power(i, k) * channels.cross_uav_to_macro(w, i, k);
                load_gap = std::max(load_gap, std::abs(direct - macro_interference(pa.power, channels, w, k)));
            }
        }
        add("macro interference recomputed from iterate", load_gap <= 1e-12 * std::max(config.interference_cap_w, 1e-30),
            "max difference " + fmt(load_gap));
    }
    return report;
}

OracleStats oracle_compare(const ScenarioConfig& config, int n_instances, std::uint64_t seed)
{
    config.validate();
    if (n_instances < 1) throw ConfigError("instances must be >= 1");
    if (config.users_per_cell > kExhaustiveMaxUsers || config.n_subchannels() > kExhaustiveMaxSubchannels) {
        throw ConfigError("oracle comparison needs users_per_cell <= 8 and n_subchannels <= 4");
    }
    OracleStats stats;
    for (int t = 0; t < n_instances; ++t) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(t);
        const ChannelSet channels = build_channel_set(generate_topology(config, s), config, s);
        const LinkTable table(channels, config);
        const double matched = scheduling_ee(schedule_users(channels, table, config), table, config);
        const double best = exhaustive_schedule(channels, table, config).scheduling_ee;
        Rng rng = make_stream(s, 0x72616e64);
        const double random = random_schedule(channels, table, config, rng).scheduling_ee;
        stats.ratios.push_back(matched / best);
        stats.random_ratios.push_back(random / best);
        if (matched > best * (1.0 + 1e-9)) stats.bounded = false;
    }
    stats.min_ratio = *std::min_element(stats.ratios.begin(), stats.ratios.end());
    stats.mean_ratio = mean_stderr(stats.ratios).first;
    stats.mean_random_ratio = mean_stderr(stats.random_ratios).first;
    return stats;
}

} // namespace uavnoma
