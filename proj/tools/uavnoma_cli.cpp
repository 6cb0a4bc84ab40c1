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
#include "uavnoma/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace uavnoma;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitRuntime = 4;

ScenarioConfig config_from(const std::string& path, ScenarioConfig base)
{
    if (path.empty()) return base;
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    ScenarioConfig c = parse_config(text, base);
    c.validate();
    return c;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"UAV NOMA energy-efficiency simulator"};
    app.require_subcommand(1);

    std::string preset = "fig2";
    std::string config_path;
    int trials = 100;
    std::uint64_t seed = 1;
    std::string out_path;
    std::string dump_channels;
    unsigned threads = 0;
    auto* run = app.add_subcommand("run", "Run a figure preset and write CSV");
    run->add_option("--preset", preset, "fig2 .. fig9")->required();
    run->add_option("--config", config_path, "key = value config file");
    run->add_option("--trials", trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "base seed; trial t uses seed + t");
    run->add_option("--out", out_path, "output CSV (stdout if omitted)");
    run->add_option("--threads", threads, "worker threads (0 = all cores)");
    run->add_option("--dump-channels", dump_channels, "write the first trial's channels as CSV");

    auto* val = app.add_subcommand("validate", "Run the invariant suite");
    val->add_option("--config", config_path, "key = value config file");
    val->add_option("--seed", seed, "seed for sampled instances");

    int instances = 100;
    auto* oracle = app.add_subcommand("oracle-compare", "Compare the matching against exhaustive search");
    oracle->add_option("--instances", instances, "number of instances")->check(CLI::PositiveNumber);
    oracle->add_option("--config", config_path, "key = value config file");
    oracle->add_option("--seed", seed, "base seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) {
            ExperimentSpec spec = make_preset(parse_preset(preset));
            spec.base_config = config_from(config_path, spec.base_config);
            spec.trials = trials;
            spec.seed = seed;
            spec.output_path = out_path;
            spec.threads = threads;
            if (!dump_channels.empty()) {
                ScenarioConfig c = spec.base_config;
                set_config_value(c, spec.sweep_key, std::to_string(spec.sweep_values.front()));
                std::ofstream f(dump_channels);
                if (!f) throw IoError("cannot open '" + dump_channels + "' for writing");
                write_channels_csv(f, build_channel_set(generate_topology(c, seed), c, seed));
            }
            const auto result = run_and_write(spec, std::cout);
            for (const auto& f : result.failures) std::cerr << "trial failed: " << f << "\n";
        } else if (*val) {
            const ScenarioConfig c = config_from(config_path, {});
            ValidationOptions opts;
            opts.seed = seed;
            bool ok = true;
            for (const auto& e : validate(c, opts)) {
                std::cout << (e.skipped ? "SKIP" : e.passed ? "PASS" : "FAIL") << "  " << e.property << "  (" << e.detail
                          << ")\n";
                ok = ok && e.passed;
            }
            return ok ? kExitOk : kExitRuntime;
        } else if (*oracle) {
            ScenarioConfig base;
            base.users_per_cell = 4;
            const ScenarioConfig c = config_from(config_path, base);
            const auto stats = oracle_compare(c, instances, seed);
            std::cout << "instances," << stats.ratios.size() << "\n"
                      << "min_ratio," << stats.min_ratio << "\n"
                      << "mean_ratio," << stats.mean_ratio << "\n"
                      << "mean_random_ratio," << stats.mean_random_ratio << "\n"
                      << "bounded," << (stats.bounded ? "true" : "false") << "\n";
            return stats.bounded && stats.mean_ratio > stats.mean_random_ratio ? kExitOk : kExitRuntime;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
