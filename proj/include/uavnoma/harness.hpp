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

#include "uavnoma/scenario.hpp"
#include "uavnoma/scheduling.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavnoma {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Scheme { proposed, noma_dc, ftpa, ofdma };
enum class Preset { fig2, fig3, fig4, fig5, fig6, fig7, fig8, fig9, custom };

std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);
std::string preset_name(Preset p);
/// Throws ConfigError on unknown names.
Preset parse_preset(const std::string& name);

struct ExperimentSpec {
    Preset preset = Preset::custom;
    /// Config key swept along the x axis and its CSV column name.
    std::string sweep_key = "users_per_cell";
    std::string sweep_column = "n_users";
    std::vector<double> sweep_values;
    /// Optional second parameter giving one curve per value.
    std::string series_key;
    std::string series_column;
    std::vector<double> series_values;
    std::vector<Scheme> schemes;
    int trials = 100;
    ScenarioConfig base_config;
    std::uint64_t seed = 1;
    /// Emit per-iteration power-allocation traces instead of final EE.
    bool record_traces = false;
    std::filesystem::path output_path;
    /// Worker threads; 0 means hardware concurrency.
    unsigned threads = 0;

    /// Throws ConfigError when trials < 1, a list is empty or a sweep value
    /// makes the config invalid.
    void validate() const;
};

/// Preset with its fixed parameters applied on top of `base`.
ExperimentSpec make_preset(Preset preset, const ScenarioConfig& base = {});

struct TrialOutcome {
    std::map<Scheme, double> ee;
    /// Power-allocation objective per iteration (proposed scheme), bits/J.
    std::vector<double> trace;
    std::vector<double> trace_violation;
    double max_violation = 0.0;
    bool failed = false;
    std::string error;
};

/// One network instance (topology and channels from `seed`) through every scheme.
TrialOutcome run_trial(const ScenarioConfig& config, std::uint64_t seed, const std::vector<Scheme>& schemes,
                       bool record_trace);

struct SummaryRow {
    double sweep_value = 0.0;
    double series_value = 0.0;
    Scheme scheme = Scheme::proposed;
    double mean = 0.0;
    double stderr_ = 0.0;
    int trials = 0;
};

struct TraceRow {
    double sweep_value = 0.0;
    double series_value = 0.0;
    Scheme scheme = Scheme::proposed;
    int iteration = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
    double max_violation = 0.0;
    int trials = 0;
};

struct ExperimentResult {
    std::vector<SummaryRow> rows;
    std::vector<TraceRow> traces;
    int failed_trials = 0;
    std::vector<std::string> failures;
    /// Worst constraint violation over every power vector produced.
    double max_violation = 0.0;
    /// Per (sweep index, series index, scheme): EE of every successful trial,
    /// in trial order (NaN for failed trials).
    std::map<std::tuple<std::size_t, std::size_t, Scheme>, std::vector<double>> samples;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// CSV with `#` metadata lines echoing every parameter, then a header row.
/// Summary layout: <sweep column>[, <series column>], scheme, mean_ee, stderr, trials.
/// Trace layout: <sweep column>[, <series column>], scheme, iteration,
/// mean_objective, stderr, max_violation, trials.
void write_experiment_csv(std::ostream& out, const ExperimentSpec& spec, const ExperimentResult& result);

/// run_experiment followed by write_experiment_csv to spec.output_path
/// (stdout when empty). Throws IoError when the file cannot be written.
ExperimentResult run_and_write(const ExperimentSpec& spec, std::ostream& fallback);

struct ValidationEntry {
    std::string property;
    bool passed = false;
    bool skipped = false;
    std::string detail;
};

struct ValidationOptions {
    std::uint64_t seed = 1;
    int instances = 3;
    /// Gradient under test; replaceable to check that the suite notices errors.
    std::function<double(double, const DCContext&)> grad_f2 = uavnoma::grad_f2;
};

/// Runs the invariant suite on instances drawn from `config`.
std::vector<ValidationEntry> validate(const ScenarioConfig& config, const ValidationOptions& options = {});

struct OracleStats {
    std::vector<double> ratios;
    std::vector<double> random_ratios;
    double min_ratio = 0.0;
    double mean_ratio = 0.0;
    double mean_random_ratio = 0.0;
    /// Every ratio <= 1 (within 1e-9 relative).
    bool bounded = true;
};

/// Scheduling EE of the matching algorithm and of a random valid assignment,
/// each divided by the exhaustive optimum, over `n_instances` seeds.
OracleStats oracle_compare(const ScenarioConfig& config, int n_instances, std::uint64_t seed = 1);

} // namespace uavnoma
