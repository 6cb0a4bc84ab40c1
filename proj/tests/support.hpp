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

#include "uavnoma/channel.hpp"
#include "uavnoma/metrics.hpp"
#include "uavnoma/scenario.hpp"
#include "uavnoma/scheduling.hpp"

#include <cstdint>
#include <vector>

namespace uavnoma::testing {

struct Instance {
    ScenarioConfig config;
    ChannelSet channels;
    LinkTable table;
};

inline Instance make_instance(const ScenarioConfig& config, std::uint64_t seed)
{
    Instance inst{config, build_channel_set(generate_topology(config, seed), config, seed), {}};
    inst.table = LinkTable(inst.channels, config);
    return inst;
}

/// Pair contexts drawn from real instances across several sigma_e2 values.
inline std::vector<DCContext> sample_contexts(int count, std::uint64_t seed)
{
    std::vector<DCContext> out;
    Rng rng = make_stream(seed, 99);
    const double sigmas[] = {0.0, 0.01, 0.05, 0.2, 0.5};
    const double hovers[] = {0.1, 0.5, 1.0};
    int inst_index = 0;
    while (static_cast<int>(out.size()) < count) {
        ScenarioConfig c;
        c.sigma_e2 = sigmas[inst_index % 5];
        c.p_hover_w = hovers[inst_index % 3];
        c.p_uav_max_w = inst_index % 2 == 0 ? 5.0 : 10.0;
        const auto inst = make_instance(c, seed + static_cast<std::uint64_t>(inst_index));
        ++inst_index;
        for (int j = 0; j < 25 && static_cast<int>(out.size()) < count; ++j) {
            const int i = static_cast<int>(rng() % 4);
            const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(c.n_subchannels()));
            const int a = static_cast<int>(rng() % 20);
            const int b = (a + 1 + static_cast<int>(rng() % 19)) % 20;
            out.push_back(pair_context(inst.channels, inst.table, c, i, k, a, b));
        }
    }
    return out;
}

} // namespace uavnoma::testing
