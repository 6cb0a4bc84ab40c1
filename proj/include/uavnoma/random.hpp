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

#include <complex>
#include <cstdint>
#include <random>

namespace uavnoma {

using Rng = std::mt19937_64;

/// Independent stream for (seed, tag); tags separate topology, fading, etc.
inline Rng make_stream(std::uint64_t seed, std::uint64_t tag)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
    return Rng(seq);
}

/// Uniform on [0, 1) from the top 53 bits; identical across standard libraries.
inline double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
inline std::complex<double> complex_gaussian(Rng& rng, double variance)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    const double s = std::sqrt(variance / 2.0);
    const double re = normal(rng);
    const double im = normal(rng);
    return {s * re, s * im};
}

} // namespace uavnoma
