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

#include "uavnoma/outage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace uavnoma {

namespace {

struct PoissonWindow {
    long lo = 0;
    std::vector<double> pmf;

    [[nodiscard]] long hi() const { return lo + static_cast<long>(pmf.size()) - 1; }
};

void fill_poisson_window(double mean, PoissonWindow& w)
{
    const double sd = std::sqrt(mean);
    w.lo = static_cast<long>(std::max(0.0, std::floor(mean - 12.0 * sd)));
    const long hi = static_cast<long>(std::ceil(mean + 12.0 * sd + 40.0));
    w.pmf.assign(static_cast<std::size_t>(hi - w.lo + 1), 0.0);

    const long mode = static_cast<long>(std::floor(mean));
    const double log_mode = -mean + static_cast<double>(mode) * std::log(mean) - std::lgamma(mode + 1.0);
    double p = std::exp(log_mode);
    w.pmf[static_cast<std::size_t>(mode - w.lo)] = p;
    for (long j = mode + 1; j <= hi; ++j) {
        p *= mean / static_cast<double>(j);
        w.pmf[static_cast<std::size_t>(j - w.lo)] = p;
    }
    p = std::exp(log_mode);
    for (long j = mode; j > w.lo; --j) {
        p *= static_cast<double>(j) / mean;
        w.pmf[static_cast<std::size_t>(j - 1 - w.lo)] = p;
    }
}

// Returns {Q1, 1 - Q1}, each accurate to a few ulp absolute.
std::pair<double, double> marcum_pair(double a, double b)
{
    if (a < 0.0 || b < 0.0 || std::isnan(a) || std::isnan(b)) {
        throw std::domain_error("marcum_q1 requires a >= 0 and b >= 0");
    }
    if (b == 0.0) {
        return {1.0, 0.0};
    }
    const double lambda = 0.5 * a * a;
    const double y = 0.5 * b * b;
    if (lambda == 0.0) {
        return {std::exp(-y), -std::expm1(-y)};
    }

    thread_local PoissonWindow jw;
    thread_local PoissonWindow yw;
    thread_local std::vector<double> tail;
    fill_poisson_window(lambda, jw);
    fill_poisson_window(y, yw);

    const std::size_t ny = yw.pmf.size();
    tail.assign(ny + 1, 0.0);
    if (y > lambda) {
        // Q1 = sum_j Pr[J = j] Pr[Y <= j]; tail[m] = Pr[Y <= yw.lo + m - 1].
        for (std::size_t m = 0; m < ny; ++m) {
            tail[m + 1] = tail[m] + yw.pmf[m];
        }
        double q = 0.0;
        for (std::size_t idx = 0; idx < jw.pmf.size(); ++idx) {
            const long j = jw.lo + static_cast<long>(idx);
            double cdf = 0.0;
            if (j >= yw.hi()) {
                cdf = tail[ny];
            } else if (j >= yw.lo) {
                cdf = tail[static_cast<std::size_t>(j - yw.lo + 1)];
            }
            q += jw.pmf[idx] * cdf;
        }
        q = std::min(q, 1.0);
        return {q, 1.0 - q};
    }
    // 1 - Q1 = sum_j Pr[J = j] Pr[Y > j]; tail[m] = Pr[Y >= yw.lo + m].
    for (std::size_t m = ny; m-- > 0;) {
        tail[m] = tail[m + 1] + yw.pmf[m];
    }
    double c = 0.0;
    for (std::size_t idx = 0; idx < jw.pmf.size(); ++idx) {
        const long j = jw.lo + static_cast<long>(idx);
        double sf = 0.0;
        if (j < yw.lo) {
            sf = tail[0];
        } else if (j < yw.hi()) {
            sf = tail[static_cast<std::size_t>(j - yw.lo + 1)];
        }
        c += jw.pmf[idx] * sf;
    }
    c = std::min(c, 1.0);
    return {1.0 - c, c};
}

} // namespace

double marcum_q1(double a, double b)
{
    return marcum_pair(a, b).first;
}

double marcum_q1_complement(double a, double b)
{
    return marcum_pair(a, b).second;
}

double fading_cdf(double x, double g_hat_mag2, double sigma_e2)
{
    if (x <= 0.0) {
        return 0.0;
    }
    if (sigma_e2 <= 0.0) {
        return x >= g_hat_mag2 ? 1.0 : 0.0;
    }
    return marcum_q1_complement(std::sqrt(2.0 * g_hat_mag2 / sigma_e2), std::sqrt(2.0 * x / sigma_e2));
}

double fading_quantile(double eps, double g_hat_mag2, double sigma_e2)
{
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::domain_error("fading_quantile requires 0 < eps < 1");
    }
    if (!(sigma_e2 > 0.0)) {
        throw std::domain_error("fading_quantile requires sigma_e2 > 0");
    }
    double lo = 0.0;
    double hi = g_hat_mag2 + sigma_e2;
    while (fading_cdf(hi, g_hat_mag2, sigma_e2) < eps) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = fading_cdf(mid, g_hat_mag2, sigma_e2);
        if (f < eps) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (std::abs(f - eps) <= 1e-13 || hi - lo <= 1e-15 * hi) {
            return mid;
        }
    }
    return 0.5 * (lo + hi);
}

double markov_interference_bound(std::span<const double> interferer_powers, std::span<const double> gains,
                                 double threshold)
{
    if (interferer_powers.size() != gains.size()) {
        throw std::invalid_argument("markov_interference_bound: powers and gains differ in length");
    }
    if (!(threshold > 0.0)) {
        return 1.0;
    }
    double mean = 0.0;
    for (std::size_t j = 0; j < gains.size(); ++j) {
        mean += interferer_powers[j] * gains[j];
    }
    return std::min(1.0, mean / threshold);
}

OutageContext make_outage_context(double eps_out, double g_hat_mag2, double sigma_e2, double pl_gain,
                                  double noise_w, double cross_interference_w)
{
    OutageContext ctx;
    ctx.eps_out = eps_out;
    ctx.g_hat_mag2 = g_hat_mag2;
    ctx.sigma_e2 = sigma_e2;
    ctx.pl_gain = pl_gain;
    ctx.quantile = fading_quantile(eps_out / 2.0, g_hat_mag2, sigma_e2);
    ctx.theta = eps_out * (noise_w + cross_interference_w);
    ctx.psi = pl_gain * pl_gain * (g_hat_mag2 + sigma_e2);
    return ctx;
}

double outage_sinr(double p_self, std::span<const double> interferer_powers, const OutageContext& ctx)
{
    double interference = 0.0;
    for (double p : interferer_powers) {
        interference += p;
    }
    return ctx.eps_out * ctx.quantile * p_self * ctx.pl_gain * ctx.pl_gain / (ctx.theta + 2.0 * ctx.psi * interference);
}

} // namespace uavnoma
