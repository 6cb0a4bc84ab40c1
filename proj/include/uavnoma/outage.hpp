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

#include <span>

namespace uavnoma {

/// First-order Marcum Q-function Q1(a, b) for a, b >= 0.
///
/// Evaluated through the Poisson-mixture identity Q1(a, b) = Pr[Y <= J] with
/// Y ~ Poisson(b^2/2) and J ~ Poisson(a^2/2) independent, which is the
/// modified-Bessel series regrouped into non-negative terms. Both Poisson
/// laws are summed over a window mean +- 12 sd (+40 on the right), so the
/// truncation error is below 1e-30, and whichever of Q1 and 1 - Q1 is smaller
/// is accumulated directly. Absolute accuracy is a few ulp for every (a, b);
/// no large-argument switch is needed.
double marcum_q1(double a, double b);
/// 1 - Q1(a, b), accurate when Q1 is close to one.
double marcum_q1_complement(double a, double b);

/// CDF of |g|^2 given g_hat, where g = g_hat + e and e ~ CN(0, sigma_e2):
/// 1 - Q1(sqrt(2|g_hat|^2 / sigma_e2), sqrt(2x / sigma_e2)).
/// For sigma_e2 == 0 the law is a point mass at |g_hat|^2 (step CDF).
double fading_cdf(double x, double g_hat_mag2, double sigma_e2);

/// Inverse of fading_cdf by bracketed bisection; |cdf(x) - eps| <= 1e-10.
/// Throws std::domain_error unless 0 < eps < 1 and sigma_e2 > 0.
double fading_quantile(double eps, double g_hat_mag2, double sigma_e2);

/// Markov bound E[sum p_j |H|^2] / threshold on the interference exceedance
/// probability. `gains` are the conditional mean gains PL^2 (|g_hat|^2 +
/// sigma_e2). A non-positive net threshold makes the bound vacuous (1).
double markov_interference_bound(std::span<const double> interferer_powers, std::span<const double> gains,
                                 double threshold);

/// Per-link constants of the outage-aware SINR.
struct OutageContext {
    double eps_out = 0.0;
    double g_hat_mag2 = 0.0;
    double sigma_e2 = 0.0;
    double pl_gain = 0.0;
    /// F^-1(eps_out / 2) of the |g|^2 law.
    double quantile = 0.0;
    /// Theta = eps_out (sigma^2 + p^M |H^M|^2), watts.
    double theta = 0.0;
    /// Psi = PL^2 (|g_hat|^2 + sigma_e2).
    double psi = 0.0;
};

/// Requires sigma_e2 > 0; `cross_interference_w` is p^M |H^M|^2.
OutageContext make_outage_context(double eps_out, double g_hat_mag2, double sigma_e2, double pl_gain,
                                  double noise_w, double cross_interference_w);

/// eps F^-1 p PL^2 / (Theta + 2 Psi sum(interferers)).
double outage_sinr(double p_self, std::span<const double> interferer_powers, const OutageContext& ctx);

} // namespace uavnoma
