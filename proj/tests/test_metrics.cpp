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

#include "uavnoma/metrics.hpp"
#include "uavnoma/outage.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

using namespace uavnoma;

namespace {

// Users 2k and 2k+1 share subchannel k in every cell.
Assignment consecutive_pairs(const testing::Instance& inst, double beta)
{
    Assignment a(inst.config.n_uavs, inst.config.n_subchannels());
    for (int i = 0; i < inst.config.n_uavs; ++i) {
        for (int k = 0; k < inst.config.n_subchannels(); ++k) {
            const int u = 2 * k;
            const int w = 2 * k + 1 < inst.config.users_per_cell ? 2 * k + 1 : -1;
            a.place(i, k, u, w, inst.channels, beta);
        }
    }
    return a;
}

// Re-derives the network EE from the outage transform and per-user EE definition.
double rederive_ee(const testing::Instance& inst, const Assignment& a, const PowerVector& p)
{
    const auto& ch = inst.channels;
    const double eps = inst.config.eps_out;
    double total = 0.0;
    for (int i = 0; i < a.n_uavs(); ++i) {
        for (int k = 0; k < a.n_subchannels(); ++k) {
            const auto& s = a.slot(i, k);
            if (s.empty()) continue;
            const auto ctx_of = [&](int user) {
                const auto& l = ch.link(i, user, k);
                return make_outage_context(eps, l.g_hat_mag2(), l.sigma_e2, l.path_loss_gain, ch.noise_power,
                                           ch.p_macro_per_sc * ch.cross_bs_to_uav_user(i, user, k));
            };
            const double p_strong = s.paired() ? s.beta * p(i, k) : p(i, k);
            const double sinr_s = outage_sinr(p_strong, {}, ctx_of(s.strong));
            total += user_ee(achievable_rate(sinr_s, ch.subchannel_bandwidth_hz), eps, inst.config.p_hover_w, p_strong);
            if (s.paired()) {
                const double p_weak = (1.0 - s.beta) * p(i, k);
                const std::vector<double> inter{p_strong};
                const double sinr_w = outage_sinr(p_weak, inter, ctx_of(s.weak));
                total += user_ee(achievable_rate(sinr_w, ch.subchannel_bandwidth_hz), eps, inst.config.p_hover_w, p_weak);
            }
        }
    }
    return total;
}

} // namespace

TEST_CASE("SIC SINR examples")
{
    CHECK(sic_sinr(std::vector<double>{1.0}, std::vector<double>{1.0}, 0.0, 1.0, 0) == doctest::Approx(1.0));
    CHECK(sic_sinr(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 1.0}, 0.0, 1.0, 1) == doctest::Approx(0.5));
    // The first user in the order sees no intra-cell interference whatever the others transmit.
    const std::vector<double> g{3.0, 1.0, 0.5};
    const double alone = sic_sinr(std::vector<double>{2.0}, std::vector<double>{3.0}, 0.1, 0.2, 0);
    CHECK(sic_sinr(std::vector<double>{2.0, 5.0, 9.0}, g, 0.1, 0.2, 0) == doctest::Approx(alone));
    CHECK_THROWS_AS(sic_sinr(std::vector<double>{1.0}, std::vector<double>{1.0}, 0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("achievable rate examples")
{
    CHECK(achievable_rate(0.0, 2e6) == 0.0);
    CHECK(achievable_rate(1.0, 1.0) == doctest::Approx(1.0));
    CHECK(achievable_rate(3.0, 2e6) == doctest::Approx(4e6));
}

TEST_CASE("user EE examples")
{
    CHECK(user_ee(1e6, 0.05, 0.5, 0.5) == doctest::Approx(0.95e6));
    CHECK(user_ee(3e6, 0.0, 0.5, 1.0) == doctest::Approx(2e6));
    CHECK(user_ee(1e6, 0.05, 0.5, 1e12) < 1e-5);
    CHECK_THROWS_AS(user_ee(1.0, 0.05, 0.0, 0.0), std::domain_error);
}

TEST_CASE("single user on a single subchannel reduces to that user's EE")
{
    ScenarioConfig c;
    c.n_uavs = 1;
    c.users_per_cell = 1;
    const auto inst = testing::make_instance(c, 2);
    Assignment a(1, 1);
    a.place(0, 0, 0, -1, inst.channels);
    const PowerVector p(1, 1, 2.0);
    const auto rep = total_ee(a, p, inst.table);
    const auto& lc = inst.table.at(0, 0, 0);
    const double rate = achievable_rate(lc.strong_gain * 2.0 / lc.base_noise, inst.channels.subchannel_bandwidth_hz);
    CHECK(rep.total_ee == doctest::Approx(user_ee(rate, c.eps_out, c.p_hover_w, 2.0)).epsilon(1e-12));
    REQUIRE(rep.users.size() == 1);
    CHECK(rep.users[0].role == "single");
}

TEST_CASE("zero strong share leaves only the weak user's EE")
{
    ScenarioConfig c;
    c.users_per_cell = 4;
    const auto inst = testing::make_instance(c, 3);
    const auto a = consecutive_pairs(inst, 0.0);
    const auto p = equal_power(c, c.n_uavs);
    const auto rep = total_ee(a, p, inst.table);
    double weak_sum = 0.0;
    for (const auto& u : rep.users) {
        if (u.role == "strong") {
            CHECK(u.rate_bps == 0.0);
            CHECK(u.ee_bits_per_joule == 0.0);
        } else {
            weak_sum += u.ee_bits_per_joule;
        }
    }
    CHECK(rep.total_ee == doctest::Approx(weak_sum));
    CHECK(weak_sum > 0.0);
}

TEST_CASE("network EE matches an independent re-derivation")
{
    Rng rng = make_stream(4, 4);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        ScenarioConfig c;
        c.users_per_cell = 2 + static_cast<int>(seed % 7);
        c.sigma_e2 = 0.01 + 0.3 * uniform01(rng);
        const auto inst = testing::make_instance(c, seed);
        auto a = consecutive_pairs(inst, uniform01(rng));
        PowerVector p(c.n_uavs, c.n_subchannels());
        for (auto& x : p.values()) x = uniform01(rng);
        const double ee = total_ee(a, p, inst.table).total_ee;
        REQUIRE(ee == doctest::Approx(rederive_ee(inst, a, p)).epsilon(1e-9));
        REQUIRE(total_ee(a, p, inst.channels, c).total_ee == ee);
    }
}

TEST_CASE("perfect CSI uses the plain SIC SINR")
{
    ScenarioConfig c;
    c.users_per_cell = 2;
    c.sigma_e2 = 0.0;
    const auto inst = testing::make_instance(c, 5);
    CHECK(inst.table.perfect_csi());
    const auto a = consecutive_pairs(inst, 0.3);
    const PowerVector p(c.n_uavs, 1, 2.0);
    const auto rep = total_ee(a, p, inst.table);
    CHECK(rep.outage_factor == 1.0);
    double expected = 0.0;
    const auto& ch = inst.channels;
    for (int i = 0; i < c.n_uavs; ++i) {
        const auto& s = a.slot(i, 0);
        const double cross_s = ch.p_macro_per_sc * ch.cross_bs_to_uav_user(i, s.strong, 0);
        const double cross_w = ch.p_macro_per_sc * ch.cross_bs_to_uav_user(i, s.weak, 0);
        const double gs = ch.link(i, s.strong, 0).h_true_mag2();
        const double gw = ch.link(i, s.weak, 0).h_true_mag2();
        const double sinr_s = sic_sinr(std::vector<double>{0.6}, std::vector<double>{gs}, cross_s, ch.noise_power, 0);
        const double sinr_w = 1.4 * gw / (cross_w + 0.6 * gw + ch.noise_power);
        expected += user_ee(achievable_rate(sinr_s, ch.subchannel_bandwidth_hz), 0.0, c.p_hover_w, 0.6);
        expected += user_ee(achievable_rate(sinr_w, ch.subchannel_bandwidth_hz), 0.0, c.p_hover_w, 1.4);
    }
    CHECK(rep.total_ee == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("network EE is additive over slots")
{
    ScenarioConfig c;
    c.users_per_cell = 8;
    const auto inst = testing::make_instance(c, 6);
    const auto full = consecutive_pairs(inst, 0.4);
    const auto p = equal_power(c, c.n_uavs);
    double parts = 0.0;
    for (int i = 0; i < c.n_uavs; ++i) {
        for (int k = 0; k < c.n_subchannels(); ++k) {
            Assignment one(c.n_uavs, c.n_subchannels());
            one.slot(i, k) = full.slot(i, k);
            parts += total_ee(one, p, inst.table).total_ee;
        }
    }
    const auto rep = total_ee(full, p, inst.table);
    CHECK(rep.total_ee == doctest::Approx(parts).epsilon(1e-12));
    double users = 0.0;
    for (const auto& u : rep.users) users += u.ee_bits_per_joule;
    CHECK(rep.total_ee == doctest::Approx(users).epsilon(1e-12));
    CHECK(rep.users.size() == static_cast<std::size_t>(c.n_uavs * c.users_per_cell));
}

TEST_CASE("network EE rejects malformed input")
{
    ScenarioConfig c;
    c.users_per_cell = 4;
    const auto inst = testing::make_instance(c, 7);
    Assignment a(c.n_uavs, c.n_subchannels());
    a.place(0, 0, 0, 1, inst.channels);
    a.place(0, 1, 1, 2, inst.channels);
    CHECK_THROWS_AS(total_ee(a, equal_power(c, c.n_uavs), inst.table), std::invalid_argument);
    Assignment wrong_shape(c.n_uavs, 1);
    CHECK_THROWS_AS(total_ee(wrong_shape, equal_power(c, c.n_uavs), inst.table), std::invalid_argument);
}

TEST_CASE("EE report CSV lists every served user and the total")
{
    ScenarioConfig c;
    c.users_per_cell = 4;
    const auto inst = testing::make_instance(c, 8);
    const auto rep = total_ee(consecutive_pairs(inst, 0.5), equal_power(c, c.n_uavs), inst.table);
    std::ostringstream out;
    write_ee_report_csv(out, rep);
    const std::string s = out.str();
    CHECK(s.rfind("uav,user,subchannel,role,power_w,sinr,rate_bps,ee_bits_per_joule\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == static_cast<long>(rep.users.size()) + 2);
    CHECK(s.find("total,") != std::string::npos);
}
