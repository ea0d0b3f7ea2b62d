// SPDX-License-Identifier: Apache-2.0
//
// movant: movable-antenna array simulation and optimization
// Copyright (C) 2026 The movant authors
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
// ------------------------------------------------------------------------

#include <movant/channel.hpp>

#include <gtest/gtest.h>

#include <numbers>

using namespace movant;

namespace
{
    constexpr double lambda = 0.1;

    antenna_layout line_layout(std::vector<vec3> pos)
    {
        antenna_layout l;
        l.wavelength = lambda;
        l.min_spacing = lambda / 2;
        for (auto &p : pos)
        {
            antenna_element e;
            e.position = p;
            l.elements.push_back(e);
        }
        return l;
    }

    scenario single(cplx beta, vec3 u)
    {
        scenario s;
        s.wavelength = lambda;
        path_component p;
        p.gain = beta;
        p.direction = u.normalized();
        s.users = {{p}};
        s.user_distance_m = {100.0};
        return s;
    }
}

TEST(FieldResponse, PhaseOnly)
{
    const pattern_model omni = pattern::omni{};
    path_component p;
    p.direction = vec3::UnitX();
    auto l = line_layout({vec3(lambda / 2, 0, 0)});
    const cplx f = field_response(l, p, 0, omni, lambda);
    EXPECT_NEAR(std::abs(f - std::polar(1.0, std::numbers::pi)), 0.0, 1e-12);
    l = line_layout({vec3::Zero()});
    p.direction = vec3(0.3, -0.2, 0.9).normalized();
    EXPECT_EQ(field_response(l, p, 0, omni, lambda), cplx(1.0, 0.0));
}

TEST(FieldResponse, DirectionalFloor)
{
    const pattern_model dir = pattern::dir38901{};
    path_component p;
    p.direction = -vec3::UnitX(); // behind the element, (90, 180) locally
    const auto l = line_layout({vec3::Zero()});
    EXPECT_NEAR(std::abs(field_response(l, p, 0, dir, lambda)), std::sqrt(std::pow(10.0, -2.2)), 1e-12);
}

TEST(BuildChannel, ScalarCase)
{
    const cplx beta(0.3, -0.7);
    const auto h = build_channel(line_layout({vec3::Zero()}), single(beta, vec3::UnitY()), pattern::omni{});
    ASSERT_EQ(h.rows(), 1);
    ASSERT_EQ(h.cols(), 1);
    EXPECT_EQ(h(0, 0), beta);
}

TEST(BuildChannel, BroadsideEqualEntries)
{
    const auto h = build_channel(line_layout({vec3::Zero(), vec3(lambda / 2, 0, 0)}), single({1.0, 0.5}, vec3::UnitY()),
                                 pattern::omni{});
    EXPECT_NEAR(std::abs(h(0, 0) - h(0, 1)), 0.0, 1e-15);
}

TEST(BuildChannel, SinglePathMagnitudeIsPositionFree)
{
    const cplx beta(0.8, 0.1);
    const auto s = single(beta, vec3(0.2, 0.5, 0.3));
    counter_rng rng(9);
    for (int i = 0; i < 50; ++i)
    {
        const auto l = line_layout({vec3(rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1))});
        EXPECT_NEAR(std::abs(build_channel(l, s, pattern::omni{})(0, 0)), std::abs(beta), 1e-12);
        // translation by t is a common phase for L = 1
        const vec3 t(0.37, -0.11, 0.05);
        auto moved = l;
        moved.elements[0].position += t;
        EXPECT_NEAR(std::abs(build_channel(moved, s, pattern::omni{})(0, 0)), std::abs(beta), 1e-12);
    }
}

TEST(BuildChannel, OmniIgnoresOrientation)
{
    const auto s = generate_scenario({}, 3);
    auto l = line_layout({vec3::Zero(), vec3(0.1, 0, 0), vec3(0, 0.1, 0), vec3(0, 0, 0.1)});
    const auto h0 = build_channel(l, s, pattern::omni{});
    counter_rng rng(1);
    for (auto &e : l.elements)
        e.orient = {rng.uniform(-3, 3), rng.uniform(-1.5, 1.5), rng.uniform(-3, 3)};
    const auto h1 = build_channel(l, s, pattern::omni{});
    EXPECT_EQ(h0, h1);
    EXPECT_EQ(build_channel(l, s, pattern::omni{}), h1);
}

TEST(BuildChannel, InfeasibleLayoutThrows)
{
    const auto l = line_layout({vec3::Zero(), vec3(lambda / 4, 0, 0)});
    EXPECT_THROW(build_channel(l, generate_scenario({}, 0), pattern::omni{}), infeasible_layout);
}

TEST(BuildChannel, InactiveElementsDropOut)
{
    auto l = line_layout({vec3::Zero(), vec3(0.1, 0, 0), vec3(0.2, 0, 0)});
    l.elements[1].active = false;
    EXPECT_EQ(build_channel(l, generate_scenario({}, 0), pattern::omni{}).cols(), 2);
}

TEST(Scenario, DeterministicAndSeedSensitive)
{
    const auto a = generate_scenario({}, 42), b = generate_scenario({}, 42), c = generate_scenario({}, 43);
    EXPECT_EQ(dump_scenario(a), dump_scenario(b));
    EXPECT_NE(dump_scenario(a), dump_scenario(c));
    ASSERT_EQ(a.users.size(), 4u);
    for (const auto &u : a.users)
    {
        ASSERT_EQ(u.size(), 5u);
        for (const auto &p : u)
        {
            EXPECT_GE(p.elevation_deg, -60.0);
            EXPECT_LE(p.elevation_deg, 60.0);
            EXPECT_NEAR(p.direction.norm(), 1.0, 1e-12);
        }
    }
}

TEST(Scenario, ReplayDumpRoundTrip)
{
    const auto a = generate_scenario({}, 7);
    const auto b = load_scenario(dump_scenario(a));
    const auto l = line_layout({vec3::Zero(), vec3(0.1, 0, 0), vec3(0, 0.1, 0), vec3(0, 0, 0.1)});
    EXPECT_EQ(build_channel(l, a, pattern::dir38901{}), build_channel(l, b, pattern::dir38901{}));
    EXPECT_THROW(load_scenario("{\"format\":\"other\"}"), parse_error);
}

TEST(Scenario, ConfigChecks)
{
    scenario_config c;
    c.paths = 0;
    EXPECT_THROW(generate_scenario(c, 0), config_error);
    c = {};
    c.elevation_max_deg = 95;
    EXPECT_THROW(generate_scenario(c, 0), config_error);
}

TEST(Scenario, UnitAveragePower)
{
    // E ||h_k||^2 / N = 1 per omni element: Monte Carlo over 1e4 seeds
    scenario_config cfg;
    const auto l = line_layout({vec3::Zero(), vec3(0.1, 0, 0), vec3(0, 0.1, 0), vec3(0, 0, 0.1)});
    double acc = 0.0;
    const int seeds = 10000;
    for (int s = 0; s < seeds; ++s)
    {
        const auto h = build_channel(l, generate_scenario(cfg, static_cast<std::uint64_t>(s)), pattern::omni{});
        for (Eigen::Index k = 0; k < h.rows(); ++k)
            acc += h.row(k).squaredNorm() / static_cast<double>(h.cols());
    }
    EXPECT_NEAR(acc / (seeds * cfg.users), 1.0, 0.02);
}

TEST(Scenario, DirectionsUniformInArea)
{
    // sin(elevation) is uniform on [sin(-60), sin(60)]: check the mean of sin^2 against its closed form
    scenario_config cfg;
    double acc = 0.0;
    int n = 0;
    for (int s = 0; s < 4000; ++s)
        for (const auto &u : generate_scenario(cfg, static_cast<std::uint64_t>(s)).users)
            for (const auto &p : u)
            {
                const double z = std::sin(p.elevation_deg * deg_to_rad);
                acc += z * z;
                ++n;
            }
    const double a = std::sin(60.0 * deg_to_rad);
    EXPECT_NEAR(acc / n, a * a / 3.0, 0.01);
}

TEST(Scenario, MultipathFadingAcrossPositions)
{
    // λ-scale sweep of one element: deep and strong points coexist for most seeds
    scenario_config cfg;
    cfg.users = 1;
    int fading = 0;
    for (int s = 0; s < 100; ++s)
    {
        const auto sc = generate_scenario(cfg, static_cast<std::uint64_t>(s));
        double lo = 1e300, hi = 0.0;
        for (int i = 0; i <= 100; ++i)
        {
            const auto l = line_layout({vec3(0.0, i * lambda / 100, 0.0)});
            const double p = std::norm(build_channel(l, sc, pattern::omni{})(0, 0));
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
        fading += 10.0 * std::log10(hi / lo) > 3.0;
    }
    EXPECT_GE(fading, 90);
}

TEST(Platform, PathLossScaling)
{
    auto s = generate_scenario({}, 1);
    s.user_distance_m = {100, 100, 100, 100};
    EXPECT_NEAR(platform_gain(s, 0, vec3::Zero()), 1.0, 1e-12);
    const vec3 toward = 50.0 * s.users[0].front().direction;
    EXPECT_NEAR(platform_gain(s, 0, toward), std::pow(0.5, -1.4), 1e-9);
}
