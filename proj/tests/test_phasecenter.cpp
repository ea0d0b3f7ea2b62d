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

#include <movant/phasecenter.hpp>
#include <movant/rng.hpp>

#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

using namespace movant;

namespace
{
    far_field_cut displaced_source(double x0, double half = 60.0, double step = 1.0)
    {
        return sample_cut([x0](double th) { return std::polar(1.0, 2 * std::numbers::pi * x0 * std::sin(th * std::numbers::pi / 180)); },
                          half, step);
    }
}

TEST(ModePattern, Tm11PeaksAtBroadsideAndIsEven)
{
    const double a = resonant_radius(patch_mode::tm11);
    const double peak = std::abs(mode_pattern(patch_mode::tm11, 0.0, a));
    for (double th = 1; th <= 90; th += 1)
    {
        EXPECT_LE(std::abs(mode_pattern(patch_mode::tm11, th, a)), peak);
        EXPECT_EQ(std::abs(mode_pattern(patch_mode::tm11, th, a)), std::abs(mode_pattern(patch_mode::tm11, -th, a)));
    }
    // 0.3 wavelength patch as well
    EXPECT_EQ(std::abs(mode_pattern(patch_mode::tm11, 20.0, 0.3)), std::abs(mode_pattern(patch_mode::tm11, -20.0, 0.3)));
}

TEST(ModePattern, Tm21BroadsideNullAndOdd)
{
    const double a = resonant_radius(patch_mode::tm21);
    double peak = 0.0;
    for (double th = -90; th <= 90; th += 0.5)
        peak = std::max(peak, std::abs(mode_pattern(patch_mode::tm21, th, a)));
    const double level = std::abs(mode_pattern(patch_mode::tm21, 0.0, a));
    EXPECT_TRUE(level == 0.0 || 20 * std::log10(level / peak) < -20.0);
    EXPECT_EQ(mode_pattern(patch_mode::tm21, 30.0, a), -mode_pattern(patch_mode::tm21, -30.0, a));
}

TEST(ModePattern, ResonantRadii)
{
    EXPECT_NEAR(resonant_radius(patch_mode::tm11), 1.8411837813406593 / (2 * std::numbers::pi * std::sqrt(2.2)), 1e-15);
    EXPECT_NEAR(resonant_radius(patch_mode::tm11), 0.198, 1e-3);
    EXPECT_NEAR(resonant_radius(patch_mode::tm21), 0.328, 1e-3);
}

TEST(ElementField, PureTm11IsShifted)
{
    dual_mode_element e;
    e.center_wl = 0.37;
    e.excitation = {{1.0, 0.0}, {0.0, 0.0}};
    for (double th = -60; th <= 60; th += 7)
    {
        const auto expect = mode_pattern(patch_mode::tm11, th, e.tm11_radius_wl) *
                            std::polar(1.0, 2 * std::numbers::pi * 0.37 * std::sin(th * std::numbers::pi / 180));
        EXPECT_NEAR(std::abs(element_field(e, th) - expect), 0.0, 1e-15);
    }
}

TEST(ElementField, MirroredPairEqualAtBroadside)
{
    dual_mode_element l, r;
    l.center_wl = -0.5;
    r.center_wl = 0.5;
    l.excitation = mode_excitation::from_ratio(-0.7);
    r.excitation = mode_excitation::from_ratio(0.7);
    EXPECT_NEAR(std::abs(element_field(l, 0.0) - element_field(r, 0.0)), 0.0, 1e-15);
}

TEST(ElementField, LinearInExcitation)
{
    counter_rng rng(3);
    for (int t = 0; t < 50; ++t)
    {
        dual_mode_element e, e11, e21;
        const std::complex<double> a(rng.normal(), rng.normal()), b(rng.normal(), rng.normal());
        e.center_wl = e11.center_wl = e21.center_wl = rng.uniform(-1, 1);
        e.excitation = {a, b};
        e11.excitation = {a, 0.0};
        e21.excitation = {0.0, b};
        const double th = rng.uniform(-90, 90);
        EXPECT_NEAR(std::abs(element_field(e, th) - element_field(e11, th) - element_field(e21, th)), 0.0, 1e-12);
    }
}

TEST(Excitation, FromRatio)
{
    const auto x = mode_excitation::from_ratio(0.75);
    EXPECT_NEAR(std::norm(x.tm11) + std::norm(x.tm21), 1.0, 1e-15);
    EXPECT_NEAR(std::arg(x.tm21) - std::arg(x.tm11), std::numbers::pi / 2, 1e-15);
    EXPECT_NEAR(std::abs(x.tm21) / std::abs(x.tm11), 0.75, 1e-15);
    const mode_excitation zero{{0, 0}, {0, 0}};
    EXPECT_THROW((void)zero.normalized(), std::invalid_argument);
}

TEST(PhaseCenter, PointSourceAtOrigin)
{
    const auto e = estimate_phase_center(displaced_source(0.0));
    EXPECT_NEAR(e.offset_wl, 0.0, 1e-6);
    EXPECT_LT(e.residual_rad, 1e-9);
}

TEST(PhaseCenter, DisplacedSource)
{
    EXPECT_NEAR(estimate_phase_center(displaced_source(0.3)).offset_wl, 0.3, 1e-4);
}

TEST(PhaseCenter, ExactAcrossOffsets)
{
    for (int i = 0; i < 50; ++i)
    {
        const double x0 = -1.5 + 3.0 * i / 49.0;
        EXPECT_NEAR(estimate_phase_center(displaced_source(x0)).offset_wl, x0, 1e-4) << x0;
    }
}

TEST(PhaseCenter, PureTm11AtOrigin)
{
    dual_mode_element e;
    e.excitation = {{1.0, 0.0}, {0.0, 0.0}};
    const auto cut = sample_cut([&](double th) { return element_field(e, th); });
    EXPECT_NEAR(estimate_phase_center(cut).offset_wl, 0.0, 1e-3);
}

TEST(PhaseCenter, LowSignalThrows)
{
    far_field_cut cut = displaced_source(0.0);
    for (auto &f : cut.field)
        f = 0.0;
    EXPECT_THROW(estimate_phase_center(cut), low_signal);
}

TEST(Cut, CsvRoundTripAndChecks)
{
    const auto cut = displaced_source(0.2);
    std::ostringstream os;
    write_cut_csv(os, cut);
    std::istringstream in(os.str());
    const auto back = read_cut_csv(in);
    ASSERT_EQ(back.theta_deg.size(), cut.theta_deg.size());
    EXPECT_NEAR(estimate_phase_center(back).offset_wl, 0.2, 1e-4);
    std::istringstream bad("theta_deg,re,im\n0,1\n");
    EXPECT_THROW(read_cut_csv(bad), parse_error);
    far_field_cut unsorted = cut;
    std::swap(unsorted.theta_deg[0], unsorted.theta_deg[1]);
    EXPECT_THROW(unsorted.check(), std::invalid_argument);
}

TEST(Calibration, ZeroMixingAtPhysicalSpacing)
{
    const auto c = calibrate_excitation(1.0);
    EXPECT_EQ(c.ratio, 0.0);
    EXPECT_NEAR(c.achieved_dpc_wl, 1.0, 1e-3);
}

TEST(Calibration, BothSetupsRoundTrip)
{
    for (double target : {0.8, 1.2})
    {
        const calibration_options o;
        const auto c = calibrate_excitation(target, o);
        EXPECT_GT(c.ratio, 0.0);
        EXPECT_NEAR(c.achieved_dpc_wl, target, 1e-3);
        // independent re-estimate of each element in place
        auto est = [&](const dual_mode_element &e) {
            return estimate_phase_center(sample_cut([&](double th) { return element_field(e, th); }, 60, 1)).offset_wl;
        };
        EXPECT_NEAR(est(c.right) - est(c.left), target, 2e-3);
        // mirrored
        EXPECT_NEAR(est(c.right), -est(c.left), 1e-9);
    }
}

TEST(Calibration, DisplacementMonotone)
{
    const auto curve = displacement_curve({}, 41);
    for (std::size_t i = 1; i < curve.size(); ++i)
        EXPECT_GT(curve[i].second, curve[i - 1].second);
    EXPECT_NEAR(curve.front().second, 0.0, 1e-3);
}

TEST(Calibration, OutOfReachThrows)
{
    EXPECT_THROW(calibrate_excitation(3.0), range_error);
}

TEST(Similarity, IdenticalAndMirror)
{
    dual_mode_element l, r;
    l.center_wl = -0.4;
    r.center_wl = 0.4;
    l.excitation = r.excitation = {{1.0, 0.0}, {0.0, 0.0}};
    const auto f = [&](double th) { return element_field(l, th) + element_field(r, th); };
    const auto a = sample_cut(f);
    auto s = pattern_similarity(a, a);
    EXPECT_EQ(s.rms_db, 0.0);
    EXPECT_NEAR(s.correlation, 1.0, 1e-12);
    const auto mirror = sample_cut([&](double th) { return f(-th); });
    s = pattern_similarity(a, mirror);
    EXPECT_NEAR(s.rms_db, 0.0, 1e-9);
    EXPECT_NEAR(s.correlation, 1.0, 1e-12);
}

TEST(Similarity, GridMismatchThrows)
{
    EXPECT_THROW(pattern_similarity(displaced_source(0, 60, 1), displaced_source(0, 60, 2)), std::invalid_argument);
}

TEST(Equivalence, DualModeResemblesPhysicalSpacing)
{
    for (double target : {0.8, 1.2})
    {
        const auto s = run_equivalence(target);
        EXPECT_GE(s.similarity.correlation, 0.98) << target;
        EXPECT_LE(s.similarity.rms_db, 1.5) << target;
    }
}
