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

#include <movant/geometry.hpp>
#include <movant/rng.hpp>

#include <gtest/gtest.h>

#include <numbers>

using namespace movant;

namespace
{
    constexpr double pi = std::numbers::pi;
    constexpr double lambda = 0.1;

    // Explicit z-y-x product written out element by element.
    mat3 reference_rotation(double y, double p, double r)
    {
        mat3 rz, ry, rx;
        rz << std::cos(y), -std::sin(y), 0, std::sin(y), std::cos(y), 0, 0, 0, 1;
        ry << std::cos(p), 0, std::sin(p), 0, 1, 0, -std::sin(p), 0, std::cos(p);
        rx << 1, 0, 0, 0, std::cos(r), -std::sin(r), 0, std::sin(r), std::cos(r);
        return rz * ry * rx;
    }

    std::vector<double> random_in(const std::vector<bound> &b, counter_rng &rng)
    {
        std::vector<double> p;
        for (const auto &x : b)
            p.push_back(rng.uniform(x.lower, x.upper));
        return p;
    }

    rigid_subarray grid_2x4()
    {
        rigid_subarray s;
        s.center = vec3(1.0, 1.0, 1.0);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 4; ++c)
                s.offsets.emplace_back(0.0, (c - 1.5) * lambda / 2, (r - 0.5) * lambda / 2);
        return s;
    }

    std::vector<architecture_spec> all_variants()
    {
        const auto box = aperture_region::box(vec3::Zero(), vec3(4, 4, 2) * lambda);
        std::vector<architecture_spec> v;
        auto add = [&](architecture_spec::variant_type a) { v.push_back({std::move(a), lambda}); };
        add(arch::fpa{centered_grid(box, {1, 2, 2}, lambda / 2)});
        add(arch::element_global{4, box, true});
        add(arch::element_local{4, box, {1, 2, 2}, true});
        sliding_subarray s1{aperture_region::segment(vec3::Zero(), vec3(1, 0, 0)), {}, {vec3::Zero(), vec3(0, lambda / 2, 0)}};
        sliding_subarray s2{aperture_region::curve({vec3(0, 1, 0), vec3(1, 1, 0), vec3(1, 2, 1)}), {0.3, 0.1, 0}, {vec3::Zero(), vec3(0, 0, lambda)}};
        add(arch::sliding{{s1, s2}});
        add(arch::rotatable{{grid_2x4()}});
        auto t = grid_2x4();
        t.base = {0.2, -0.1, 0.4};
        add(arch::turnable{{t, grid_2x4()}});
        fold_panel panel{vec3(0, 0, 0), vec3(0, 0, 1), {}, {vec3(0, 0.1, 0), vec3(0, 0.2, 0), vec3(0, 0.2, 0.1)}};
        add(arch::foldable{{panel, panel}});
        auto inner = std::make_shared<const architecture_spec>(architecture_spec{arch::element_global{2, box, false}, lambda});
        add(arch::dual_scale{aperture_region::box(vec3::Constant(-50), vec3::Constant(50)), inner});
        return v;
    }

    // element index ranges of rigid groups for each variant
    std::vector<std::pair<std::size_t, std::size_t>> rigid_groups(const architecture_spec &s, const antenna_layout &l)
    {
        std::vector<std::pair<std::size_t, std::size_t>> g;
        std::size_t start = 0;
        auto push = [&](std::size_t n) {
            g.emplace_back(start, start + n);
            start += n;
        };
        if (auto *a = std::get_if<arch::sliding>(&s.variant))
            for (auto &x : a->subarrays)
                push(x.offsets.size());
        else if (auto *r = std::get_if<arch::rotatable>(&s.variant))
            for (auto &x : r->subarrays)
                push(x.offsets.size());
        else if (auto *t = std::get_if<arch::turnable>(&s.variant))
            for (auto &x : t->subarrays)
                push(x.offsets.size());
        else if (auto *f = std::get_if<arch::foldable>(&s.variant))
            for (auto &x : f->panels)
                push(x.positions.size());
        else if (std::holds_alternative<arch::fpa>(s.variant))
            push(l.elements.size());
        return g;
    }
}

TEST(Rotation, IdentityAtZero)
{
    EXPECT_TRUE(rotation_matrix({}).isApprox(mat3::Identity(), 0.0));
    EXPECT_EQ(rotation_matrix({}), mat3::Identity());
}

TEST(Rotation, QuarterYawTurnsXIntoY)
{
    const vec3 v = rotation_matrix({pi / 2, 0, 0}) * vec3::UnitX();
    EXPECT_NEAR((v - vec3::UnitY()).norm(), 0.0, 1e-12);
}

TEST(Rotation, OrthonormalWithUnitDeterminant)
{
    counter_rng rng(11);
    for (int i = 0; i < 1000; ++i)
    {
        const orientation o{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
        const mat3 r = rotation_matrix(o);
        EXPECT_LE((r * r.transpose() - mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
        EXPECT_LE((r - reference_rotation(o.yaw, o.pitch, o.roll)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Rotation, MatrixRoundTrip)
{
    counter_rng rng(12);
    for (int i = 0; i < 200; ++i)
    {
        const orientation o{rng.uniform(-pi, pi), rng.uniform(-1.5, 1.5), rng.uniform(-pi, pi)};
        const mat3 r = rotation_matrix(o);
        EXPECT_LE((rotation_matrix(orientation_from_matrix(r)) - r).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Region, BoxAndTracks)
{
    const auto b = aperture_region::box(vec3::Zero(), vec3(1, 2, 3));
    EXPECT_TRUE(b.contains(vec3(1, 2, 3)));
    EXPECT_FALSE(b.contains(vec3(1.1, 0, 0)));
    EXPECT_NEAR(b.distance_outside(vec3(1.5, 0, 0)), 0.5, 1e-15);
    EXPECT_THROW(aperture_region::box(vec3(1, 0, 0), vec3(0, 1, 1)), std::invalid_argument);

    const auto c = aperture_region::curve({vec3::Zero(), vec3(1, 0, 0), vec3(1, 1, 0)});
    EXPECT_DOUBLE_EQ(c.length(), 2.0);
    EXPECT_LE((c.point_at(1.5) - vec3(1, 0.5, 0)).norm(), 1e-15);
    EXPECT_LE((c.point_at(5.0) - vec3(1, 1, 0)).norm(), 1e-15);
    EXPECT_TRUE(c.contains(vec3(0.5, 0, 0), 1e-12));
    EXPECT_THROW(aperture_region::curve({vec3::Zero()}), std::invalid_argument);
}

TEST(ParamBounds, Counts)
{
    const auto box = aperture_region::box(vec3::Zero(), vec3::Constant(4 * lambda));
    EXPECT_EQ(dimension({arch::element_global{1, box, false}, lambda}), 3u);
    EXPECT_EQ(dimension({arch::element_global{4, box, true}, lambda}), 24u);
    arch::turnable t;
    t.subarrays.assign(4, grid_2x4());
    EXPECT_EQ(dimension({t, lambda}), 8u);
    EXPECT_EQ(dimension({arch::fpa{}, lambda}), 0u);
}

TEST(ParamBounds, RotationOrderAfterPositions)
{
    const auto box = aperture_region::box(vec3::Zero(), vec3::Constant(4 * lambda));
    const auto b = param_bounds({arch::element_global{2, box, true}, lambda});
    for (int i = 0; i < 6; ++i)
        EXPECT_DOUBLE_EQ(b[i].upper, 4 * lambda);
    EXPECT_DOUBLE_EQ(b[6].lower, -pi);
    EXPECT_DOUBLE_EQ(b[7].upper, pi / 2);
    EXPECT_DOUBLE_EQ(b[8].upper, pi);
}

TEST(Decode, FpaIsTemplate)
{
    const auto box = aperture_region::box(vec3::Zero(), vec3(4, 4, 2) * lambda);
    const auto els = centered_grid(box, {1, 2, 2}, lambda / 2);
    const auto l = decode({arch::fpa{els}, lambda}, {});
    ASSERT_EQ(l.elements.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i)
        EXPECT_EQ(l.elements[i].position, els[i].position);
    EXPECT_NEAR(l.elements[0].position.x(), 2 * lambda, 1e-15);
}

TEST(Decode, WrongLengthThrows)
{
    const auto box = aperture_region::box(vec3::Zero(), vec3::Ones());
    EXPECT_THROW(decode({arch::element_global{2, box, false}, lambda}, std::vector<double>(5)), dimension_mismatch);
}

TEST(Decode, SlidingIsPureTranslation)
{
    sliding_subarray s{aperture_region::segment(vec3::Zero(), vec3(2, 0, 0)), {}, {vec3::Zero(), vec3(lambda / 2, 0, 0)}};
    const std::vector<double> p{1.0};
    const auto l = decode({arch::sliding{{s}}, lambda}, p);
    EXPECT_NEAR(l.elements[0].position.x(), 1.0, 1e-15);
    EXPECT_NEAR(l.elements[1].position.x(), 1.0 + lambda / 2, 1e-15);
}

TEST(Decode, RotatableModeHToModeV)
{
    const auto sub = grid_2x4();
    const architecture_spec spec{arch::rotatable{{sub}}, lambda};
    const std::vector<double> h{0.0}, v{pi / 2};
    const auto mh = decode(spec, h), mv = decode(spec, v);
    // quarter turn about the boresight (+x) axis through the sub-array center
    mat3 rx;
    rx << 1, 0, 0, 0, 0, -1, 0, 1, 0;
    for (std::size_t i = 0; i < mh.elements.size(); ++i)
    {
        const vec3 expect = sub.center + rx * (mh.elements[i].position - sub.center);
        EXPECT_LE((mv.elements[i].position - expect).norm(), 1e-12);
    }
    // Mode H spans y; Mode V spans z
    EXPECT_NEAR(mh.elements[3].position.y() - mh.elements[0].position.y(), 1.5 * lambda, 1e-12);
    EXPECT_NEAR(mv.elements[3].position.z() - mv.elements[0].position.z(), 1.5 * lambda, 1e-12);
}

TEST(Decode, RandomVectorsKeepRigidStructure)
{
    counter_rng rng(2024);
    for (const auto &spec : all_variants())
    {
        const auto b = param_bounds(spec);
        const auto ref = decode(spec, random_in(b, rng));
        for (int trial = 0; trial < 1000; ++trial)
        {
            const auto l = decode(spec, random_in(b, rng));
            ASSERT_EQ(l.elements.size(), ref.elements.size()) << variant_name(spec);
            for (auto [lo, hi] : rigid_groups(spec, l))
                for (std::size_t i = lo; i < hi; ++i)
                    for (std::size_t j = i + 1; j < hi; ++j)
                    {
                        const double d0 = (ref.elements[i].position - ref.elements[j].position).norm();
                        const double d1 = (l.elements[i].position - l.elements[j].position).norm();
                        ASSERT_NEAR(d0, d1, 1e-12) << variant_name(spec);
                    }
            for (const auto &e : l.elements)
                if (e.region >= 0)
                    ASSERT_TRUE(l.regions[e.region].contains(e.position, region_tolerance(l))) << variant_name(spec);
        }
    }
}

TEST(LocalCells, TileTheRegion)
{
    const auto box = aperture_region::box(vec3::Zero(), vec3(4, 4, 2) * lambda);
    const auto cells = local_cells(box, {1, 2, 2});
    ASSERT_EQ(cells.size(), 4u);
    double volume = 0.0;
    for (const auto &c : cells)
    {
        const vec3 e = c.upper() - c.lower();
        volume += e.prod();
        EXPECT_NEAR(e.prod(), box.upper().prod() / 4, 1e-15);
    }
    EXPECT_NEAR(volume, box.upper().prod(), 1e-15);
    // x fastest, then y, then z
    EXPECT_NEAR(cells[1].lower().y(), 2 * lambda, 1e-15);
    EXPECT_NEAR(cells[2].lower().z(), lambda, 1e-15);
    // random points fall in exactly one cell interior
    counter_rng rng(5);
    for (int i = 0; i < 1000; ++i)
    {
        const vec3 p(rng.uniform(0, 0.4), rng.uniform(0, 0.4), rng.uniform(0, 0.2));
        int n = 0;
        for (const auto &c : cells)
            n += c.contains(p);
        EXPECT_EQ(n, 1);
    }
}

TEST(Validate, Spacing)
{
    antenna_layout l;
    l.wavelength = lambda;
    l.min_spacing = lambda / 2;
    l.elements.resize(2);
    l.elements[1].position = vec3(lambda, 0, 0);
    EXPECT_TRUE(validate(l).ok());
    l.elements[1].position = vec3(lambda / 4, 0, 0);
    const auto rep = validate(l);
    ASSERT_EQ(rep.violations.size(), 1u);
    EXPECT_EQ(rep.violations[0].type, violation::kind::spacing);
    EXPECT_EQ(rep.violations[0].first, 0u);
    EXPECT_EQ(rep.violations[0].second, 1u);
    EXPECT_NEAR(rep.violations[0].depth, lambda / 4, 1e-15);
}

TEST(Validate, BoxCornerIsInside)
{
    antenna_layout l;
    l.wavelength = lambda;
    l.regions = {aperture_region::box(vec3::Zero(), vec3::Constant(4 * lambda))};
    l.elements.resize(1);
    l.elements[0].region = 0;
    l.elements[0].position = vec3::Constant(4 * lambda);
    EXPECT_TRUE(validate(l).ok());
    l.elements[0].position.x() += 1e-6;
    EXPECT_FALSE(validate(l).ok());
}

TEST(Repair, RestoresSpacing)
{
    counter_rng rng(8);
    for (int t = 0; t < 100; ++t)
    {
        antenna_layout l;
        l.wavelength = lambda;
        l.min_spacing = lambda / 2;
        l.regions = {aperture_region::box(vec3::Zero(), vec3(4, 4, 2) * lambda)};
        for (int i = 0; i < 4; ++i)
        {
            antenna_element e;
            e.region = 0;
            e.position = vec3(rng.uniform(0.1, 0.2), rng.uniform(0.1, 0.2), rng.uniform(0.05, 0.1));
            l.elements.push_back(e);
        }
        EXPECT_TRUE(validate(repair_spacing(l)).ok());
    }
}

TEST(Quantize, Arithmetic)
{
    antenna_layout l;
    l.wavelength = lambda;
    l.elements.resize(1);
    l.elements[0].position = vec3(0.26 * lambda, 0, 0);
    const auto q = quantize_positions(l, lambda / 6);
    EXPECT_NEAR(q.elements[0].position.x(), 2 * lambda / 6, 1e-15);
}

TEST(Quantize, FixedPointAndIdempotent)
{
    counter_rng rng(4);
    const double pitch = lambda / 6;
    antenna_layout l;
    l.wavelength = lambda;
    for (int i = 0; i < 4; ++i)
    {
        antenna_element e;
        e.position = vec3(rng.uniform(0, 0.4), rng.uniform(0, 0.4), 0.05 * i);
        l.elements.push_back(e);
    }
    const auto q1 = quantize_positions(l, pitch);
    const auto q2 = quantize_positions(q1, pitch);
    for (std::size_t i = 0; i < 4; ++i)
        EXPECT_EQ(q1.elements[i].position, q2.elements[i].position);
}

TEST(Quantize, CollisionThrows)
{
    antenna_layout l;
    l.elements.resize(2);
    l.elements[1].position = vec3(0.001, 0, 0);
    EXPECT_THROW(quantize_positions(l, 0.1), quantization_collision);
}
