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

#ifndef MOVANT_GEOMETRY_HPP
#define MOVANT_GEOMETRY_HPP

#include "errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace movant
{
    using vec3 = Eigen::Vector3d;
    using mat3 = Eigen::Matrix3d;

    // Euler angles in radians. The global-from-local rotation is
    // R = Rz(yaw) * Ry(pitch) * Rx(roll), i.e. intrinsic z-y'-x''.
    struct orientation
    {
        double yaw = 0.0;
        double pitch = 0.0;
        double roll = 0.0;

        friend bool operator==(const orientation &, const orientation &) = default;
    };

    // Wraps an angle into (-pi, pi].
    inline double wrap_angle(double a)
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        double w = std::remainder(a, two_pi);
        if (w <= -std::numbers::pi)
            w += two_pi;
        return w;
    }

    inline mat3 rotation_matrix(const orientation &o)
    {
        const double cy = std::cos(o.yaw), sy = std::sin(o.yaw);
        const double cp = std::cos(o.pitch), sp = std::sin(o.pitch);
        const double cr = std::cos(o.roll), sr = std::sin(o.roll);
        mat3 r;
        r << cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
            sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
            -sp, cp * sr, cp * cr;
        return r;
    }

    // Inverse of rotation_matrix. At gimbal lock (|pitch| = pi/2) roll is set to 0.
    inline orientation orientation_from_matrix(const mat3 &r)
    {
        orientation o;
        const double sp = std::clamp(-r(2, 0), -1.0, 1.0);
        o.pitch = std::asin(sp);
        if (std::hypot(r(0, 0), r(1, 0)) > 1e-12)
        {
            o.yaw = std::atan2(r(1, 0), r(0, 0));
            o.roll = std::atan2(r(2, 1), r(2, 2));
        }
        else
        {
            o.yaw = std::atan2(-r(0, 1), r(1, 1));
            o.roll = 0.0;
        }
        o.yaw = wrap_angle(o.yaw);
        o.roll = wrap_angle(o.roll);
        return o;
    }

    // Closed region an antenna (or a sub-array reference point) may occupy.
    // Segments and curves are stored as polylines and parameterized by arc length.
    class aperture_region
    {
      public:
        enum class kind
        {
            box,
            segment,
            curve
        };

        static aperture_region box(const vec3 &lower, const vec3 &upper)
        {
            if ((upper.array() < lower.array()).any())
                throw std::invalid_argument("aperture_region::box: upper corner below lower corner");
            aperture_region r;
            r.kind_ = kind::box;
            r.knots_ = {lower, upper};
            return r;
        }

        static aperture_region segment(const vec3 &a, const vec3 &b)
        {
            aperture_region r;
            r.kind_ = kind::segment;
            r.knots_ = {a, b};
            return r;
        }

        static aperture_region curve(std::vector<vec3> knots)
        {
            if (knots.size() < 2)
                throw std::invalid_argument("aperture_region::curve: a polyline needs at least 2 knots");
            aperture_region r;
            r.kind_ = kind::curve;
            r.knots_ = std::move(knots);
            return r;
        }

        [[nodiscard]] kind type() const noexcept { return kind_; }
        [[nodiscard]] bool is_track() const noexcept { return kind_ != kind::box; }
        [[nodiscard]] const std::vector<vec3> &knots() const noexcept { return knots_; }

        [[nodiscard]] vec3 lower() const
        {
            vec3 lo = knots_.front();
            for (const auto &k : knots_)
                lo = lo.cwiseMin(k);
            return lo;
        }

        [[nodiscard]] vec3 upper() const
        {
            vec3 hi = knots_.front();
            for (const auto &k : knots_)
                hi = hi.cwiseMax(k);
            return hi;
        }

        [[nodiscard]] double length() const
        {
            if (kind_ == kind::box)
                return 0.0;
            double len = 0.0;
            for (std::size_t i = 1; i < knots_.size(); ++i)
                len += (knots_[i] - knots_[i - 1]).norm();
            return len;
        }

        // Point at arc length s along a track, clamped to [0, length()].
        [[nodiscard]] vec3 point_at(double s) const
        {
            if (kind_ == kind::box)
                throw std::logic_error("aperture_region::point_at: box regions have no arc length");
            if (s <= 0.0)
                return knots_.front();
            for (std::size_t i = 1; i < knots_.size(); ++i)
            {
                const vec3 d = knots_[i] - knots_[i - 1];
                const double seg = d.norm();
                if (s <= seg && seg > 0.0)
                    return knots_[i - 1] + (s / seg) * d;
                s -= seg;
            }
            return knots_.back();
        }

        [[nodiscard]] double distance_outside(const vec3 &p) const
        {
            if (kind_ == kind::box)
            {
                const vec3 lo = knots_[0], hi = knots_[1];
                const vec3 clamped = p.cwiseMax(lo).cwiseMin(hi);
                return (p - clamped).norm();
            }
            return (p - nearest(p)).norm();
        }

        [[nodiscard]] bool contains(const vec3 &p, double tol = 0.0) const { return distance_outside(p) <= tol; }

        // Nearest point of the region.
        [[nodiscard]] vec3 nearest(const vec3 &p) const
        {
            if (kind_ == kind::box)
                return p.cwiseMax(knots_[0]).cwiseMin(knots_[1]);
            vec3 best = knots_.front();
            double best_d = (p - best).squaredNorm();
            for (std::size_t i = 1; i < knots_.size(); ++i)
            {
                const vec3 a = knots_[i - 1], d = knots_[i] - a;
                const double dd = d.squaredNorm();
                const double t = dd > 0.0 ? std::clamp((p - a).dot(d) / dd, 0.0, 1.0) : 0.0;
                const vec3 q = a + t * d;
                const double qd = (p - q).squaredNorm();
                if (qd < best_d)
                {
                    best_d = qd;
                    best = q;
                }
            }
            return best;
        }

        [[nodiscard]] aperture_region translated(const vec3 &t) const
        {
            aperture_region r = *this;
            for (auto &k : r.knots_)
                k += t;
            return r;
        }

      private:
        aperture_region() = default;

        kind kind_ = kind::box;
        std::vector<vec3> knots_;
    };

    struct antenna_element
    {
        vec3 position = vec3::Zero();
        orientation orient;
        bool active = true;
        int region = -1; // index into antenna_layout::regions, -1 if unconstrained
    };

    struct antenna_layout
    {
        std::vector<antenna_element> elements;
        double wavelength = 1.0;
        double min_spacing = 0.5; // d_min in meters, decode sets wavelength / 2
        std::vector<aperture_region> regions;
        std::optional<vec3> platform_offset; // set by dual-scale architectures

        [[nodiscard]] std::size_t active_count() const
        {
            return static_cast<std::size_t>(std::count_if(elements.begin(), elements.end(),
                                                          [](const antenna_element &e) { return e.active; }));
        }
    };

    // ---- architectures ---------------------------------------------------------------

    // Rigid group of elements. Offsets are expressed in the sub-array frame, whose
    // orientation in the global frame is `base`; boresight is the frame's +x axis.
    struct rigid_subarray
    {
        vec3 center = vec3::Zero();
        orientation base;
        std::vector<vec3> offsets;
    };

    struct sliding_subarray
    {
        aperture_region track = aperture_region::segment(vec3::Zero(), vec3::UnitX());
        orientation base;
        std::vector<vec3> offsets;
    };

    // Panel of elements (global coordinates in the unfolded state) that folds about
    // the line through hinge_point along hinge_axis.
    struct fold_panel
    {
        vec3 hinge_point = vec3::Zero();
        vec3 hinge_axis = vec3::UnitZ();
        orientation base;
        std::vector<vec3> positions;
    };

    struct architecture_spec;

    namespace arch
    {
        struct fpa
        {
            std::vector<antenna_element> elements;
        };

        struct element_global
        {
            std::size_t count = 4;
            aperture_region region = aperture_region::box(vec3::Zero(), vec3::Ones());
            bool rotation_enabled = false;
        };

        struct element_local
        {
            std::size_t count = 4;
            aperture_region region = aperture_region::box(vec3::Zero(), vec3::Ones());
            std::array<int, 3> cells{1, 2, 2};
            bool rotation_enabled = false;
        };

        struct sliding
        {
            std::vector<sliding_subarray> subarrays;
        };

        struct rotatable
        {
            std::vector<rigid_subarray> subarrays;
            double max_roll = std::numbers::pi;
        };

        struct turnable
        {
            std::vector<rigid_subarray> subarrays;
            double max_yaw = std::numbers::pi / 2;
            double max_pitch = std::numbers::pi / 2;
        };

        struct foldable
        {
            std::vector<fold_panel> panels;
            double max_fold = std::numbers::pi / 2;
            bool deactivate_folded = false;
        };

        struct dual_scale
        {
            aperture_region platform = aperture_region::box(vec3::Constant(-50.0), vec3::Constant(50.0));
            std::shared_ptr<const architecture_spec> inner;
        };
    }

    struct architecture_spec
    {
        using variant_type = std::variant<arch::fpa, arch::element_global, arch::element_local, arch::sliding,
                                          arch::rotatable, arch::turnable, arch::foldable, arch::dual_scale>;

        variant_type variant;
        double wavelength = 1.0;
    };

    struct bound
    {
        double lower = 0.0;
        double upper = 1.0;
    };

    inline std::string variant_name(const architecture_spec &spec)
    {
        static constexpr std::array<const char *, 8> names{"fpa",       "element_global", "element_local",
                                                           "sliding",   "rotatable",      "turnable",
                                                           "foldable",  "dual_scale"};
        return names[spec.variant.index()];
    }

    // Equal-volume axis-aligned cells tiling a box; cell index runs x fastest, then y, then z.
    inline std::vector<aperture_region> local_cells(const aperture_region &region, const std::array<int, 3> &grid)
    {
        if (region.type() != aperture_region::kind::box)
            throw std::invalid_argument("local_cells: region must be a box");
        if (grid[0] < 1 || grid[1] < 1 || grid[2] < 1)
            throw std::invalid_argument("local_cells: grid counts must be positive");
        const vec3 lo = region.lower(), hi = region.upper();
        const vec3 step = (hi - lo).cwiseQuotient(vec3(grid[0], grid[1], grid[2]));
        std::vector<aperture_region> cells;
        for (int iz = 0; iz < grid[2]; ++iz)
            for (int iy = 0; iy < grid[1]; ++iy)
                for (int ix = 0; ix < grid[0]; ++ix)
                {
                    const vec3 idx(ix, iy, iz);
                    vec3 c_lo = lo + idx.cwiseProduct(step);
                    vec3 c_hi = lo + (idx + vec3::Ones()).cwiseProduct(step);
                    // shared faces are bit-identical with the neighbor and the outer faces with the region
                    for (int d = 0; d < 3; ++d)
                        if ((d == 0 ? ix : d == 1 ? iy : iz) + 1 == grid[d])
                            c_hi[d] = hi[d];
                    cells.push_back(aperture_region::box(c_lo, c_hi));
                }
        return cells;
    }

    // Uniform rectangular grid of identity-oriented elements centered in `region`, one
    // per local cell when the same grid is used (requires spacing < cell width).
    inline std::vector<antenna_element> centered_grid(const aperture_region &region, const std::array<int, 3> &grid,
                                                      double spacing)
    {
        const vec3 center = 0.5 * (region.lower() + region.upper());
        std::vector<antenna_element> out;
        for (int iz = 0; iz < grid[2]; ++iz)
            for (int iy = 0; iy < grid[1]; ++iy)
                for (int ix = 0; ix < grid[0]; ++ix)
                {
                    antenna_element e;
                    e.position = center + spacing * vec3(ix - 0.5 * (grid[0] - 1), iy - 0.5 * (grid[1] - 1),
                                                         iz - 0.5 * (grid[2] - 1));
                    out.push_back(e);
                }
        return out;
    }

    namespace detail
    {
        inline void push_box_bounds(std::vector<bound> &b, const aperture_region &r)
        {
            const vec3 lo = r.lower(), hi = r.upper();
            for (int d = 0; d < 3; ++d)
                b.push_back({lo[d], hi[d]});
        }

        inline void push_rotation_bounds(std::vector<bound> &b, std::size_t count)
        {
            for (std::size_t i = 0; i < count; ++i)
            {
                b.push_back({-std::numbers::pi, std::numbers::pi});
                b.push_back({-std::numbers::pi / 2, std::numbers::pi / 2});
                b.push_back({-std::numbers::pi, std::numbers::pi});
            }
        }
    }

    // Parameter layout per variant (this order is also the CSV column order of traces):
    //   element_*   : x,y,z for every element, then yaw,pitch,roll for every element if rotation is enabled
    //   sliding     : arc length per sub-array
    //   rotatable   : roll per sub-array
    //   turnable    : yaw,pitch per sub-array
    //   foldable    : fold angle per panel
    //   dual_scale  : platform x,y,z followed by the inner architecture's parameters
    inline std::vector<bound> param_bounds(const architecture_spec &spec)
    {
        std::vector<bound> b;
        std::visit(
            [&](const auto &a) {
                using T = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<T, arch::fpa>)
                {
                }
                else if constexpr (std::is_same_v<T, arch::element_global>)
                {
                    for (std::size_t i = 0; i < a.count; ++i)
                        detail::push_box_bounds(b, a.region);
                    if (a.rotation_enabled)
                        detail::push_rotation_bounds(b, a.count);
                }
                else if constexpr (std::is_same_v<T, arch::element_local>)
                {
                    const auto cells = local_cells(a.region, a.cells);
                    if (cells.size() != a.count)
                        throw std::invalid_argument("element_local: cell grid does not match the element count");
                    for (const auto &c : cells)
                        detail::push_box_bounds(b, c);
                    if (a.rotation_enabled)
                        detail::push_rotation_bounds(b, a.count);
                }
                else if constexpr (std::is_same_v<T, arch::sliding>)
                {
                    for (const auto &s : a.subarrays)
                        b.push_back({0.0, s.track.length()});
                }
                else if constexpr (std::is_same_v<T, arch::rotatable>)
                {
                    for (std::size_t i = 0; i < a.subarrays.size(); ++i)
                        b.push_back({-a.max_roll, a.max_roll});
                }
                else if constexpr (std::is_same_v<T, arch::turnable>)
                {
                    for (std::size_t i = 0; i < a.subarrays.size(); ++i)
                    {
                        b.push_back({-a.max_yaw, a.max_yaw});
                        b.push_back({-a.max_pitch, a.max_pitch});
                    }
                }
                else if constexpr (std::is_same_v<T, arch::foldable>)
                {
                    for (std::size_t i = 0; i < a.panels.size(); ++i)
                        b.push_back({0.0, a.max_fold});
                }
                else if constexpr (std::is_same_v<T, arch::dual_scale>)
                {
                    if (!a.inner)
                        throw std::invalid_argument("dual_scale: missing inner architecture");
                    detail::push_box_bounds(b, a.platform);
                    const auto inner = param_bounds(*a.inner);
                    b.insert(b.end(), inner.begin(), inner.end());
                }
            },
            spec.variant);
        for (const auto &x : b)
            if (!(std::isfinite(x.lower) && std::isfinite(x.upper) && x.lower < x.upper))
                throw std::invalid_argument("param_bounds: degenerate or non-finite bound in " + variant_name(spec));
        return b;
    }

    inline std::size_t dimension(const architecture_spec &spec) { return param_bounds(spec).size(); }

    namespace detail
    {
        inline void append_rigid(antenna_layout &out, const vec3 &center, const mat3 &r, const std::vector<vec3> &offsets)
        {
            const orientation o = orientation_from_matrix(r);
            for (const auto &off : offsets)
            {
                antenna_element e;
                e.position = center + r * off;
                e.orient = o;
                out.elements.push_back(e);
            }
        }

        inline antenna_layout decode_unchecked(const architecture_spec &spec, std::span<const double> p)
        {
            antenna_layout out;
            out.wavelength = spec.wavelength;
            out.min_spacing = 0.5 * spec.wavelength;
            std::visit(
                [&](const auto &a) {
                    using T = std::decay_t<decltype(a)>;
                    if constexpr (std::is_same_v<T, arch::fpa>)
                    {
                        out.elements = a.elements;
                    }
                    else if constexpr (std::is_same_v<T, arch::element_global> || std::is_same_v<T, arch::element_local>)
                    {
                        if constexpr (std::is_same_v<T, arch::element_global>)
                            out.regions = {a.region};
                        else
                            out.regions = local_cells(a.region, a.cells);
                        const std::size_t n = a.count;
                        for (std::size_t i = 0; i < n; ++i)
                        {
                            antenna_element e;
                            e.position = vec3(p[3 * i], p[3 * i + 1], p[3 * i + 2]);
                            if (a.rotation_enabled)
                            {
                                const std::size_t k = 3 * n + 3 * i;
                                e.orient = {p[k], p[k + 1], p[k + 2]};
                            }
                            e.region = std::is_same_v<T, arch::element_global> ? 0 : static_cast<int>(i);
                            out.elements.push_back(e);
                        }
                    }
                    else if constexpr (std::is_same_v<T, arch::sliding>)
                    {
                        for (std::size_t i = 0; i < a.subarrays.size(); ++i)
                        {
                            const auto &s = a.subarrays[i];
                            append_rigid(out, s.track.point_at(p[i]), rotation_matrix(s.base), s.offsets);
                        }
                    }
                    else if constexpr (std::is_same_v<T, arch::rotatable>)
                    {
                        for (std::size_t i = 0; i < a.subarrays.size(); ++i)
                        {
                            const auto &s = a.subarrays[i];
                            const mat3 r = rotation_matrix(s.base) * rotation_matrix({0.0, 0.0, p[i]});
                            append_rigid(out, s.center, r, s.offsets);
                        }
                    }
                    else if constexpr (std::is_same_v<T, arch::turnable>)
                    {
                        for (std::size_t i = 0; i < a.subarrays.size(); ++i)
                        {
                            const auto &s = a.subarrays[i];
                            const mat3 r = rotation_matrix(s.base) * rotation_matrix({p[2 * i], p[2 * i + 1], 0.0});
                            append_rigid(out, s.center, r, s.offsets);
                        }
                    }
                    else if constexpr (std::is_same_v<T, arch::foldable>)
                    {
                        for (std::size_t i = 0; i < a.panels.size(); ++i)
                        {
                            const auto &panel = a.panels[i];
                            const mat3 fold = Eigen::AngleAxisd(p[i], panel.hinge_axis.normalized()).toRotationMatrix();
                            const orientation o = orientation_from_matrix(fold * rotation_matrix(panel.base));
                            const bool folded_away = a.deactivate_folded && p[i] >= a.max_fold - 1e-12;
                            for (const auto &pos : panel.positions)
                            {
                                antenna_element e;
                                e.position = panel.hinge_point + fold * (pos - panel.hinge_point);
                                e.orient = o;
                                e.active = !folded_away;
                                out.elements.push_back(e);
                            }
                        }
                    }
                    else if constexpr (std::is_same_v<T, arch::dual_scale>)
                    {
                        const vec3 offset(p[0], p[1], p[2]);
                        antenna_layout inner = decode_unchecked(*a.inner, p.subspan(3));
                        for (auto &e : inner.elements)
                            e.position += offset;
                        for (auto &r : inner.regions)
                            r = r.translated(offset);
                        inner.platform_offset = offset;
                        out = std::move(inner);
                        out.wavelength = spec.wavelength;
                        out.min_spacing = 0.5 * spec.wavelength;
                    }
                },
                spec.variant);
            return out;
        }
    }

    inline antenna_layout decode(const architecture_spec &spec, std::span<const double> params)
    {
        const std::size_t dim = dimension(spec);
        if (params.size() != dim)
            throw dimension_mismatch("decode(" + variant_name(spec) + "): expected " + std::to_string(dim) +
                                     " parameters, got " + std::to_string(params.size()));
        return detail::decode_unchecked(spec, params);
    }

    // ---- feasibility ----------------------------------------------------------------

    struct violation
    {
        enum class kind
        {
            spacing,
            outside_region
        };

        kind type = kind::spacing;
        std::size_t first = 0;
        std::size_t second = 0; // equals `first` for region violations
        double depth = 0.0;     // meters below d_min, or meters outside the region
    };

    struct feasibility_report
    {
        std::vector<violation> violations;

        [[nodiscard]] bool ok() const noexcept { return violations.empty(); }

        // Summed spacing deficit in meters.
        [[nodiscard]] double spacing_depth() const noexcept
        {
            double d = 0.0;
            for (const auto &v : violations)
                if (v.type == violation::kind::spacing)
                    d += v.depth;
            return d;
        }

        [[nodiscard]] std::string describe() const
        {
            std::ostringstream os;
            for (const auto &v : violations)
            {
                if (v.type == violation::kind::spacing)
                    os << "elements " << v.first << " and " << v.second << " closer than d_min by " << v.depth
                       << " m\n";
                else
                    os << "element " << v.first << " outside its region by " << v.depth << " m\n";
            }
            return os.str();
        }
    };

    inline double region_tolerance(const antenna_layout &layout) { return 1e-9 * layout.wavelength; }

    inline feasibility_report validate(const antenna_layout &layout)
    {
        feasibility_report rep;
        const auto &el = layout.elements;
        for (std::size_t i = 0; i < el.size(); ++i)
        {
            if (!el[i].active)
                continue;
            for (std::size_t j = i + 1; j < el.size(); ++j)
            {
                if (!el[j].active)
                    continue;
                const double d = (el[i].position - el[j].position).norm();
                if (d < layout.min_spacing * (1.0 - 1e-12))
                    rep.violations.push_back({violation::kind::spacing, i, j, layout.min_spacing - d});
            }
        }
        const double tol = region_tolerance(layout);
        for (std::size_t i = 0; i < el.size(); ++i)
        {
            if (el[i].region < 0)
                continue;
            if (static_cast<std::size_t>(el[i].region) >= layout.regions.size())
            {
                rep.violations.push_back({violation::kind::outside_region, i, i, INFINITY});
                continue;
            }
            const double out = layout.regions[el[i].region].distance_outside(el[i].position);
            if (out > tol)
                rep.violations.push_back({violation::kind::outside_region, i, i, out});
        }
        return rep;
    }

    // Deterministic pairwise separation repair: sweeps the active pairs in index order and
    // pushes each too-close pair apart symmetrically along its separation axis (just
    // enough to reach d_min), then clamps back into the element's region. Stops when a
    // sweep changes nothing or after max_sweeps. The result may still be infeasible when
    // the regions are too small to hold the elements.
    inline antenna_layout repair_spacing(antenna_layout layout, int max_sweeps = 200)
    {
        auto &el = layout.elements;
        const double target = layout.min_spacing * (1.0 + 1e-9);
        for (int sweep = 0; sweep < max_sweeps; ++sweep)
        {
            bool changed = false;
            for (std::size_t i = 0; i < el.size(); ++i)
                for (std::size_t j = i + 1; j < el.size(); ++j)
                {
                    if (!el[i].active || !el[j].active)
                        continue;
                    vec3 delta = el[j].position - el[i].position;
                    const double d = delta.norm();
                    if (d >= layout.min_spacing * (1.0 - 1e-12))
                        continue;
                    const vec3 axis = d > 1e-15 * layout.wavelength ? vec3(delta / d) : vec3::UnitY();
                    const double push = 0.5 * (target - d);
                    el[i].position -= push * axis;
                    el[j].position += push * axis;
                    for (auto *e : {&el[i], &el[j]})
                        if (e->region >= 0 && static_cast<std::size_t>(e->region) < layout.regions.size())
                            e->position = layout.regions[e->region].nearest(e->position);
                    changed = true;
                }
            if (!changed)
                break;
        }
        return layout;
    }

    // Snaps every position to the nearest multiple of `pitch` measured from the lower
    // corner of the element's region (the origin for unconstrained elements).
    inline antenna_layout quantize_positions(antenna_layout layout, double pitch)
    {
        if (!(pitch > 0.0))
            throw std::invalid_argument("quantize_positions: pitch must be positive");
        for (auto &e : layout.elements)
        {
            vec3 ref = vec3::Zero();
            if (e.region >= 0 && static_cast<std::size_t>(e.region) < layout.regions.size())
                ref = layout.regions[e.region].lower();
            for (int d = 0; d < 3; ++d)
                e.position[d] = ref[d] + std::round((e.position[d] - ref[d]) / pitch) * pitch;
        }
        const auto &el = layout.elements;
        for (std::size_t i = 0; i < el.size(); ++i)
            for (std::size_t j = i + 1; j < el.size(); ++j)
                if (el[i].active && el[j].active && (el[i].position - el[j].position).norm() < 1e-9 * pitch)
                    throw quantization_collision("quantize_positions: elements " + std::to_string(i) + " and " +
                                                 std::to_string(j) + " snap to the same grid point");
        return layout;
    }
}

#endif
