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

#ifndef MOVANT_CHANNEL_HPP
#define MOVANT_CHANNEL_HPP

#include "errors.hpp"
#include "geometry.hpp"
#include "patterns.hpp"
#include "rng.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

namespace movant
{
    using cplx = std::complex<double>;
    using channel_matrix = Eigen::MatrixXcd; // K x N, row = user, column = active BS element

    // Path-loss law used when a layout carries a platform offset (dual-scale arrays).
    constexpr double path_loss_exponent = 2.8;
    constexpr double path_loss_reference_m = 100.0;

    // One departure path. The unit direction is derived from the stored angles so that a
    // scenario written with its angles reloads bit-identically.
    struct path_component
    {
        double azimuth_deg = 0.0;
        double elevation_deg = 0.0;
        cplx gain{1.0, 0.0};
        vec3 direction = vec3::UnitX();

        static path_component from_angles(double azimuth_deg, double elevation_deg, cplx gain)
        {
            const double az = azimuth_deg * deg_to_rad, el = elevation_deg * deg_to_rad;
            return {azimuth_deg, elevation_deg, gain,
                    vec3(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el))};
        }
    };

    struct scenario
    {
        double wavelength = 0.1;
        double noise_power = 1.0;
        std::uint64_t seed = 0;
        std::vector<std::vector<path_component>> users;
        std::vector<double> user_distance_m;

        [[nodiscard]] std::size_t user_count() const noexcept { return users.size(); }
    };

    struct scenario_config
    {
        int users = 4;
        int paths = 5;
        double wavelength = 0.1;
        double noise_power = 1.0;
        double azimuth_min_deg = -180.0;
        double azimuth_max_deg = 180.0;
        double elevation_min_deg = -60.0;
        double elevation_max_deg = 60.0;
        double distance_min_m = 50.0;
        double distance_max_m = 150.0;
    };

    inline void check(const scenario_config &cfg)
    {
        if (cfg.users < 1)
            throw config_error("scenario: users must be >= 1");
        if (cfg.paths < 1)
            throw config_error("scenario: paths must be >= 1");
        if (!(cfg.noise_power > 0.0))
            throw config_error("scenario: noise_power must be > 0");
        if (!(cfg.wavelength > 0.0))
            throw config_error("scenario: wavelength must be > 0");
        if (!(cfg.azimuth_min_deg < cfg.azimuth_max_deg) || cfg.azimuth_min_deg < -180.0 || cfg.azimuth_max_deg > 180.0)
            throw config_error("scenario: azimuth sector must satisfy -180 <= min < max <= 180");
        if (!(cfg.elevation_min_deg <= cfg.elevation_max_deg) || cfg.elevation_min_deg < -90.0 ||
            cfg.elevation_max_deg > 90.0)
            throw config_error("scenario: elevation sector must satisfy -90 <= min <= max <= 90");
        if (!(cfg.distance_min_m > 0.0 && cfg.distance_min_m <= cfg.distance_max_m))
            throw config_error("scenario: user distances must satisfy 0 < min <= max");
    }

    // Directions are uniform in area over the configured sphere sector; gains are i.i.d.
    // CN(0, 1/L) so that E|h|^2 = 1 per omni element.
    inline scenario generate_scenario(const scenario_config &cfg, std::uint64_t seed)
    {
        check(cfg);
        scenario s;
        s.wavelength = cfg.wavelength;
        s.noise_power = cfg.noise_power;
        s.seed = seed;
        const counter_rng root = counter_rng(seed).split("scenario");
        const double sigma = std::sqrt(0.5 / cfg.paths);
        const double s_lo = std::sin(cfg.elevation_min_deg * deg_to_rad);
        const double s_hi = std::sin(cfg.elevation_max_deg * deg_to_rad);
        for (int k = 0; k < cfg.users; ++k)
        {
            counter_rng rng = root.split(static_cast<std::uint64_t>(k));
            std::vector<path_component> paths;
            for (int l = 0; l < cfg.paths; ++l)
            {
                const double az = cfg.azimuth_max_deg - (cfg.azimuth_max_deg - cfg.azimuth_min_deg) * rng.uniform();
                const double el = std::asin(std::clamp(s_lo + (s_hi - s_lo) * rng.uniform(), -1.0, 1.0)) * rad_to_deg;
                const double re = sigma * rng.normal();
                const double im = sigma * rng.normal();
                paths.push_back(path_component::from_angles(az, el, {re, im}));
            }
            s.users.push_back(std::move(paths));
            s.user_distance_m.push_back(rng.uniform(cfg.distance_min_m, cfg.distance_max_m));
        }
        return s;
    }

    // Plane-wave field response of element n: sqrt(g_n(u)) * exp(j 2pi/lambda <u, p_n>).
    inline cplx field_response(const antenna_layout &layout, const path_component &path, std::size_t n,
                               const pattern_model &pattern, double wavelength)
    {
        const auto &e = layout.elements.at(n);
        const double phase = 2.0 * std::numbers::pi / wavelength * path.direction.dot(e.position);
        const double amp = pattern.is_omni() ? 1.0 : std::sqrt(pattern.gain(local_angles(e.orient, path.direction)));
        return std::polar(amp, phase);
    }

    // Amplitude factor (d/d_ref)^(-alpha/2) for user k seen from a platform offset; the
    // user sits at distance d_k along its first path direction.
    inline double platform_gain(const scenario &s, std::size_t k, const vec3 &offset)
    {
        const vec3 user = s.user_distance_m.at(k) * s.users[k].front().direction;
        const double d = std::max((user - offset).norm(), 1e-3);
        return std::pow(d / path_loss_reference_m, -0.5 * path_loss_exponent);
    }

    inline channel_matrix build_channel(const antenna_layout &layout, const scenario &s, const pattern_model &pattern)
    {
        const auto report = validate(layout);
        if (!report.ok())
            throw infeasible_layout("build_channel: layout is infeasible\n" + report.describe());
        std::vector<std::size_t> active;
        for (std::size_t n = 0; n < layout.elements.size(); ++n)
            if (layout.elements[n].active)
                active.push_back(n);
        const auto kk = static_cast<Eigen::Index>(s.user_count());
        channel_matrix h = channel_matrix::Zero(kk, static_cast<Eigen::Index>(active.size()));
        for (Eigen::Index k = 0; k < kk; ++k)
        {
            for (const auto &path : s.users[k])
                for (std::size_t c = 0; c < active.size(); ++c)
                    h(k, static_cast<Eigen::Index>(c)) += path.gain * field_response(layout, path, active[c], pattern, s.wavelength);
            if (layout.platform_offset)
                h.row(k) *= platform_gain(s, static_cast<std::size_t>(k), *layout.platform_offset);
        }
        return h;
    }

    // ---- replay dumps -----------------------------------------------------------

    inline nlohmann::json to_json(const scenario &s)
    {
        nlohmann::json users = nlohmann::json::array();
        for (std::size_t k = 0; k < s.users.size(); ++k)
        {
            nlohmann::json paths = nlohmann::json::array();
            for (const auto &p : s.users[k])
                paths.push_back({{"azimuth_deg", p.azimuth_deg},
                                 {"elevation_deg", p.elevation_deg},
                                 {"gain", {p.gain.real(), p.gain.imag()}}});
            users.push_back({{"distance_m", s.user_distance_m[k]}, {"paths", paths}});
        }
        return {{"format", "movant-scenario"}, {"version", 1},          {"wavelength_m", s.wavelength},
                {"noise_power", s.noise_power},  {"seed", s.seed},       {"users", users}};
    }

    inline scenario scenario_from_json(const nlohmann::json &j)
    {
        try
        {
            if (j.at("format").get<std::string>() != "movant-scenario")
                throw parse_error("scenario: unexpected format tag");
            scenario s;
            s.wavelength = j.at("wavelength_m").get<double>();
            s.noise_power = j.at("noise_power").get<double>();
            s.seed = j.at("seed").get<std::uint64_t>();
            for (const auto &u : j.at("users"))
            {
                std::vector<path_component> paths;
                for (const auto &p : u.at("paths"))
                {
                    const auto &g = p.at("gain");
                    paths.push_back(path_component::from_angles(p.at("azimuth_deg").get<double>(),
                                                                 p.at("elevation_deg").get<double>(),
                                                                 {g.at(0).get<double>(), g.at(1).get<double>()}));
                }
                if (paths.empty())
                    throw parse_error("scenario: every user needs at least one path");
                s.users.push_back(std::move(paths));
                s.user_distance_m.push_back(u.at("distance_m").get<double>());
            }
            if (!(s.noise_power > 0.0) || !(s.wavelength > 0.0) || s.users.empty())
                throw parse_error("scenario: invalid wavelength, noise power or user list");
            return s;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw parse_error(std::string("scenario: ") + e.what());
        }
    }

    inline std::string dump_scenario(const scenario &s) { return to_json(s).dump(2) + "\n"; }

    inline scenario load_scenario(const std::string &text)
    {
        try
        {
            return scenario_from_json(nlohmann::json::parse(text));
        }
        catch (const nlohmann::json::exception &e)
        {
            throw parse_error(std::string("scenario: ") + e.what());
        }
    }
}

#endif
