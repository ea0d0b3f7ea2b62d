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

#ifndef MOVANT_PATTERNS_HPP
#define MOVANT_PATTERNS_HPP

#include "errors.hpp"
#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace movant
{
    constexpr double deg_to_rad = std::numbers::pi / 180.0;
    constexpr double rad_to_deg = 180.0 / std::numbers::pi;

    struct local_direction
    {
        double theta_deg = 90.0; // zenith angle in [0, 180]
        double phi_deg = 0.0;    // azimuth in (-180, 180]
    };

    // Spherical angles of a global unit direction in the element frame (R^T u). Local
    // boresight is +x, i.e. (90, 0). At the poles the azimuth is defined as 0.
    inline local_direction local_angles(const orientation &o, const vec3 &u_global)
    {
        const vec3 v = rotation_matrix(o).transpose() * u_global;
        local_direction d;
        d.theta_deg = std::acos(std::clamp(v.z(), -1.0, 1.0)) * rad_to_deg;
        if (v.x() == 0.0 && v.y() == 0.0)
            d.phi_deg = 0.0;
        else
        {
            d.phi_deg = std::atan2(v.y(), v.x()) * rad_to_deg;
            if (d.phi_deg <= -180.0)
                d.phi_deg = 180.0;
        }
        return d;
    }

    namespace pattern
    {
        struct omni
        {
        };

        // Directional element of 3GPP TR 38.901, Table 7.3-1.
        struct dir38901
        {
            double theta_3db = 65.0; // deg
            double phi_3db = 65.0;   // deg
            double sla_v = 30.0;     // dB
            double a_max = 30.0;     // dB
            double g_max = 8.0;      // dBi
        };

        // Gain samples in dBi on a complete rectangular (theta, phi) grid. theta spans
        // exactly [0, 180]; phi lies in (-180, 180] and is interpolated periodically.
        struct tabulated
        {
            std::vector<double> theta_deg;
            std::vector<double> phi_deg;
            std::vector<double> gain_dbi; // row-major [theta][phi]
        };
    }

    class pattern_model
    {
      public:
        using variant_type = std::variant<pattern::omni, pattern::dir38901, pattern::tabulated>;

        pattern_model() = default;

        pattern_model(pattern::omni p) : v_(p) {}

        pattern_model(pattern::dir38901 p) : v_(p)
        {
            if (!(p.theta_3db > 0.0 && p.phi_3db > 0.0))
                throw std::invalid_argument("dir38901: half-power beamwidths must be positive");
            if (!(p.sla_v >= 0.0 && p.a_max >= 0.0))
                throw std::invalid_argument("dir38901: SLA_V and A_max must be non-negative");
        }

        pattern_model(pattern::tabulated p) : v_(std::move(p)) { check_table(std::get<pattern::tabulated>(v_)); }

        [[nodiscard]] const variant_type &variant() const noexcept { return v_; }
        [[nodiscard]] bool is_omni() const noexcept { return std::holds_alternative<pattern::omni>(v_); }

        [[nodiscard]] std::string name() const
        {
            static constexpr const char *names[] = {"omni", "dir38901", "tabulated"};
            return names[v_.index()];
        }

        // Gain in dBi at local angles (degrees).
        [[nodiscard]] double gain_dbi(double theta_deg, double phi_deg) const
        {
            if (!(theta_deg >= 0.0 && theta_deg <= 180.0) || !(phi_deg > -180.0 && phi_deg <= 180.0))
                throw range_error("pattern gain: angles out of range (theta=" + std::to_string(theta_deg) +
                                  ", phi=" + std::to_string(phi_deg) + ")");
            return std::visit(
                [&](const auto &p) -> double {
                    using T = std::decay_t<decltype(p)>;
                    if constexpr (std::is_same_v<T, pattern::omni>)
                        return 0.0;
                    else if constexpr (std::is_same_v<T, pattern::dir38901>)
                    {
                        const double tv = (theta_deg - 90.0) / p.theta_3db;
                        const double th = phi_deg / p.phi_3db;
                        const double a_v = -std::min(12.0 * tv * tv, p.sla_v);
                        const double a_h = -std::min(12.0 * th * th, p.a_max);
                        const double a = -std::min(-(a_v + a_h), p.a_max);
                        return p.g_max + a;
                    }
                    else
                        return interpolate(p, theta_deg, phi_deg);
                },
                v_);
        }

        // Linear power gain.
        [[nodiscard]] double gain(double theta_deg, double phi_deg) const
        {
            if (is_omni())
            {
                (void)gain_dbi(theta_deg, phi_deg); // range check only
                return 1.0;
            }
            return std::pow(10.0, gain_dbi(theta_deg, phi_deg) / 10.0);
        }

        [[nodiscard]] double gain(const local_direction &d) const { return gain(d.theta_deg, d.phi_deg); }

      private:
        static void check_table(const pattern::tabulated &t)
        {
            if (t.theta_deg.size() < 2 || t.phi_deg.empty())
                throw std::invalid_argument("tabulated pattern: grid too small");
            if (t.gain_dbi.size() != t.theta_deg.size() * t.phi_deg.size())
                throw std::invalid_argument("tabulated pattern: gain grid is not rectangular");
            if (!std::is_sorted(t.theta_deg.begin(), t.theta_deg.end()) ||
                std::adjacent_find(t.theta_deg.begin(), t.theta_deg.end()) != t.theta_deg.end())
                throw std::invalid_argument("tabulated pattern: theta grid must be strictly increasing");
            if (!std::is_sorted(t.phi_deg.begin(), t.phi_deg.end()) ||
                std::adjacent_find(t.phi_deg.begin(), t.phi_deg.end()) != t.phi_deg.end())
                throw std::invalid_argument("tabulated pattern: phi grid must be strictly increasing");
            if (t.theta_deg.front() != 0.0 || t.theta_deg.back() != 180.0)
                throw std::invalid_argument("tabulated pattern: theta grid must span [0, 180]");
            if (!(t.phi_deg.front() > -180.0 && t.phi_deg.back() <= 180.0))
                throw std::invalid_argument("tabulated pattern: phi grid must lie in (-180, 180]");
        }

        static double interpolate(const pattern::tabulated &t, double theta, double phi)
        {
            const auto &tg = t.theta_deg;
            const auto &pg = t.phi_deg;
            const std::size_t np = pg.size();

            std::size_t i = static_cast<std::size_t>(std::upper_bound(tg.begin(), tg.end(), theta) - tg.begin());
            i = std::clamp<std::size_t>(i, 1, tg.size() - 1) - 1;
            const double wt = (theta - tg[i]) / (tg[i + 1] - tg[i]);

            // periodic bracket in phi
            std::size_t j0, j1;
            double wp;
            if (np == 1)
            {
                j0 = j1 = 0;
                wp = 0.0;
            }
            else
            {
                auto it = std::upper_bound(pg.begin(), pg.end(), phi);
                if (it == pg.begin() || it == pg.end())
                {
                    // between the last sample and the first one shifted by 360
                    j0 = np - 1;
                    j1 = 0;
                    const double span = pg.front() + 360.0 - pg.back();
                    double off = phi - pg.back();
                    if (off < 0.0)
                        off += 360.0;
                    wp = span > 0.0 ? off / span : 0.0;
                }
                else
                {
                    j1 = static_cast<std::size_t>(it - pg.begin());
                    j0 = j1 - 1;
                    wp = (phi - pg[j0]) / (pg[j1] - pg[j0]);
                }
            }
            auto g = [&](std::size_t a, std::size_t b) { return t.gain_dbi[a * np + b]; };
            const double lo = (1.0 - wp) * g(i, j0) + wp * g(i, j1);
            const double hi = (1.0 - wp) * g(i + 1, j0) + wp * g(i + 1, j1);
            return (1.0 - wt) * lo + wt * hi;
        }

        variant_type v_ = pattern::omni{};
    };

    // Reads "theta_deg,phi_deg,gain_dbi" rows (with that header line). Every
    // (theta, phi) pair of the grid must appear exactly once, in any order.
    inline pattern_model read_pattern_csv(std::istream &in)
    {
        std::string line;
        if (!std::getline(in, line))
            throw parse_error("pattern csv: empty input");
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line != "theta_deg,phi_deg,gain_dbi")
            throw parse_error("pattern csv: expected header theta_deg,phi_deg,gain_dbi");
        std::map<std::pair<double, double>, double> samples;
        std::vector<double> thetas, phis;
        std::size_t lineno = 1;
        while (std::getline(in, line))
        {
            ++lineno;
            if (line.empty() || line == "\r")
                continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            double th, ph, g;
            if (!(ls >> th >> ph >> g))
                throw parse_error("pattern csv: malformed row at line " + std::to_string(lineno));
            if (!samples.emplace(std::make_pair(th, ph), g).second)
                throw parse_error("pattern csv: duplicate sample at line " + std::to_string(lineno));
            thetas.push_back(th);
            phis.push_back(ph);
        }
        auto uniq = [](std::vector<double> v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            return v;
        };
        pattern::tabulated t;
        t.theta_deg = uniq(thetas);
        t.phi_deg = uniq(phis);
        if (samples.size() != t.theta_deg.size() * t.phi_deg.size())
            throw parse_error("pattern csv: grid is not complete and rectangular");
        for (double th : t.theta_deg)
            for (double ph : t.phi_deg)
                t.gain_dbi.push_back(samples.at({th, ph}));
        try
        {
            return pattern_model(std::move(t));
        }
        catch (const std::invalid_argument &e)
        {
            throw parse_error(std::string("pattern csv: ") + e.what());
        }
    }

    inline pattern_model read_pattern_csv(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw parse_error("pattern csv: cannot open " + path);
        return read_pattern_csv(in);
    }
}

#endif
