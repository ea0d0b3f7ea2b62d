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

#ifndef MOVANT_HARNESS_HPP
#define MOVANT_HARNESS_HPP

#include "channel.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "optimizer.hpp"
#include "patterns.hpp"
#include "phasecenter.hpp"
#include "precoding.hpp"
#include "sum_rate_objective.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#ifndef MOVANT_VERSION
#define MOVANT_VERSION "0.1.0"
#endif

namespace movant
{
    enum class experiment_kind
    {
        sumrate_sweep,
        phase_center_study,
        quantization_study
    };

    inline std::string to_string(experiment_kind k)
    {
        switch (k)
        {
        case experiment_kind::sumrate_sweep: return "sumrate_sweep";
        case experiment_kind::phase_center_study: return "phase_center_study";
        case experiment_kind::quantization_study: return "quantization_study";
        }
        return "?";
    }

    // Built-in element-level schemes share one array setup; `custom` schemes carry
    // their own architecture.
    enum class scheme_kind
    {
        fpa,
        local,
        global,
        custom
    };

    struct scheme_spec
    {
        std::string id;
        scheme_kind kind = scheme_kind::fpa;
        std::string pattern = "omni";
        bool rotation = false;
        std::optional<architecture_spec> custom;
    };

    struct array_setup
    {
        int elements = 4;
        std::array<double, 3> region_wl{4.0, 4.0, 2.0};
        std::array<int, 3> local_grid{1, 2, 2};
        double fpa_spacing_wl = 0.5;
    };

    struct optimizer_config
    {
        std::string method = "bo"; // bo | random
        std::size_t budget = 150;  // per optimization stage; move+rotate runs two stages
        bo_options bo;
    };

    struct phase_center_config
    {
        std::vector<double> setups_dpc_wl{0.8, 1.2};
        calibration_options calibration;
    };

    struct experiment_config
    {
        experiment_kind kind = experiment_kind::sumrate_sweep;
        std::string output_dir = "results";
        std::vector<std::uint64_t> seeds;
        std::vector<double> snr_db;
        double reference_snr_db = 5.0;
        scenario_config scenario;
        array_setup array;
        std::map<std::string, pattern_model> patterns;
        optimizer_config optimizer;
        std::vector<scheme_spec> schemes;
        phase_center_config phase_center;
        double quantization_pitch_wl = 1.0 / 6.0;
        bool write_traces = false;
        bool write_scenarios = true;
        int threads = 1;
        std::string source_path;
        std::string source_text;
    };

    // ---- config parsing -------------------------------------------------------------

    namespace detail
    {
        class config_reader
        {
          public:
            explicit config_reader(std::string source) : source_(std::move(source)) {}

            [[noreturn]] void fail(const std::string &field, const std::string &what) const
            {
                throw config_error(source_ + ": " + field + ": " + what);
            }

            template <typename T>
            T get(const nlohmann::json &j, const std::string &key, const std::string &path, T fallback) const
            {
                if (!j.contains(key))
                    return fallback;
                return as<T>(j.at(key), path + "." + key);
            }

            template <typename T>
            T require(const nlohmann::json &j, const std::string &key, const std::string &path) const
            {
                if (!j.is_object() || !j.contains(key))
                    fail(path + "." + key, "missing required field");
                return as<T>(j.at(key), path + "." + key);
            }

            template <typename T>
            T as(const nlohmann::json &j, const std::string &path) const
            {
                try
                {
                    return j.get<T>();
                }
                catch (const nlohmann::json::exception &)
                {
                    fail(path, "wrong type (" + std::string(j.type_name()) + ")");
                }
            }

            vec3 vector3(const nlohmann::json &j, const std::string &path, double scale = 1.0) const
            {
                if (!j.is_array() || j.size() != 3)
                    fail(path, "expected an array of 3 numbers");
                return scale * vec3(as<double>(j[0], path + "[0]"), as<double>(j[1], path + "[1]"),
                                    as<double>(j[2], path + "[2]"));
            }

            orientation angles(const nlohmann::json &j, const std::string &key, const std::string &path) const
            {
                if (!j.contains(key))
                    return {};
                const vec3 v = vector3(j.at(key), path + "." + key, deg_to_rad);
                return {v[0], v[1], v[2]};
            }

            std::vector<vec3> vectors(const nlohmann::json &j, const std::string &path, double scale) const
            {
                if (!j.is_array())
                    fail(path, "expected an array of 3-vectors");
                std::vector<vec3> out;
                for (std::size_t i = 0; i < j.size(); ++i)
                    out.push_back(vector3(j[i], path + "[" + std::to_string(i) + "]", scale));
                return out;
            }

            aperture_region region(const nlohmann::json &j, const std::string &path, double scale) const
            {
                try
                {
                    if (j.contains("box"))
                    {
                        const auto c = vectors(j.at("box"), path + ".box", scale);
                        if (c.size() != 2)
                            fail(path + ".box", "expected [lower, upper]");
                        return aperture_region::box(c[0], c[1]);
                    }
                    if (j.contains("segment"))
                    {
                        const auto c = vectors(j.at("segment"), path + ".segment", scale);
                        if (c.size() != 2)
                            fail(path + ".segment", "expected [start, end]");
                        return aperture_region::segment(c[0], c[1]);
                    }
                    if (j.contains("curve"))
                        return aperture_region::curve(vectors(j.at("curve"), path + ".curve", scale));
                }
                catch (const std::invalid_argument &e)
                {
                    fail(path, e.what());
                }
                fail(path, "expected one of box, segment, curve");
            }

            architecture_spec architecture(const nlohmann::json &j, const std::string &path, double wavelength) const
            {
                if (!j.is_object())
                    fail(path, "expected an architecture object");
                const auto variant = require<std::string>(j, "variant", path);
                const double w = wavelength;
                architecture_spec spec;
                spec.wavelength = wavelength;
                auto rigid = [&](const nlohmann::json &arr, const std::string &p) {
                    std::vector<rigid_subarray> subs;
                    if (!arr.is_array() || arr.empty())
                        fail(p, "expected a non-empty array of sub-arrays");
                    for (std::size_t i = 0; i < arr.size(); ++i)
                    {
                        const std::string sp = p + "[" + std::to_string(i) + "]";
                        rigid_subarray s;
                        s.center = vector3(arr[i].at("center"), sp + ".center", w);
                        s.base = angles(arr[i], "orientation_deg", sp);
                        s.offsets = vectors(arr[i].at("offsets"), sp + ".offsets", w);
                        subs.push_back(std::move(s));
                    }
                    return subs;
                };
                if (variant == "fpa")
                {
                    arch::fpa a;
                    const auto &els = j.at("elements");
                    for (std::size_t i = 0; i < els.size(); ++i)
                    {
                        const std::string ep = path + ".elements[" + std::to_string(i) + "]";
                        antenna_element e;
                        e.position = vector3(els[i].at("position"), ep + ".position", w);
                        e.orient = angles(els[i], "orientation_deg", ep);
                        a.elements.push_back(e);
                    }
                    spec.variant = a;
                }
                else if (variant == "element_global")
                {
                    arch::element_global a;
                    a.count = require<std::size_t>(j, "count", path);
                    a.region = region(j.at("region"), path + ".region", w);
                    a.rotation_enabled = get<bool>(j, "rotation", path, false);
                    spec.variant = a;
                }
                else if (variant == "element_local")
                {
                    arch::element_local a;
                    a.count = require<std::size_t>(j, "count", path);
                    a.region = region(j.at("region"), path + ".region", w);
                    a.cells = require<std::array<int, 3>>(j, "grid", path);
                    a.rotation_enabled = get<bool>(j, "rotation", path, false);
                    spec.variant = a;
                }
                else if (variant == "sliding")
                {
                    arch::sliding a;
                    const auto &subs = j.at("subarrays");
                    for (std::size_t i = 0; i < subs.size(); ++i)
                    {
                        const std::string sp = path + ".subarrays[" + std::to_string(i) + "]";
                        sliding_subarray s;
                        s.track = region(subs[i].at("track"), sp + ".track", w);
                        if (!s.track.is_track())
                            fail(sp + ".track", "a sliding track must be a segment or curve");
                        s.base = angles(subs[i], "orientation_deg", sp);
                        s.offsets = vectors(subs[i].at("offsets"), sp + ".offsets", w);
                        a.subarrays.push_back(std::move(s));
                    }
                    spec.variant = a;
                }
                else if (variant == "rotatable")
                {
                    arch::rotatable a;
                    a.subarrays = rigid(j.at("subarrays"), path + ".subarrays");
                    a.max_roll = get<double>(j, "max_roll_deg", path, 180.0) * deg_to_rad;
                    spec.variant = a;
                }
                else if (variant == "turnable")
                {
                    arch::turnable a;
                    a.subarrays = rigid(j.at("subarrays"), path + ".subarrays");
                    a.max_yaw = get<double>(j, "max_yaw_deg", path, 90.0) * deg_to_rad;
                    a.max_pitch = get<double>(j, "max_pitch_deg", path, 90.0) * deg_to_rad;
                    spec.variant = a;
                }
                else if (variant == "foldable")
                {
                    arch::foldable a;
                    const auto &panels = j.at("panels");
                    for (std::size_t i = 0; i < panels.size(); ++i)
                    {
                        const std::string pp = path + ".panels[" + std::to_string(i) + "]";
                        fold_panel p;
                        p.hinge_point = vector3(panels[i].at("hinge_point"), pp + ".hinge_point", w);
                        p.hinge_axis = vector3(panels[i].at("hinge_axis"), pp + ".hinge_axis");
                        if (p.hinge_axis.norm() == 0.0)
                            fail(pp + ".hinge_axis", "hinge axis must be non-zero");
                        p.base = angles(panels[i], "orientation_deg", pp);
                        p.positions = vectors(panels[i].at("positions"), pp + ".positions", w);
                        a.panels.push_back(std::move(p));
                    }
                    a.max_fold = get<double>(j, "max_fold_deg", path, 90.0) * deg_to_rad;
                    a.deactivate_folded = get<bool>(j, "deactivate_folded", path, false);
                    spec.variant = a;
                }
                else if (variant == "dual_scale")
                {
                    arch::dual_scale a;
                    if (j.contains("platform_m"))
                        a.platform = region(j.at("platform_m"), path + ".platform_m", 1.0);
                    a.inner = std::make_shared<const architecture_spec>(architecture(j.at("inner"), path + ".inner", w));
                    spec.variant = a;
                }
                else
                    fail(path + ".variant", "unknown architecture variant '" + variant + "'");
                try
                {
                    (void)param_bounds(spec);
                }
                catch (const std::invalid_argument &e)
                {
                    fail(path, e.what());
                }
                return spec;
            }

            pattern_model pattern(const nlohmann::json &j, const std::string &path, const std::filesystem::path &base) const
            {
                const auto type = require<std::string>(j, "type", path);
                try
                {
                    if (type == "omni")
                        return pattern::omni{};
                    if (type == "dir38901")
                    {
                        pattern::dir38901 p;
                        p.theta_3db = get<double>(j, "theta_3db_deg", path, p.theta_3db);
                        p.phi_3db = get<double>(j, "phi_3db_deg", path, p.phi_3db);
                        p.sla_v = get<double>(j, "sla_v_db", path, p.sla_v);
                        p.a_max = get<double>(j, "a_max_db", path, p.a_max);
                        p.g_max = get<double>(j, "g_max_dbi", path, p.g_max);
                        return p;
                    }
                    if (type == "tabulated")
                    {
                        std::filesystem::path file = require<std::string>(j, "file", path);
                        if (file.is_relative())
                            file = base / file;
                        return read_pattern_csv(file.string());
                    }
                }
                catch (const config_error &)
                {
                    throw;
                }
                catch (const std::exception &e)
                {
                    fail(path, e.what());
                }
                fail(path + ".type", "unknown pattern type '" + type + "'");
            }

          private:
            std::string source_;
        };

        inline std::uint64_t fnv1a(const std::string &s)
        {
            std::uint64_t h = 0xcbf29ce484222325ULL;
            for (unsigned char c : s)
            {
                h ^= c;
                h *= 0x100000001b3ULL;
            }
            return h;
        }
    }

    inline experiment_config parse_config(const std::string &text, const std::string &source = "<config>")
    {
        detail::config_reader rd(source);
        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(text);
        }
        catch (const nlohmann::json::exception &e)
        {
            throw config_error(source + ": not valid JSON: " + e.what());
        }
        if (!j.is_object())
            rd.fail("<root>", "expected an object");

        experiment_config c;
        c.source_path = source;
        c.source_text = text;
        const std::filesystem::path base = std::filesystem::path(source).parent_path();

        const auto kind = rd.require<std::string>(j, "experiment", "");
        if (kind == "sumrate_sweep")
            c.kind = experiment_kind::sumrate_sweep;
        else if (kind == "phase_center_study")
            c.kind = experiment_kind::phase_center_study;
        else if (kind == "quantization_study")
            c.kind = experiment_kind::quantization_study;
        else
            rd.fail("experiment", "unknown experiment kind '" + kind + "'");

        c.output_dir = rd.get<std::string>(j, "output_dir", "", c.output_dir);
        c.write_traces = rd.get<bool>(j, "write_traces", "", c.write_traces);
        c.write_scenarios = rd.get<bool>(j, "write_scenarios", "", c.write_scenarios);
        c.threads = rd.get<int>(j, "threads", "", c.threads);
        if (c.threads < 1)
            rd.fail("threads", "must be >= 1");

        if (j.contains("seeds"))
        {
            const auto &s = j.at("seeds");
            if (s.is_object())
            {
                const auto first = rd.require<std::uint64_t>(s, "first", "seeds");
                const auto count = rd.require<std::uint64_t>(s, "count", "seeds");
                for (std::uint64_t i = 0; i < count; ++i)
                    c.seeds.push_back(first + i);
            }
            else
                c.seeds = rd.as<std::vector<std::uint64_t>>(s, "seeds");
        }

        if (j.contains("snr_db"))
        {
            const auto &s = j.at("snr_db");
            if (s.is_object())
            {
                const double start = rd.require<double>(s, "start", "snr_db");
                const double stop = rd.require<double>(s, "stop", "snr_db");
                const double step = rd.require<double>(s, "step", "snr_db");
                if (!(step > 0.0) || stop < start)
                    rd.fail("snr_db", "need step > 0 and stop >= start");
                for (int i = 0; start + i * step <= stop + 1e-9; ++i)
                    c.snr_db.push_back(start + i * step);
            }
            else
                c.snr_db = rd.as<std::vector<double>>(s, "snr_db");
        }
        if (!c.snr_db.empty())
            c.reference_snr_db = rd.get<double>(j, "reference_snr_db", "", c.snr_db[c.snr_db.size() / 2]);

        if (j.contains("scenario"))
        {
            const auto &s = j.at("scenario");
            auto &sc = c.scenario;
            sc.users = rd.get<int>(s, "users", "scenario", sc.users);
            sc.paths = rd.get<int>(s, "paths", "scenario", sc.paths);
            sc.wavelength = rd.get<double>(s, "wavelength_m", "scenario", sc.wavelength);
            sc.noise_power = rd.get<double>(s, "noise_power", "scenario", sc.noise_power);
            auto range = [&](const char *key, double &lo, double &hi) {
                if (!s.contains(key))
                    return;
                const auto r = rd.as<std::array<double, 2>>(s.at(key), std::string("scenario.") + key);
                lo = r[0];
                hi = r[1];
            };
            range("azimuth_deg", sc.azimuth_min_deg, sc.azimuth_max_deg);
            range("elevation_deg", sc.elevation_min_deg, sc.elevation_max_deg);
            range("user_distance_m", sc.distance_min_m, sc.distance_max_m);
        }
        try
        {
            check(c.scenario);
        }
        catch (const config_error &e)
        {
            rd.fail("scenario", e.what());
        }

        if (j.contains("array"))
        {
            const auto &a = j.at("array");
            c.array.elements = rd.get<int>(a, "elements", "array", c.array.elements);
            c.array.region_wl = rd.get<std::array<double, 3>>(a, "region_wavelengths", "array", c.array.region_wl);
            c.array.local_grid = rd.get<std::array<int, 3>>(a, "local_grid", "array", c.array.local_grid);
            c.array.fpa_spacing_wl = rd.get<double>(a, "fpa_spacing_wavelengths", "array", c.array.fpa_spacing_wl);
        }
        {
            const auto &g = c.array.local_grid;
            if (g[0] < 1 || g[1] < 1 || g[2] < 1 || g[0] * g[1] * g[2] != c.array.elements)
                rd.fail("array.local_grid", "cell counts must be positive and multiply to array.elements");
            for (double e : c.array.region_wl)
                if (!(e > 0.0))
                    rd.fail("array.region_wavelengths", "extents must be positive");
            if (!(c.array.fpa_spacing_wl > 0.0))
                rd.fail("array.fpa_spacing_wavelengths", "must be positive");
        }

        c.patterns["omni"] = pattern::omni{};
        c.patterns["directional"] = pattern::dir38901{};
        if (j.contains("patterns"))
            for (const auto &[name, pj] : j.at("patterns").items())
                c.patterns[name] = rd.pattern(pj, "patterns." + name, base);

        if (j.contains("optimizer"))
        {
            const auto &o = j.at("optimizer");
            auto &oc = c.optimizer;
            oc.method = rd.get<std::string>(o, "method", "optimizer", oc.method);
            if (oc.method != "bo" && oc.method != "random")
                rd.fail("optimizer.method", "expected 'bo' or 'random'");
            oc.budget = rd.get<std::size_t>(o, "budget", "optimizer", oc.budget);
            if (oc.budget < 1)
                rd.fail("optimizer.budget", "must be >= 1");
            oc.bo.candidates = rd.get<int>(o, "candidates", "optimizer", oc.bo.candidates);
            oc.bo.refit_every = rd.get<std::size_t>(o, "refit_every", "optimizer", oc.bo.refit_every);
            oc.bo.gp_restarts = rd.get<int>(o, "gp_restarts", "optimizer", oc.bo.gp_restarts);
            oc.bo.gp_max_iterations = rd.get<int>(o, "gp_max_iterations", "optimizer", oc.bo.gp_max_iterations);
            oc.bo.init = rd.get<std::size_t>(o, "init", "optimizer", oc.bo.init);
            if (oc.bo.candidates < 1 || oc.bo.refit_every < 1 || oc.bo.gp_restarts < 1)
                rd.fail("optimizer", "candidates, refit_every and gp_restarts must be >= 1");
        }

        if (j.contains("schemes"))
        {
            const auto &arr = j.at("schemes");
            if (!arr.is_array())
                rd.fail("schemes", "expected an array");
            for (std::size_t i = 0; i < arr.size(); ++i)
            {
                const std::string p = "schemes[" + std::to_string(i) + "]";
                const auto &s = arr[i];
                scheme_spec sc;
                sc.id = rd.require<std::string>(s, "id", p);
                sc.pattern = rd.get<std::string>(s, "pattern", p, "omni");
                sc.rotation = rd.get<bool>(s, "rotation", p, false);
                if (!c.patterns.contains(sc.pattern))
                    rd.fail(p + ".pattern", "unknown pattern '" + sc.pattern + "'");
                if (!s.contains("architecture"))
                    rd.fail(p + ".architecture", "missing required field");
                const auto &a = s.at("architecture");
                if (a.is_string())
                {
                    const auto name = a.get<std::string>();
                    if (name == "fpa")
                        sc.kind = scheme_kind::fpa;
                    else if (name == "local")
                        sc.kind = scheme_kind::local;
                    else if (name == "global")
                        sc.kind = scheme_kind::global;
                    else
                        rd.fail(p + ".architecture", "unknown built-in architecture '" + name +
                                                         "' (expected fpa, local, global or an object)");
                    if (sc.kind == scheme_kind::fpa && sc.rotation)
                        rd.fail(p + ".rotation", "the fixed-position array cannot rotate");
                }
                else
                {
                    sc.kind = scheme_kind::custom;
                    sc.custom = rd.architecture(a, p + ".architecture", c.scenario.wavelength);
                }
                for (const auto &prev : c.schemes)
                    if (prev.id == sc.id)
                        rd.fail(p + ".id", "duplicate scheme id '" + sc.id + "'");
                c.schemes.push_back(std::move(sc));
            }
        }

        if (j.contains("phase_center"))
        {
            const auto &pc = j.at("phase_center");
            auto &o = c.phase_center;
            o.setups_dpc_wl = rd.get<std::vector<double>>(pc, "setups_dpc_wavelengths", "phase_center", o.setups_dpc_wl);
            o.calibration.physical_spacing_wl = rd.get<double>(pc, "physical_spacing_wavelengths", "phase_center",
                                                               o.calibration.physical_spacing_wl);
            o.calibration.half_window_deg = rd.get<double>(pc, "half_window_deg", "phase_center", o.calibration.half_window_deg);
            o.calibration.step_deg = rd.get<double>(pc, "step_deg", "phase_center", o.calibration.step_deg);
            const double eps = rd.get<double>(pc, "substrate_permittivity", "phase_center", default_substrate_permittivity);
            if (!(eps >= 1.0))
                rd.fail("phase_center.substrate_permittivity", "must be >= 1");
            o.calibration.tm11_radius_wl = resonant_radius(patch_mode::tm11, eps);
            o.calibration.tm21_radius_wl = resonant_radius(patch_mode::tm21, eps);
            if (!(o.calibration.half_window_deg > 0.0 && o.calibration.half_window_deg <= 90.0))
                rd.fail("phase_center.half_window_deg", "must be in (0, 90]");
            if (!(o.calibration.step_deg > 0.0) || 2.0 * o.calibration.half_window_deg / o.calibration.step_deg < 20.0)
                rd.fail("phase_center.step_deg", "window must hold at least 21 samples");
            if (o.setups_dpc_wl.empty())
                rd.fail("phase_center.setups_dpc_wavelengths", "must not be empty");
        }

        if (j.contains("quantization"))
        {
            const auto &q = j.at("quantization");
            c.quantization_pitch_wl = rd.get<double>(q, "pitch_wavelengths", "quantization", c.quantization_pitch_wl);
            if (!(c.quantization_pitch_wl > 0.0))
                rd.fail("quantization.pitch_wavelengths", "must be positive");
        }

        if (c.kind != experiment_kind::phase_center_study)
        {
            if (c.schemes.empty())
                rd.fail("schemes", "must not be empty");
            if (c.seeds.empty())
                rd.fail("seeds", "must not be empty");
            if (c.snr_db.empty())
                rd.fail("snr_db", "must not be empty");
        }
        return c;
    }

    inline experiment_config load_config(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw config_error(path + ": cannot open config file");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_config(ss.str(), path);
    }

    inline std::string config_hash(const experiment_config &c)
    {
        std::ostringstream os;
        os << std::hex << std::setw(16) << std::setfill('0') << detail::fnv1a(c.source_text);
        return os.str();
    }

    // ---- sum-rate sweep -------------------------------------------------------------

    struct result_row
    {
        std::string scheme;
        std::string pattern;
        bool rotation = false;
        double snr_db = 0.0;
        std::uint64_t seed = 0;
        double sum_rate = 0.0;
        std::size_t evaluations = 0;
        double wall_ms = 0.0;
    };

    struct cell_result
    {
        std::size_t scheme = 0;
        std::uint64_t seed = 0;
        std::vector<double> params;
        antenna_layout layout;
        double reference_score = 0.0;
        std::size_t evaluations = 0;
        double wall_ms = 0.0;
        std::vector<opt_result> stages;
        std::string error;
    };

    struct sweep_result
    {
        std::vector<result_row> rows;   // canonical order: scheme, snr, seed
        std::vector<cell_result> cells; // scheme-major, seed-minor
        std::vector<scenario> scenarios;
        bool complete = true;

        [[nodiscard]] const cell_result &cell(std::size_t scheme, std::size_t seed_index) const
        {
            return cells.at(scheme * scenarios.size() + seed_index);
        }
    };

    inline architecture_spec builtin_architecture(const experiment_config &c, scheme_kind kind, bool rotation)
    {
        const double w = c.scenario.wavelength;
        const auto region = aperture_region::box(
            vec3::Zero(), w * vec3(c.array.region_wl[0], c.array.region_wl[1], c.array.region_wl[2]));
        architecture_spec spec;
        spec.wavelength = w;
        const auto n = static_cast<std::size_t>(c.array.elements);
        switch (kind)
        {
        case scheme_kind::fpa:
            spec.variant = arch::fpa{centered_grid(region, c.array.local_grid, c.array.fpa_spacing_wl * w)};
            break;
        case scheme_kind::local: spec.variant = arch::element_local{n, region, c.array.local_grid, rotation}; break;
        case scheme_kind::global: spec.variant = arch::element_global{n, region, rotation}; break;
        case scheme_kind::custom: throw std::logic_error("builtin_architecture: custom scheme");
        }
        return spec;
    }

    namespace detail
    {
        struct stage_outcome
        {
            std::vector<double> params; // full parameter vector of the scheme's architecture
            double score = -std::numeric_limits<double>::infinity();
            std::size_t evaluations = 0;
            double wall_ms = 0.0;
            std::vector<opt_result> stages;
        };

        inline opt_result optimize(const experiment_config &c, const objective &obj, std::uint64_t seed,
                                   std::vector<std::vector<double>> warm)
        {
            if (c.optimizer.method == "random")
            {
                // warm starts still bound the result from below
                detail::recorder rec(obj, seed);
                for (auto &w : warm)
                    rec.evaluate(w);
                opt_result r = random_search(obj, c.optimizer.budget - std::min(warm.size(), c.optimizer.budget), seed);
                opt_result head = rec.finish();
                for (auto &t : r.trace)
                {
                    t.index += head.trace.size();
                    if (t.score > head.best_score)
                    {
                        head.best_score = t.score;
                        head.best_params = t.params;
                    }
                    t.best_so_far = head.best_score;
                    head.trace.push_back(t);
                }
                head.evaluations = head.trace.size();
                head.wall_ms += r.wall_ms;
                return head;
            }
            bo_options o = c.optimizer.bo;
            o.warm_starts = std::move(warm);
            return bo_run(obj, c.optimizer.budget, seed, o);
        }

        // Memoized per-(seed, pattern) chain of built-in schemes:
        //   local move   <- warm {fpa}
        //   global move  <- warm {fpa, local move}
        //   X move+rot   =  X move, then rotations optimized with positions pinned
        //   global move+rot pins the better of {global move, local move+rot}.
        class builtin_chain
        {
          public:
            builtin_chain(const experiment_config &c, const scenario &s, const pattern_model &p, std::uint64_t seed)
                : cfg_(c), scen_(s), pattern_(p), seed_(seed), snr_(db_to_linear(c.reference_snr_db))
            {
            }

            stage_outcome fpa()
            {
                stage_outcome o;
                o.score = layout_sum_rate(decode(builtin_architecture(cfg_, scheme_kind::fpa, false), {}), scen_,
                                          pattern_, snr_);
                return o;
            }

            std::vector<double> fpa_positions() const
            {
                std::vector<double> p;
                for (const auto &e : decode(builtin_architecture(cfg_, scheme_kind::fpa, false), {}).elements)
                    p.insert(p.end(), {e.position.x(), e.position.y(), e.position.z()});
                return p;
            }

            const stage_outcome &move(scheme_kind k)
            {
                auto &slot = k == scheme_kind::local ? local_move_ : global_move_;
                if (slot)
                    return *slot;
                std::vector<std::vector<double>> warm{fpa_positions()};
                if (k == scheme_kind::global)
                    warm.push_back(move(scheme_kind::local).params);
                const auto obj = objective_for(k, false);
                const std::uint64_t s = counter_rng(seed_).split(k == scheme_kind::local ? "local-move" : "global-move").key();
                opt_result r = optimize(cfg_, obj, s, std::move(warm));
                stage_outcome o;
                o.params = r.best_params;
                o.score = r.best_score;
                o.evaluations = r.evaluations;
                o.wall_ms = r.wall_ms;
                o.stages.push_back(std::move(r));
                slot = std::move(o);
                return *slot;
            }

            const stage_outcome &rotate(scheme_kind k)
            {
                auto &slot = k == scheme_kind::local ? local_rot_ : global_rot_;
                if (slot)
                    return *slot;
                const stage_outcome &base = move(k);
                const std::size_t n = static_cast<std::size_t>(cfg_.array.elements);
                std::vector<double> positions = base.params;
                std::vector<double> warm_rot(3 * n, 0.0);
                if (k == scheme_kind::global)
                {
                    const stage_outcome &lr = rotate(scheme_kind::local);
                    if (lr.score > base.score)
                    {
                        positions.assign(lr.params.begin(), lr.params.begin() + 3 * n);
                        warm_rot.assign(lr.params.begin() + 3 * n, lr.params.end());
                    }
                }
                const auto full = objective_for(k, true);
                std::vector<std::optional<double>> pinned(6 * n);
                for (std::size_t i = 0; i < 3 * n; ++i)
                    pinned[i] = positions[i];
                const objective sub = restrict_objective(full, pinned);
                const std::uint64_t s = counter_rng(seed_).split(k == scheme_kind::local ? "local-rotate" : "global-rotate").key();
                opt_result r = optimize(cfg_, sub, s, {warm_rot});
                stage_outcome o;
                o.params = expand_params(pinned, r.best_params);
                o.score = r.best_score;
                o.evaluations = base.evaluations + r.evaluations;
                o.wall_ms = base.wall_ms + r.wall_ms;
                o.stages = base.stages;
                o.stages.push_back(std::move(r));
                slot = std::move(o);
                return *slot;
            }

            [[nodiscard]] objective objective_for(scheme_kind k, bool rotation) const
            {
                auto problem = std::make_shared<sum_rate_problem>(
                    sum_rate_problem{builtin_architecture(cfg_, k, rotation), scen_, pattern_, snr_});
                return make_sum_rate_objective(problem);
            }

          private:
            const experiment_config &cfg_;
            const scenario &scen_;
            const pattern_model &pattern_;
            std::uint64_t seed_;
            double snr_;
            std::optional<stage_outcome> local_move_, global_move_, local_rot_, global_rot_;
        };

        // Layout used for reporting: the decoded best parameters, separation-repaired if
        // the optimizer's best point was a penalized one.
        inline antenna_layout reported_layout(const architecture_spec &spec, const std::vector<double> &params)
        {
            antenna_layout l = decode(spec, params);
            if (!validate(l).ok())
                l = repair_spacing(l);
            return l;
        }

        inline double reported_rate(const antenna_layout &l, const scenario &s, const pattern_model &p, double snr_db)
        {
            if (!validate(l).ok())
                return 0.0;
            const double r = layout_sum_rate(l, s, p, db_to_linear(snr_db));
            return std::isfinite(r) ? r : 0.0;
        }

        template <typename F>
        void parallel_for(std::size_t count, int threads, F &&fn)
        {
            const auto workers = static_cast<std::size_t>(std::max(1, threads));
            if (workers == 1 || count <= 1)
            {
                for (std::size_t i = 0; i < count; ++i)
                    fn(i);
                return;
            }
            std::atomic<std::size_t> next{0};
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < std::min(workers, count); ++w)
                pool.emplace_back([&] {
                    for (std::size_t i = next++; i < count; i = next++)
                        fn(i);
                });
        }
    }

    inline architecture_spec scheme_architecture(const experiment_config &c, const scheme_spec &s)
    {
        return s.kind == scheme_kind::custom ? *s.custom : builtin_architecture(c, s.kind, s.rotation);
    }

    // Optimizes every (scheme, seed) cell at the reference SNR, then evaluates each
    // optimized layout over the whole SNR grid. Cells sharing a seed and pattern reuse
    // each other's results as warm starts (see builtin_chain).
    inline sweep_result run_sweep(const experiment_config &c)
    {
        sweep_result out;
        const std::size_t ns = c.seeds.size(), nsch = c.schemes.size();
        for (auto seed : c.seeds)
            out.scenarios.push_back(generate_scenario(c.scenario, seed));
        out.cells.resize(nsch * ns);

        // tasks: one per (seed, pattern) for built-ins, one per (seed, custom scheme)
        struct task
        {
            std::size_t seed_index;
            std::string pattern;
            std::vector<std::size_t> schemes;
        };
        std::vector<task> tasks;
        for (std::size_t si = 0; si < ns; ++si)
        {
            std::map<std::string, std::vector<std::size_t>> by_pattern;
            for (std::size_t k = 0; k < nsch; ++k)
            {
                if (c.schemes[k].kind == scheme_kind::custom)
                    tasks.push_back({si, c.schemes[k].pattern, {k}});
                else
                    by_pattern[c.schemes[k].pattern].push_back(k);
            }
            for (auto &[pat, list] : by_pattern)
                tasks.push_back({si, pat, list});
        }

        detail::parallel_for(tasks.size(), c.threads, [&](std::size_t t) {
            const task &tk = tasks[t];
            const std::uint64_t seed = c.seeds[tk.seed_index];
            const scenario &scen = out.scenarios[tk.seed_index];
            const pattern_model &pat = c.patterns.at(tk.pattern);
            detail::builtin_chain chain(c, scen, pat, seed);
            for (std::size_t k : tk.schemes)
            {
                const scheme_spec &sc = c.schemes[k];
                cell_result &cell = out.cells[k * ns + tk.seed_index];
                cell.scheme = k;
                cell.seed = seed;
                try
                {
                    const architecture_spec spec = scheme_architecture(c, sc);
                    detail::stage_outcome o;
                    switch (sc.kind)
                    {
                    case scheme_kind::fpa: o = chain.fpa(); break;
                    case scheme_kind::local:
                    case scheme_kind::global: o = sc.rotation ? chain.rotate(sc.kind) : chain.move(sc.kind); break;
                    case scheme_kind::custom: {
                        auto problem = std::make_shared<sum_rate_problem>(
                            sum_rate_problem{spec, scen, pat, db_to_linear(c.reference_snr_db)});
                        const std::uint64_t s = counter_rng(seed).split("custom:" + sc.id).key();
                        opt_result r = detail::optimize(c, make_sum_rate_objective(problem), s, {});
                        o.params = r.best_params;
                        o.score = r.best_score;
                        o.evaluations = r.evaluations;
                        o.wall_ms = r.wall_ms;
                        o.stages.push_back(std::move(r));
                        break;
                    }
                    }
                    cell.params = o.params;
                    cell.reference_score = o.score;
                    cell.evaluations = o.evaluations;
                    cell.wall_ms = o.wall_ms;
                    cell.stages = std::move(o.stages);
                    cell.layout = detail::reported_layout(spec, cell.params);
                }
                catch (const std::exception &e)
                {
                    cell.error = e.what();
                }
            }
        });

        for (std::size_t k = 0; k < nsch; ++k)
        {
            const scheme_spec &sc = c.schemes[k];
            for (double snr : c.snr_db)
                for (std::size_t si = 0; si < ns; ++si)
                {
                    const cell_result &cell = out.cells[k * ns + si];
                    if (!cell.error.empty())
                    {
                        out.complete = false;
                        continue;
                    }
                    result_row r;
                    r.scheme = sc.id;
                    r.pattern = sc.pattern;
                    r.rotation = sc.rotation;
                    r.snr_db = snr;
                    r.seed = c.seeds[si];
                    r.sum_rate = detail::reported_rate(cell.layout, out.scenarios[si], c.patterns.at(sc.pattern), snr);
                    r.evaluations = cell.evaluations;
                    r.wall_ms = cell.wall_ms;
                    out.rows.push_back(r);
                }
        }
        return out;
    }

    // ---- quantization -----------------------------------------------------------------

    struct quantization_row
    {
        std::string scheme;
        std::string pattern;
        std::uint64_t seed = 0;
        double continuous = 0.0;
        double quantized = 0.0;
        std::string note;

        [[nodiscard]] double ratio() const { return continuous > 0.0 ? quantized / continuous : 0.0; }
    };

    // Snaps the optimized layouts to a dense grid of `pitch_wl` wavelengths. Grid
    // neighbors are valid dense-array elements, so the spacing floor becomes the pitch.
    inline std::vector<quantization_row> quantize_sweep(const experiment_config &c, const sweep_result &sweep)
    {
        std::vector<quantization_row> rows;
        const double pitch = c.quantization_pitch_wl * c.scenario.wavelength;
        for (std::size_t k = 0; k < c.schemes.size(); ++k)
        {
            const auto &sc = c.schemes[k];
            if (sc.kind == scheme_kind::fpa)
                continue;
            for (std::size_t si = 0; si < c.seeds.size(); ++si)
            {
                const cell_result &cell = sweep.cell(k, si);
                if (!cell.error.empty())
                    continue;
                quantization_row q;
                q.scheme = sc.id;
                q.pattern = sc.pattern;
                q.seed = c.seeds[si];
                const auto &pat = c.patterns.at(sc.pattern);
                q.continuous = detail::reported_rate(cell.layout, sweep.scenarios[si], pat, c.reference_snr_db);
                try
                {
                    antenna_layout ql = quantize_positions(cell.layout, pitch);
                    ql.min_spacing = std::min(ql.min_spacing, pitch);
                    q.quantized = detail::reported_rate(ql, sweep.scenarios[si], pat, c.reference_snr_db);
                }
                catch (const quantization_collision &e)
                {
                    q.quantized = 0.0;
                    q.note = "collision";
                }
                rows.push_back(q);
            }
        }
        return rows;
    }

    // ---- CSV io -----------------------------------------------------------------------

    inline const char *results_header = "scheme,pattern,rotation,snr_db,seed,sum_rate_bps_hz,evaluations,wall_ms";

    inline void write_results_csv(std::ostream &os, const std::vector<result_row> &rows)
    {
        os << results_header << "\n";
        for (const auto &r : rows)
            os << r.scheme << "," << r.pattern << "," << (r.rotation ? 1 : 0) << "," << format_real(r.snr_db) << ","
               << r.seed << "," << format_real(r.sum_rate) << "," << r.evaluations << "," << format_real(r.wall_ms)
               << "\n";
    }

    inline std::vector<result_row> read_results_csv(std::istream &in)
    {
        std::string line;
        if (!std::getline(in, line) || line.rfind(results_header, 0) != 0)
            throw parse_error("results csv: unexpected header");
        std::vector<result_row> rows;
        std::size_t lineno = 1;
        while (std::getline(in, line))
        {
            ++lineno;
            if (line.empty())
                continue;
            std::vector<std::string> f;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ','))
                f.push_back(cell);
            if (f.size() != 8)
                throw parse_error("results csv: expected 8 columns at line " + std::to_string(lineno));
            try
            {
                result_row r;
                r.scheme = f[0];
                r.pattern = f[1];
                r.rotation = f[2] == "1";
                r.snr_db = std::stod(f[3]);
                r.seed = std::stoull(f[4]);
                r.sum_rate = std::stod(f[5]);
                r.evaluations = std::stoull(f[6]);
                r.wall_ms = std::stod(f[7]);
                rows.push_back(r);
            }
            catch (const std::exception &)
            {
                throw parse_error("results csv: malformed number at line " + std::to_string(lineno));
            }
        }
        return rows;
    }

    struct summary_row
    {
        std::string scheme;
        std::string pattern;
        bool rotation = false;
        double snr_db = 0.0;
        std::size_t seeds = 0;
        double mean = 0.0;
        double stderr_ = 0.0;
        std::optional<double> ratio_to_fpa;
    };

    // Mean and standard error over seeds per (scheme, snr), plus the ratio of each mean
    // to the fixed-position scheme with the same pattern (or any fixed-position scheme).
    // A scheme counts as fixed-position when its evaluation count is zero.
    inline std::vector<summary_row> summarize(const std::vector<result_row> &rows)
    {
        std::vector<summary_row> out;
        std::map<std::pair<std::string, double>, std::vector<double>> groups;
        std::vector<std::pair<std::string, double>> order;
        std::map<std::string, const result_row *> first;
        for (const auto &r : rows)
        {
            const auto key = std::make_pair(r.scheme, r.snr_db);
            if (!groups.contains(key))
                order.push_back(key);
            groups[key].push_back(r.sum_rate);
            first.try_emplace(r.scheme, &r);
        }
        std::map<std::pair<std::string, double>, double> fpa_mean_by_pattern;
        std::map<double, double> fpa_mean_any;
        for (const auto &key : order)
        {
            const auto &v = groups[key];
            summary_row s;
            s.scheme = key.first;
            s.snr_db = key.second;
            s.pattern = first[key.first]->pattern;
            s.rotation = first[key.first]->rotation;
            s.seeds = v.size();
            s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
            if (v.size() > 1)
            {
                double ss = 0.0;
                for (double x : v)
                    ss += (x - s.mean) * (x - s.mean);
                s.stderr_ = std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
            }
            if (first[key.first]->evaluations == 0)
            {
                fpa_mean_by_pattern.try_emplace({s.pattern, s.snr_db}, s.mean);
                fpa_mean_any.try_emplace(s.snr_db, s.mean);
            }
            out.push_back(s);
        }
        for (auto &s : out)
        {
            double ref = 0.0;
            if (auto it = fpa_mean_by_pattern.find({s.pattern, s.snr_db}); it != fpa_mean_by_pattern.end())
                ref = it->second;
            else if (auto it2 = fpa_mean_any.find(s.snr_db); it2 != fpa_mean_any.end())
                ref = it2->second;
            if (ref > 0.0)
                s.ratio_to_fpa = s.mean / ref;
        }
        return out;
    }

    inline void write_summary_csv(std::ostream &os, const std::vector<summary_row> &rows)
    {
        os << "scheme,pattern,rotation,snr_db,seeds,mean_sum_rate_bps_hz,stderr_bps_hz,ratio_to_fpa\n";
        for (const auto &s : rows)
            os << s.scheme << "," << s.pattern << "," << (s.rotation ? 1 : 0) << "," << format_real(s.snr_db) << ","
               << s.seeds << "," << format_real(s.mean) << "," << format_real(s.stderr_) << ","
               << (s.ratio_to_fpa ? format_real(*s.ratio_to_fpa) : std::string()) << "\n";
    }

    // ---- run ------------------------------------------------------------------------

    // Reference point for the headline ratio: a 220% gain over fixed-position arrays is
    // the published omni-directional movable-array result (ratio 3.2).
    constexpr double published_omni_gain_pct = 220.0;

    struct run_report
    {
        bool complete = true;
        std::vector<std::string> files;
        std::string message;
    };

    namespace detail
    {
        inline void write_text(const std::filesystem::path &p, const std::string &text)
        {
            std::filesystem::create_directories(p.parent_path());
            std::ofstream f(p, std::ios::binary);
            if (!f)
                throw std::runtime_error("cannot write " + p.string());
            f << text;
        }

        inline nlohmann::json manifest(const experiment_config &c, bool complete, const nlohmann::json &cells,
                                       const std::vector<std::string> &files)
        {
            return {{"config", c.source_path},
                    {"config_hash", config_hash(c)},
                    {"code_version", MOVANT_VERSION},
                    {"experiment", to_string(c.kind)},
                    {"seeds", c.seeds},
                    {"complete", complete},
                    {"cells", cells},
                    {"files", files}};
        }

        inline std::string headline(const experiment_config &c, const std::vector<summary_row> &summary)
        {
            std::ostringstream os;
            os << "reference_snr_db," << format_real(c.reference_snr_db) << "\n";
            for (const auto &s : summary)
                if (s.snr_db == c.reference_snr_db && s.ratio_to_fpa)
                    os << "ratio_to_fpa," << s.scheme << "," << format_real(*s.ratio_to_fpa) << ",gain_pct,"
                       << format_real(100.0 * (*s.ratio_to_fpa - 1.0)) << "\n";
            os << "published_omni_gain_pct," << format_real(published_omni_gain_pct) << "\n";
            return os.str();
        }
    }

    inline run_report run_experiment(const experiment_config &c)
    {
        namespace fs = std::filesystem;
        const fs::path dir = c.output_dir;
        fs::create_directories(dir);
        run_report rep;
        const auto manifest_path = dir / "manifest.json";
        detail::write_text(manifest_path, detail::manifest(c, false, nlohmann::json::array(), {}).dump(2) + "\n");

        if (c.kind == experiment_kind::phase_center_study)
        {
            std::ostringstream report;
            report << "target_dpc_wl,achieved_dpc_wl,mode_ratio,rms_db,correlation\n";
            nlohmann::json cells = nlohmann::json::array();
            for (double dpc : c.phase_center.setups_dpc_wl)
            {
                const std::string tag = "dpc_" + format_real(dpc);
                try
                {
                    const auto s = run_equivalence(dpc, c.phase_center.calibration);
                    std::ostringstream a, b;
                    write_cut_csv(a, s.dual_mode_cut);
                    write_cut_csv(b, s.ideal_cut);
                    detail::write_text(dir / (tag + "_dual_mode.csv"), a.str());
                    detail::write_text(dir / (tag + "_ideal.csv"), b.str());
                    rep.files.push_back(tag + "_dual_mode.csv");
                    rep.files.push_back(tag + "_ideal.csv");
                    report << format_real(dpc) << "," << format_real(s.calibration.achieved_dpc_wl) << ","
                           << format_real(s.calibration.ratio) << "," << format_real(s.similarity.rms_db) << ","
                           << format_real(s.similarity.correlation) << "\n";
                    cells.push_back({{"setup", tag}, {"status", "complete"}});
                }
                catch (const std::exception &e)
                {
                    rep.complete = false;
                    cells.push_back({{"setup", tag}, {"status", std::string("failed: ") + e.what()}});
                }
            }
            detail::write_text(dir / "phase_center_report.csv", report.str());
            rep.files.push_back("phase_center_report.csv");
            detail::write_text(manifest_path, detail::manifest(c, rep.complete, cells, rep.files).dump(2) + "\n");
            return rep;
        }

        const sweep_result sweep = run_sweep(c);
        nlohmann::json cells = nlohmann::json::array();
        for (const auto &cell : sweep.cells)
            cells.push_back({{"scheme", c.schemes[cell.scheme].id},
                             {"seed", cell.seed},
                             {"status", cell.error.empty() ? std::string("complete") : "failed: " + cell.error}});
        rep.complete = sweep.complete;

        if (c.write_scenarios)
            for (std::size_t si = 0; si < c.seeds.size(); ++si)
            {
                const std::string name = "scenarios/seed_" + std::to_string(c.seeds[si]) + ".json";
                detail::write_text(dir / name, dump_scenario(sweep.scenarios[si]));
                rep.files.push_back(name);
            }
        if (c.write_traces)
            for (const auto &cell : sweep.cells)
                for (std::size_t st = 0; st < cell.stages.size(); ++st)
                {
                    const auto &stage = cell.stages[st];
                    const std::size_t dims = stage.trace.empty() ? 0 : stage.trace.front().params.size();
                    std::ostringstream os;
                    write_trace_csv(os, stage, dims);
                    const std::string name = "traces/" + c.schemes[cell.scheme].id + "_seed" + std::to_string(cell.seed) +
                                             "_stage" + std::to_string(st) + ".csv";
                    detail::write_text(dir / name, os.str());
                    rep.files.push_back(name);
                }

        if (c.kind == experiment_kind::sumrate_sweep)
        {
            std::ostringstream res, sum;
            write_results_csv(res, sweep.rows);
            detail::write_text(dir / "results.csv", res.str());
            const auto summary = summarize(sweep.rows);
            write_summary_csv(sum, summary);
            detail::write_text(dir / "summary.csv", sum.str());
            detail::write_text(dir / "headline.csv", detail::headline(c, summary));
            rep.files.insert(rep.files.end(), {"results.csv", "summary.csv", "headline.csv"});
        }
        else
        {
            const auto rows = quantize_sweep(c, sweep);
            std::ostringstream os;
            os << "scheme,pattern,seed,continuous_bps_hz,quantized_bps_hz,ratio,note\n";
            std::map<std::string, std::pair<double, std::size_t>> mean;
            for (const auto &q : rows)
            {
                os << q.scheme << "," << q.pattern << "," << q.seed << "," << format_real(q.continuous) << ","
                   << format_real(q.quantized) << "," << format_real(q.ratio()) << "," << q.note << "\n";
                mean[q.scheme].first += q.ratio();
                mean[q.scheme].second += 1;
            }
            detail::write_text(dir / "quantization.csv", os.str());
            std::ostringstream ms;
            ms << "scheme,pitch_wavelengths,mean_ratio\n";
            for (const auto &s : c.schemes)
                if (mean.contains(s.id))
                    ms << s.id << "," << format_real(c.quantization_pitch_wl) << ","
                       << format_real(mean[s.id].first / static_cast<double>(mean[s.id].second)) << "\n";
            detail::write_text(dir / "quantization_summary.csv", ms.str());
            rep.files.insert(rep.files.end(), {"quantization.csv", "quantization_summary.csv"});
        }
        detail::write_text(manifest_path, detail::manifest(c, rep.complete, cells, rep.files).dump(2) + "\n");
        if (!rep.complete)
            rep.message = "some cells failed; see manifest.json";
        return rep;
    }
}

#endif
