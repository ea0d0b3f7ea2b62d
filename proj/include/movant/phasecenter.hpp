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

#ifndef MOVANT_PHASECENTER_HPP
#define MOVANT_PHASECENTER_HPP

#include "errors.hpp"
#include "optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

// Dual-mode circular patch model. Far fields follow the cavity model of the circular
// microstrip patch (Balanis, "Antenna Theory: Analysis and Design", circular patch
// section): in the phi = 0 plane a TM_n1 mode radiates
//     E_theta(theta) ~ J_{n+1}(k0 a sin theta) - J_{n-1}(k0 a sin theta)
// up to the constant j^n, which is absorbed into the excitation phase here. With a
// signed theta in the cut the argument is signed, so TM11 (n = 1) is even and TM21
// (n = 2) is odd about broadside. The two modes live on stacked patches whose radii
// resonate at the operating frequency: a = chi'_n1 / (k0 sqrt(eps_r)).
// All lengths in this header are in wavelengths.
namespace movant
{
    enum class patch_mode
    {
        tm11,
        tm21
    };

    constexpr double tm11_root = 1.8411837813406593; // first zero of J1'
    constexpr double tm21_root = 3.0542369282271403; // first zero of J2'
    constexpr double default_substrate_permittivity = 2.2;

    inline double resonant_radius(patch_mode mode, double permittivity = default_substrate_permittivity)
    {
        const double root = mode == patch_mode::tm11 ? tm11_root : tm21_root;
        return root / (2.0 * std::numbers::pi * std::sqrt(permittivity));
    }

    namespace detail
    {
        // J_n of a signed argument.
        inline double bessel_j(int n, double x)
        {
            const double v = std::cyl_bessel_j(static_cast<double>(n), std::abs(x));
            return (x < 0.0 && (n % 2 != 0)) ? -v : v;
        }
    }

    inline std::complex<double> mode_pattern(patch_mode mode, double theta_deg, double radius_wl)
    {
        const int n = mode == patch_mode::tm11 ? 1 : 2;
        const double x = 2.0 * std::numbers::pi * radius_wl * std::sin(theta_deg * std::numbers::pi / 180.0);
        return {detail::bessel_j(n + 1, x) - detail::bessel_j(n - 1, x), 0.0};
    }

    struct mode_excitation
    {
        std::complex<double> tm11{1.0, 0.0};
        std::complex<double> tm21{0.0, 0.0};

        // TM21/TM11 amplitude ratio `ratio` (signed) with the TM21 mode leading by 90 deg.
        static mode_excitation from_ratio(double ratio)
        {
            const double s = 1.0 / std::sqrt(1.0 + ratio * ratio);
            return {{s, 0.0}, {0.0, ratio * s}};
        }

        [[nodiscard]] mode_excitation normalized() const
        {
            const double p = std::sqrt(std::norm(tm11) + std::norm(tm21));
            if (!(p > 0.0))
                throw std::invalid_argument("mode_excitation: zero excitation");
            return {tm11 / p, tm21 / p};
        }
    };

    struct dual_mode_element
    {
        double center_wl = 0.0;
        mode_excitation excitation;
        double tm11_radius_wl = resonant_radius(patch_mode::tm11);
        double tm21_radius_wl = resonant_radius(patch_mode::tm21);
    };

    inline std::complex<double> element_field(const dual_mode_element &e, double theta_deg)
    {
        if (!(e.tm11_radius_wl > 0.0 && e.tm21_radius_wl > 0.0))
            throw std::invalid_argument("dual_mode_element: patch radius must be positive");
        const double s = std::sin(theta_deg * std::numbers::pi / 180.0);
        const std::complex<double> modes = e.excitation.tm11 * mode_pattern(patch_mode::tm11, theta_deg, e.tm11_radius_wl) +
                                           e.excitation.tm21 * mode_pattern(patch_mode::tm21, theta_deg, e.tm21_radius_wl);
        return modes * std::polar(1.0, 2.0 * std::numbers::pi * e.center_wl * s);
    }

    // ---- far-field cuts -------------------------------------------------------------

    struct far_field_cut
    {
        std::vector<double> theta_deg;
        std::vector<std::complex<double>> field;
        double wavelength = 1.0;

        void check() const
        {
            if (theta_deg.size() != field.size())
                throw std::invalid_argument("far_field_cut: angle and field counts differ");
            if (theta_deg.size() < 21)
                throw std::invalid_argument("far_field_cut: need at least 21 samples");
            for (std::size_t i = 1; i < theta_deg.size(); ++i)
                if (!(theta_deg[i] > theta_deg[i - 1]))
                    throw std::invalid_argument("far_field_cut: angles must be strictly increasing");
            if (theta_deg.front() < -90.0 || theta_deg.back() > 90.0)
                throw std::invalid_argument("far_field_cut: window must lie within [-90, 90] deg");
        }
    };

    // Samples `f` on [-half_window, half_window] with the given step (degrees).
    inline far_field_cut sample_cut(const std::function<std::complex<double>(double)> &f, double half_window_deg = 60.0,
                                    double step_deg = 1.0)
    {
        far_field_cut cut;
        const auto n = static_cast<long>(std::llround(2.0 * half_window_deg / step_deg));
        for (long i = 0; i <= n; ++i)
        {
            const double th = -half_window_deg + static_cast<double>(i) * step_deg;
            cut.theta_deg.push_back(th);
            cut.field.push_back(f(th));
        }
        return cut;
    }

    inline void write_cut_csv(std::ostream &os, const far_field_cut &cut)
    {
        os << "theta_deg,re,im\n";
        for (std::size_t i = 0; i < cut.theta_deg.size(); ++i)
            os << format_real(cut.theta_deg[i]) << "," << format_real(cut.field[i].real()) << ","
               << format_real(cut.field[i].imag()) << "\n";
    }

    inline far_field_cut read_cut_csv(std::istream &in, double wavelength = 1.0)
    {
        std::string line;
        if (!std::getline(in, line))
            throw parse_error("cut csv: empty input");
        far_field_cut cut;
        cut.wavelength = wavelength;
        std::size_t lineno = 1;
        while (std::getline(in, line))
        {
            ++lineno;
            if (line.empty() || line == "\r")
                continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            double th, re, im;
            if (!(ls >> th >> re >> im))
                throw parse_error("cut csv: malformed row at line " + std::to_string(lineno));
            cut.theta_deg.push_back(th);
            cut.field.emplace_back(re, im);
        }
        cut.check();
        return cut;
    }

    // ---- phase-center estimation ----------------------------------------------------

    struct phase_center_estimate
    {
        double offset_wl = 0.0;    // displacement along the array axis
        double residual_rad = 0.0; // weighted RMS of the wrapped phase residual
    };

    namespace detail
    {
        inline double wrap_pi(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

        // Weighted wrapped-residual cost for a candidate offset, with the constant phase
        // optimized: circular mean first, then two least-squares corrections.
        inline double phase_fit_cost(const std::vector<double> &phase, const std::vector<double> &sines,
                                     const std::vector<double> &w, double w_sum, double offset_wl)
        {
            const double k = 2.0 * std::numbers::pi * offset_wl;
            std::complex<double> acc = 0.0;
            for (std::size_t i = 0; i < phase.size(); ++i)
                acc += w[i] * std::polar(1.0, phase[i] - k * sines[i]);
            double c = std::arg(acc);
            for (int pass = 0; pass < 2; ++pass)
            {
                double shift = 0.0;
                for (std::size_t i = 0; i < phase.size(); ++i)
                    shift += w[i] * wrap_pi(phase[i] - k * sines[i] - c);
                c += shift / w_sum;
            }
            double cost = 0.0;
            for (std::size_t i = 0; i < phase.size(); ++i)
            {
                const double r = wrap_pi(phase[i] - k * sines[i] - c);
                cost += w[i] * r * r;
            }
            return cost;
        }
    }

    // Least-squares phase center: scans offsets over +-2 wavelengths at 1/400 wavelength
    // steps, weighting samples by |E|^2, then refines the best scan point with a parabola.
    inline phase_center_estimate estimate_phase_center(const far_field_cut &cut)
    {
        cut.check();
        const std::size_t n = cut.field.size();
        double peak = 0.0;
        for (const auto &e : cut.field)
            peak = std::max(peak, std::abs(e));
        const auto strong = std::count_if(cut.field.begin(), cut.field.end(),
                                          [&](const auto &e) { return std::abs(e) > 1e-6 * peak; });
        if (!(peak > 0.0) || static_cast<double>(strong) < 0.7 * static_cast<double>(n))
            throw low_signal("estimate_phase_center: fewer than 70% of the samples carry signal");

        std::vector<double> phase(n), sines(n), w(n);
        double w_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            phase[i] = std::arg(cut.field[i]);
            sines[i] = std::sin(cut.theta_deg[i] * std::numbers::pi / 180.0);
            w[i] = std::norm(cut.field[i]) / (peak * peak);
            w_sum += w[i];
        }

        constexpr double step = 1.0 / 400.0;
        constexpr int half = 800; // +-2 wavelengths
        std::vector<double> cost(2 * half + 1);
        int best = 0;
        for (int i = 0; i <= 2 * half; ++i)
        {
            cost[i] = detail::phase_fit_cost(phase, sines, w, w_sum, (i - half) * step);
            if (cost[i] < cost[best])
                best = i;
        }
        double offset = (best - half) * step;
        if (best > 0 && best < 2 * half)
        {
            const double c0 = cost[best - 1], c1 = cost[best], c2 = cost[best + 1];
            const double den = c0 - 2.0 * c1 + c2;
            if (den > 0.0)
                offset += std::clamp(0.5 * (c0 - c2) / den, -1.0, 1.0) * step;
        }
        phase_center_estimate est;
        est.offset_wl = offset;
        est.residual_rad = std::sqrt(detail::phase_fit_cost(phase, sines, w, w_sum, offset) / w_sum);
        return est;
    }

    // ---- calibration ------------------------------------------------------------------

    struct calibration_options
    {
        double physical_spacing_wl = 1.0;
        double half_window_deg = 60.0;
        double step_deg = 1.0;
        double max_ratio = 4.0;
        double tolerance_wl = 1e-3;
        double tm11_radius_wl = resonant_radius(patch_mode::tm11);
        double tm21_radius_wl = resonant_radius(patch_mode::tm21);
    };

    struct calibration_result
    {
        dual_mode_element left;
        dual_mode_element right;
        double ratio = 0.0;        // |TM21/TM11| amplitude ratio
        double achieved_dpc_wl = 0.0;
    };

    namespace detail
    {
        inline dual_mode_element make_element(const calibration_options &o, double center, double ratio)
        {
            dual_mode_element e;
            e.center_wl = center;
            e.excitation = mode_excitation::from_ratio(ratio);
            e.tm11_radius_wl = o.tm11_radius_wl;
            e.tm21_radius_wl = o.tm21_radius_wl;
            return e;
        }

        inline double displacement(const calibration_options &o, double ratio)
        {
            const dual_mode_element e = make_element(o, 0.0, ratio);
            return estimate_phase_center(
                       sample_cut([&](double th) { return element_field(e, th); }, o.half_window_deg, o.step_deg))
                .offset_wl;
        }

        inline double estimate_in_place(const calibration_options &o, const dual_mode_element &e)
        {
            return estimate_phase_center(
                       sample_cut([&](double th) { return element_field(e, th); }, o.half_window_deg, o.step_deg))
                .offset_wl;
        }
    }

    // Displacement of a single element's phase center versus the mode ratio, sampled at
    // `points` ratios in [0, max_ratio].
    inline std::vector<std::pair<double, double>> displacement_curve(const calibration_options &o, int points = 41)
    {
        std::vector<std::pair<double, double>> curve;
        for (int i = 0; i < points; ++i)
        {
            const double r = o.max_ratio * i / (points - 1);
            curve.emplace_back(r, detail::displacement(o, r));
        }
        return curve;
    }

    // Finds mirrored excitations that place the two phase centers target_dpc_wl apart
    // (elements sit at -+spacing/2). Bisection on the amplitude ratio; the displacement
    // is monotone in the ratio on [0, max_ratio].
    inline calibration_result calibrate_excitation(double target_dpc_wl, const calibration_options &o = {})
    {
        const double shift = 0.5 * (target_dpc_wl - o.physical_spacing_wl);
        const double reach = detail::displacement(o, o.max_ratio);
        if (std::abs(shift) > reach)
        {
            std::ostringstream os;
            os << "calibrate_excitation: target d_pc " << target_dpc_wl << " outside achievable interval ["
               << o.physical_spacing_wl - 2.0 * reach << ", " << o.physical_spacing_wl + 2.0 * reach << "]";
            throw range_error(os.str());
        }
        double ratio = 0.0;
        if (shift != 0.0)
        {
            double lo = 0.0, hi = o.max_ratio;
            const double goal = std::abs(shift);
            for (int it = 0; it < 60 && hi - lo > 1e-10; ++it)
            {
                const double mid = 0.5 * (lo + hi);
                (detail::displacement(o, mid) < goal ? lo : hi) = mid;
            }
            ratio = 0.5 * (lo + hi);
        }
        const double sign = shift < 0.0 ? -1.0 : 1.0;
        calibration_result res;
        res.ratio = ratio;
        res.right = detail::make_element(o, 0.5 * o.physical_spacing_wl, sign * ratio);
        res.left = detail::make_element(o, -0.5 * o.physical_spacing_wl, -sign * ratio);
        res.achieved_dpc_wl = detail::estimate_in_place(o, res.right) - detail::estimate_in_place(o, res.left);
        if (std::abs(res.achieved_dpc_wl - target_dpc_wl) > o.tolerance_wl)
            throw range_error("calibrate_excitation: achieved d_pc " + std::to_string(res.achieved_dpc_wl) +
                              " misses the target by more than the tolerance");
        return res;
    }

    // ---- pattern comparison -------------------------------------------------------------

    struct similarity
    {
        double rms_db = 0.0;
        double correlation = 1.0;
    };

    inline std::vector<double> normalized_db(const far_field_cut &cut, double floor_db = -40.0)
    {
        double peak = 0.0;
        for (const auto &e : cut.field)
            peak = std::max(peak, std::abs(e));
        std::vector<double> db;
        for (const auto &e : cut.field)
            db.push_back(peak > 0.0 ? std::max(20.0 * std::log10(std::abs(e) / peak), floor_db) : floor_db);
        return db;
    }

    // RMS dB difference and Pearson correlation of the peak-normalized dB patterns,
    // floored at -40 dB.
    inline similarity pattern_similarity(const far_field_cut &a, const far_field_cut &b)
    {
        if (a.theta_deg != b.theta_deg)
            throw std::invalid_argument("pattern_similarity: cuts must share the angle grid");
        const auto da = normalized_db(a), db = normalized_db(b);
        const auto n = static_cast<double>(da.size());
        double se = 0.0, ma = 0.0, mb = 0.0;
        for (std::size_t i = 0; i < da.size(); ++i)
        {
            se += (da[i] - db[i]) * (da[i] - db[i]);
            ma += da[i];
            mb += db[i];
        }
        ma /= n;
        mb /= n;
        double sab = 0.0, saa = 0.0, sbb = 0.0;
        for (std::size_t i = 0; i < da.size(); ++i)
        {
            sab += (da[i] - ma) * (db[i] - mb);
            saa += (da[i] - ma) * (da[i] - ma);
            sbb += (db[i] - mb) * (db[i] - mb);
        }
        similarity s;
        s.rms_db = std::sqrt(se / n);
        if (saa <= 1e-24 || sbb <= 1e-24)
            s.correlation = (saa <= 1e-24 && sbb <= 1e-24) ? 1.0 : 0.0;
        else
            s.correlation = sab / std::sqrt(saa * sbb);
        return s;
    }

    // ---- equivalence study ------------------------------------------------------------

    struct equivalence_setup
    {
        double target_dpc_wl = 0.8;
        calibration_result calibration;
        far_field_cut dual_mode_cut;
        far_field_cut ideal_cut;
        movant::similarity similarity;
    };

    // Dual-mode pair calibrated to target d_pc versus a conventional pair of single-mode
    // (TM11) patches physically spaced d_pc apart.
    inline equivalence_setup run_equivalence(double target_dpc_wl, const calibration_options &o = {})
    {
        equivalence_setup s;
        s.target_dpc_wl = target_dpc_wl;
        s.calibration = calibrate_excitation(target_dpc_wl, o);
        const auto &cal = s.calibration;
        s.dual_mode_cut = sample_cut([&](double th) { return element_field(cal.left, th) + element_field(cal.right, th); },
                                     o.half_window_deg, o.step_deg);
        dual_mode_element l, r;
        l.center_wl = -0.5 * target_dpc_wl;
        r.center_wl = 0.5 * target_dpc_wl;
        l.tm11_radius_wl = r.tm11_radius_wl = o.tm11_radius_wl;
        l.tm21_radius_wl = r.tm21_radius_wl = o.tm21_radius_wl;
        s.ideal_cut = sample_cut([&](double th) { return element_field(l, th) + element_field(r, th); },
                                 o.half_window_deg, o.step_deg);
        s.similarity = pattern_similarity(s.dual_mode_cut, s.ideal_cut);
        return s;
    }
}

#endif
