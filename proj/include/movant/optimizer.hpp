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

#ifndef MOVANT_OPTIMIZER_HPP
#define MOVANT_OPTIMIZER_HPP

#include "errors.hpp"
#include "geometry.hpp"
#include "gp.hpp"
#include "rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace movant
{
    // Black-box maximization target. Scores are finite, or -inf for points the caller
    // wants ranked below everything (e.g. rank-deficient channels).
    struct objective
    {
        std::function<double(std::span<const double>)> evaluate;
        std::vector<bound> bounds;

        [[nodiscard]] std::size_t dims() const noexcept { return bounds.size(); }
    };

    struct trace_entry
    {
        std::size_t index = 0;
        double score = 0.0;
        double best_so_far = 0.0;
        std::vector<double> params;
    };

    struct opt_result
    {
        std::vector<double> best_params;
        double best_score = -std::numeric_limits<double>::infinity();
        std::vector<trace_entry> trace;
        std::size_t evaluations = 0;
        std::uint64_t seed = 0;
        double wall_ms = 0.0;
    };

    namespace detail
    {
        // Records evaluations; the incumbent only changes on strict improvement, so ties
        // resolve to the lowest evaluation index.
        class recorder
        {
          public:
            recorder(const objective &obj, std::uint64_t seed) : obj_(obj), start_(std::chrono::steady_clock::now())
            {
                result_.seed = seed;
            }

            double evaluate(std::vector<double> params)
            {
                double score = obj_.evaluate(params);
                if (std::isnan(score))
                    score = -std::numeric_limits<double>::infinity();
                if (result_.trace.empty() || score > result_.best_score)
                {
                    result_.best_score = score;
                    result_.best_params = params;
                }
                result_.trace.push_back({result_.trace.size(), score, result_.best_score, std::move(params)});
                ++result_.evaluations;
                return score;
            }

            [[nodiscard]] const opt_result &peek() const { return result_; }

            opt_result finish()
            {
                result_.wall_ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
                return std::move(result_);
            }

          private:
            const objective &obj_;
            opt_result result_;
            std::chrono::steady_clock::time_point start_;
        };

        inline std::vector<double> from_unit(const std::vector<bound> &b, const Eigen::VectorXd &u)
        {
            std::vector<double> p(b.size());
            for (std::size_t i = 0; i < b.size(); ++i)
                p[i] = b[i].lower + (b[i].upper - b[i].lower) * std::clamp(u(static_cast<Eigen::Index>(i)), 0.0, 1.0);
            return p;
        }

        inline Eigen::VectorXd to_unit(const std::vector<bound> &b, std::span<const double> p)
        {
            Eigen::VectorXd u(static_cast<Eigen::Index>(b.size()));
            for (std::size_t i = 0; i < b.size(); ++i)
                u(static_cast<Eigen::Index>(i)) =
                    std::clamp((p[i] - b[i].lower) / (b[i].upper - b[i].lower), 0.0, 1.0);
            return u;
        }
    }

    // n stratified points in the unit cube (rows): in every dimension each of the n
    // equal-width strata holds exactly one point.
    inline Eigen::MatrixXd latin_hypercube(std::size_t n, std::size_t dims, std::uint64_t seed)
    {
        if (n < 1)
            throw std::invalid_argument("latin_hypercube: n must be >= 1");
        counter_rng rng = counter_rng(seed).split("latin_hypercube");
        Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dims));
        std::vector<std::size_t> perm(n);
        for (std::size_t d = 0; d < dims; ++d)
        {
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            rng.shuffle(perm);
            for (std::size_t i = 0; i < n; ++i)
                out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) =
                    (static_cast<double>(perm[i]) + rng.uniform()) / static_cast<double>(n);
        }
        return out;
    }

    struct bo_options
    {
        std::size_t init = 0; // 0 selects min(2 * dims, budget / 4), at least 1
        std::vector<std::vector<double>> warm_starts;
        int candidates = 1024;
        int refine_starts = 4;
        int refine_steps = 16;
        int refine_batch = 8;
        double xi = 0.01;
        std::size_t refit_every = 10; // full hyperparameter search cadence, in new observations
        gp_hyper_bounds hyper_bounds;
        int gp_restarts = 8;
        int gp_max_iterations = 30;
    };

    inline std::size_t default_init_count(std::size_t dims, std::size_t budget)
    {
        return std::max<std::size_t>(1, std::min<std::size_t>(2 * dims, budget / 4));
    }

    // GP-EI Bayesian optimization. Warm starts are evaluated first, then a Latin
    // hypercube design, then one EI-maximizing point per iteration until the budget is
    // spent. The GP conditions on every observation each iteration; its
    // hyperparameters are re-estimated every `refit_every` new observations.
    inline opt_result bo_run(const objective &obj, std::size_t budget, std::uint64_t seed, const bo_options &opt = {})
    {
        const auto &b = obj.bounds;
        const std::size_t d = b.size();
        detail::recorder rec(obj, seed);
        if (budget == 0)
            return rec.finish();
        if (d == 0)
        {
            rec.evaluate({});
            return rec.finish();
        }
        const counter_rng rng = counter_rng(seed).split("bo_run");

        std::vector<Eigen::VectorXd> xs;
        auto eval_unit = [&](const Eigen::VectorXd &u) {
            xs.push_back(u);
            rec.evaluate(detail::from_unit(b, u));
        };

        for (const auto &w : opt.warm_starts)
        {
            if (rec.peek().evaluations >= budget)
                break;
            if (w.size() != d)
                throw dimension_mismatch("bo_run: warm start has the wrong dimension");
            eval_unit(detail::to_unit(b, w));
        }
        const std::size_t init = opt.init ? opt.init : default_init_count(d, budget);
        const Eigen::MatrixXd design = latin_hypercube(init, d, rng.split("init").key());
        for (Eigen::Index i = 0; i < design.rows() && rec.peek().evaluations < budget; ++i)
            eval_unit(design.row(i).transpose());

        std::optional<gp_hyper> hyper;
        std::size_t last_fit = 0;
        for (std::uint64_t iter = 0; rec.peek().evaluations < budget; ++iter)
        {
            const counter_rng it_rng = rng.split(iter);
            const std::size_t n = xs.size();
            if (n < 2)
            {
                counter_rng r = it_rng.split("fallback");
                Eigen::VectorXd u(static_cast<Eigen::Index>(d));
                for (auto &v : u)
                    v = r.uniform();
                eval_unit(u);
                continue;
            }

            Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
            Eigen::VectorXd y(static_cast<Eigen::Index>(n));
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (std::size_t i = 0; i < n; ++i)
            {
                x.row(static_cast<Eigen::Index>(i)) = xs[i].transpose();
                const double s = rec.peek().trace[i].score;
                if (std::isfinite(s))
                {
                    lo = std::min(lo, s);
                    hi = std::max(hi, s);
                }
            }
            // non-finite scores are modeled as one range below the worst finite score
            const double floor_value = std::isfinite(lo) ? lo - std::max(hi - lo, 1.0) : -1.0;
            for (std::size_t i = 0; i < n; ++i)
            {
                const double s = rec.peek().trace[i].score;
                y(static_cast<Eigen::Index>(i)) = std::isfinite(s) ? s : floor_value;
            }

            gp_model model;
            bool fitted = false;
            if (hyper && n - last_fit < opt.refit_every)
            {
                try
                {
                    model = gp_model(x, y, *hyper);
                    fitted = true;
                }
                catch (const singular_kernel &)
                {
                }
            }
            if (!fitted)
            {
                gp_fit_options fo;
                fo.restarts = opt.gp_restarts;
                fo.max_iterations = opt.gp_max_iterations;
                fo.seed = it_rng.split("gp").key();
                fo.warm_start = hyper;
                model = gp_fit(x, y, opt.hyper_bounds, fo);
                hyper = model.hyper();
                last_fit = n;
            }
            const double incumbent = model.standardized_targets().maxCoeff();
            const Eigen::Index best_obs = [&] {
                Eigen::Index idx = 0;
                model.standardized_targets().maxCoeff(&idx);
                return idx;
            }();

            // candidate pool: uniform draws plus a quarter of local perturbations of the incumbent
            counter_rng cr = it_rng.split("candidates");
            const int m = std::max(opt.candidates, 1);
            const int local = m / 4;
            Eigen::MatrixXd cand(m, static_cast<Eigen::Index>(d));
            for (int i = 0; i < m; ++i)
                for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d); ++j)
                    cand(i, j) = i < m - local ? cr.uniform()
                                               : std::clamp(x(best_obs, j) + 0.05 * cr.normal(), 0.0, 1.0);
            Eigen::VectorXd mean, var;
            model.predict_batch(cand, mean, var);
            std::vector<double> ei(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i)
                ei[i] = expected_improvement(mean(i), std::sqrt(var(i)), incumbent, opt.xi);
            std::vector<int> order(static_cast<std::size_t>(m));
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](int a, int c) { return ei[a] > ei[c]; });

            // local refinement: batched stochastic hill climbing on EI from the best starts
            std::vector<std::pair<double, Eigen::VectorXd>> picks;
            counter_rng rr = it_rng.split("refine");
            for (int s = 0; s < std::min(opt.refine_starts, m); ++s)
            {
                Eigen::VectorXd cur = cand.row(order[s]).transpose();
                double cur_ei = ei[order[s]];
                double step = 0.05;
                for (int k = 0; k < opt.refine_steps; ++k)
                {
                    Eigen::MatrixXd prop(opt.refine_batch, static_cast<Eigen::Index>(d));
                    for (int q = 0; q < opt.refine_batch; ++q)
                        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d); ++j)
                            prop(q, j) = std::clamp(cur(j) + step * rr.normal(), 0.0, 1.0);
                    Eigen::VectorXd pm, pv;
                    model.predict_batch(prop, pm, pv);
                    int best_q = -1;
                    double best_ei = cur_ei;
                    for (int q = 0; q < opt.refine_batch; ++q)
                    {
                        const double e = expected_improvement(pm(q), std::sqrt(pv(q)), incumbent, opt.xi);
                        if (e > best_ei)
                        {
                            best_ei = e;
                            best_q = q;
                        }
                    }
                    if (best_q >= 0)
                    {
                        cur = prop.row(best_q).transpose();
                        cur_ei = best_ei;
                    }
                    else
                        step *= 0.5;
                }
                picks.emplace_back(cur_ei, cur);
            }
            for (int i = 0; i < m; ++i)
                picks.emplace_back(ei[order[i]], cand.row(order[i]).transpose());
            std::stable_sort(picks.begin(), picks.end(),
                             [](const auto &a, const auto &c) { return a.first > c.first; });

            auto is_new = [&](const Eigen::VectorXd &u) {
                return std::none_of(xs.begin(), xs.end(), [&](const Eigen::VectorXd &v) { return (u - v).norm() < 1e-9; });
            };
            bool chosen = false;
            for (const auto &p : picks)
                if (is_new(p.second))
                {
                    eval_unit(p.second);
                    chosen = true;
                    break;
                }
            if (!chosen)
            {
                counter_rng r = it_rng.split("fallback");
                Eigen::VectorXd u(static_cast<Eigen::Index>(d));
                for (auto &v : u)
                    v = r.uniform();
                eval_unit(u);
            }
        }
        return rec.finish();
    }

    inline opt_result random_search(const objective &obj, std::size_t budget, std::uint64_t seed)
    {
        detail::recorder rec(obj, seed);
        counter_rng rng = counter_rng(seed).split("random_search");
        for (std::size_t i = 0; i < budget; ++i)
        {
            std::vector<double> p(obj.dims());
            for (std::size_t j = 0; j < p.size(); ++j)
                p[j] = obj.bounds[j].lower + (obj.bounds[j].upper - obj.bounds[j].lower) * rng.uniform();
            rec.evaluate(std::move(p));
        }
        return rec.finish();
    }

    constexpr std::size_t grid_search_limit = 10'000'000;

    // Exhaustive search over the regular grid with `resolution[i]` points per dimension,
    // both bounds included; the first dimension varies slowest.
    inline opt_result grid_search(const objective &obj, const std::vector<std::size_t> &resolution)
    {
        const std::size_t d = obj.dims();
        if (resolution.size() != d)
            throw dimension_mismatch("grid_search: one resolution per dimension required");
        std::size_t total = 1;
        for (std::size_t r : resolution)
        {
            if (r < 1)
                throw std::invalid_argument("grid_search: resolution must be >= 1");
            if (total > grid_search_limit / r)
                throw std::invalid_argument("grid_search: more than 1e7 grid points");
            total *= r;
        }
        detail::recorder rec(obj, 0);
        std::vector<std::size_t> idx(d, 0);
        for (std::size_t flat = 0; flat < total; ++flat)
        {
            std::vector<double> p(d);
            for (std::size_t j = 0; j < d; ++j)
            {
                const auto &bj = obj.bounds[j];
                p[j] = resolution[j] == 1 ? bj.lower
                       : idx[j] + 1 == resolution[j]
                           ? bj.upper
                           : bj.lower + (bj.upper - bj.lower) * static_cast<double>(idx[j]) /
                                            static_cast<double>(resolution[j] - 1);
            }
            rec.evaluate(std::move(p));
            for (std::size_t j = d; j-- > 0;)
            {
                if (++idx[j] < resolution[j])
                    break;
                idx[j] = 0;
            }
        }
        return rec.finish();
    }

    inline opt_result grid_search(const objective &obj, std::size_t resolution)
    {
        return grid_search(obj, std::vector<std::size_t>(obj.dims(), resolution));
    }

    // Objective over the unpinned coordinates of `full`; pinned coordinates keep their values.
    inline objective restrict_objective(const objective &full, const std::vector<std::optional<double>> &pinned)
    {
        if (pinned.size() != full.dims())
            throw dimension_mismatch("restrict_objective: pin vector has the wrong dimension");
        objective sub;
        for (std::size_t i = 0; i < pinned.size(); ++i)
            if (!pinned[i])
                sub.bounds.push_back(full.bounds[i]);
        sub.evaluate = [eval = full.evaluate, pinned](std::span<const double> free) {
            std::vector<double> p(pinned.size());
            std::size_t k = 0;
            for (std::size_t i = 0; i < pinned.size(); ++i)
                p[i] = pinned[i] ? *pinned[i] : free[k++];
            return eval(p);
        };
        return sub;
    }

    inline std::vector<double> expand_params(const std::vector<std::optional<double>> &pinned,
                                             std::span<const double> free)
    {
        std::vector<double> p(pinned.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < pinned.size(); ++i)
            p[i] = pinned[i] ? *pinned[i] : free[k++];
        return p;
    }

    inline std::string format_real(double v)
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.9g", v);
        return buf;
    }

    // CSV: eval_index,score,best_so_far,param_0,...
    inline void write_trace_csv(std::ostream &os, const opt_result &r, std::size_t dims)
    {
        os << "eval_index,score,best_so_far";
        for (std::size_t i = 0; i < dims; ++i)
            os << ",param_" << i;
        os << "\n";
        for (const auto &t : r.trace)
        {
            os << t.index << "," << format_real(t.score) << "," << format_real(t.best_so_far);
            for (double p : t.params)
                os << "," << format_real(p);
            os << "\n";
        }
    }
}

#endif
