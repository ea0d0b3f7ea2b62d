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

#ifndef MOVANT_SUM_RATE_OBJECTIVE_HPP
#define MOVANT_SUM_RATE_OBJECTIVE_HPP

#include "channel.hpp"
#include "geometry.hpp"
#include "optimizer.hpp"
#include "patterns.hpp"
#include "precoding.hpp"

#include <limits>
#include <memory>
#include <span>

namespace movant
{
    // Score loss per wavelength of accumulated spacing deficit.
    constexpr double spacing_penalty_per_wavelength = 10.0;
    // Base score when separation repair cannot produce a feasible layout (below every rate).
    constexpr double unrepairable_score = -1.0;

    struct sum_rate_problem
    {
        architecture_spec architecture;
        movant::scenario scenario;
        pattern_model pattern;
        double transmit_snr = 1.0; // linear
    };

    // ZF sum rate of a feasible layout; -inf when the channel is rank deficient.
    inline double layout_sum_rate(const antenna_layout &layout, const scenario &s, const pattern_model &pattern,
                                  double transmit_snr)
    {
        try
        {
            return sum_rate(build_channel(layout, s, pattern), transmit_snr).sum_rate;
        }
        catch (const rank_deficient &)
        {
            return -std::numeric_limits<double>::infinity();
        }
    }

    // Feasible layouts score their sum rate. A layout violating d_min scores the rate of
    // its separation-repaired layout minus 10 per wavelength of total violation depth.
    inline double penalized_score(const sum_rate_problem &p, std::span<const double> params)
    {
        const antenna_layout layout = decode(p.architecture, params);
        const feasibility_report rep = validate(layout);
        if (rep.ok())
            return layout_sum_rate(layout, p.scenario, p.pattern, p.transmit_snr);
        double depth = 0.0;
        for (const auto &v : rep.violations)
            depth += v.depth;
        const double penalty = spacing_penalty_per_wavelength * depth / layout.wavelength;
        const antenna_layout repaired = repair_spacing(layout);
        if (validate(repaired).ok())
            return layout_sum_rate(repaired, p.scenario, p.pattern, p.transmit_snr) - penalty;
        return unrepairable_score - penalty;
    }

    inline objective make_sum_rate_objective(std::shared_ptr<const sum_rate_problem> problem)
    {
        objective obj;
        obj.bounds = param_bounds(problem->architecture);
        obj.evaluate = [problem](std::span<const double> x) { return penalized_score(*problem, x); };
        return obj;
    }
}

#endif
