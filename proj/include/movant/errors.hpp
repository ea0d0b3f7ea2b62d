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

#ifndef MOVANT_ERRORS_HPP
#define MOVANT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace movant
{
    // Every library error derives from movant::error so callers can catch the family.
    struct error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct dimension_mismatch : error
    {
        using error::error;
    };

    struct range_error : error
    {
        using error::error;
    };

    struct quantization_collision : error
    {
        using error::error;
    };

    struct config_error : error
    {
        using error::error;
    };

    struct infeasible_layout : error
    {
        using error::error;
    };

    struct rank_deficient : error
    {
        using error::error;
    };

    struct singular_kernel : error
    {
        using error::error;
    };

    struct low_signal : error
    {
        using error::error;
    };

    struct parse_error : error
    {
        using error::error;
    };
}

#endif
