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

#ifndef MOVANT_MOVANT_HPP
#define MOVANT_MOVANT_HPP

#include "errors.hpp"
#include "rng.hpp"
#include "geometry.hpp"
#include "patterns.hpp"
#include "channel.hpp"
#include "precoding.hpp"
#include "gp.hpp"
#include "optimizer.hpp"
#include "sum_rate_objective.hpp"
#include "phasecenter.hpp"
#include "harness.hpp"

#endif
