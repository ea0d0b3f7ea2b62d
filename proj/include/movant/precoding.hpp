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

#ifndef MOVANT_PRECODING_HPP
#define MOVANT_PRECODING_HPP

#include "channel.hpp"
#include "errors.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <numeric>
#include <vector>

namespace movant
{
    constexpr double rank_threshold = 1e-10;

    struct rate_report
    {
        std::vector<double> snr;  // linear, per user
        std::vector<double> rate; // bits/s/Hz, per user
        double sum_rate = 0.0;
    };

    // Zero-forcing precoder W = H^H (H H^H)^-1 with unit-norm columns (N x K).
    inline Eigen::MatrixXcd zf_precoder(const channel_matrix &h)
    {
        const auto k = h.rows(), n = h.cols();
        if (k == 0 || k > n)
            throw rank_deficient("zf_precoder: need 1 <= K <= N (K=" + std::to_string(k) + ", N=" + std::to_string(n) + ")");
        const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h);
        const auto &sv = svd.singularValues();
        if (!(sv(k - 1) >= rank_threshold * sv(0)) || !(sv(0) > 0.0))
            throw rank_deficient("zf_precoder: channel is rank deficient (sigma_min / sigma_max = " +
                                 std::to_string(sv(0) > 0.0 ? sv(k - 1) / sv(0) : 0.0) + ")");
        const Eigen::MatrixXcd gram = h * h.adjoint();
        Eigen::MatrixXcd w = h.adjoint() * gram.ldlt().solve(Eigen::MatrixXcd::Identity(k, k));
        for (Eigen::Index c = 0; c < k; ++c)
            w.col(c).normalize();
        return w;
    }

    // Equal power split over K users: SNR_k = (snr / K) |(HW)_kk|^2.
    inline rate_report sum_rate(const channel_matrix &h, double transmit_snr)
    {
        const Eigen::MatrixXcd w = zf_precoder(h);
        const Eigen::MatrixXcd g = h * w;
        const auto k = h.rows();
        rate_report r;
        for (Eigen::Index i = 0; i < k; ++i)
        {
            const double s = transmit_snr / static_cast<double>(k) * std::norm(g(i, i));
            r.snr.push_back(s);
            r.rate.push_back(std::log2(1.0 + s));
        }
        r.sum_rate = std::accumulate(r.rate.begin(), r.rate.end(), 0.0);
        return r;
    }

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
}

#endif
