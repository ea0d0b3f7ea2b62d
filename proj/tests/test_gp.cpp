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

#include <movant/gp.hpp>
#include <movant/rng.hpp>

#include <gtest/gtest.h>

#include <numbers>

using namespace movant;

namespace
{
    // E[max(0, f - incumbent - xi)] for f ~ N(mu, sigma^2), composite Simpson over +-12 sigma
    double ei_quadrature(double mu, double sigma, double incumbent, double xi)
    {
        const int n = 20000;
        const double a = mu - 12 * sigma, b = mu + 12 * sigma, h = (b - a) / n;
        double acc = 0.0;
        for (int i = 0; i <= n; ++i)
        {
            const double f = a + i * h;
            const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
            const double dens = std::exp(-0.5 * (f - mu) * (f - mu) / (sigma * sigma)) / (sigma * std::sqrt(2 * std::numbers::pi));
            acc += w * std::max(0.0, f - incumbent - xi) * dens;
        }
        return acc * h / 3.0;
    }
}

TEST(Matern52, ClosedForm)
{
    EXPECT_DOUBLE_EQ(detail::matern52(0.0), 1.0);
    const double s5 = std::sqrt(5.0);
    EXPECT_NEAR(detail::matern52(1.0), (1 + s5 + 5.0 / 3.0) * std::exp(-s5), 1e-15);
    EXPECT_NEAR(detail::matern52(0.4), (1 + s5 * 0.4 + 5.0 * 0.16 / 3.0) * std::exp(-s5 * 0.4), 1e-15);
}

TEST(ExpectedImprovement, Anchors)
{
    EXPECT_EQ(expected_improvement(0.5, 0.0, 0.5, 0.0), 0.0);
    EXPECT_NEAR(expected_improvement(0.0, 1.0, 0.0, 0.0), 1.0 / std::sqrt(2 * std::numbers::pi), 1e-12);
    EXPECT_NEAR(expected_improvement(0.0, 1.0, 0.0, 0.0), 0.3989, 1e-4);
}

TEST(ExpectedImprovement, MatchesQuadrature)
{
    counter_rng rng(21);
    for (int i = 0; i < 200; ++i)
    {
        const double mu = rng.uniform(-3, 3), sigma = rng.uniform(0.05, 2.0), inc = rng.uniform(-3, 3);
        const double xi = rng.uniform(0.0, 0.1);
        EXPECT_NEAR(expected_improvement(mu, sigma, inc, xi), ei_quadrature(mu, sigma, inc, xi), 1e-6);
    }
}

TEST(ExpectedImprovement, ModelPointMatchesQuadrature)
{
    counter_rng rng(22);
    Eigen::MatrixXd x(12, 2);
    Eigen::VectorXd y(12);
    for (int i = 0; i < 12; ++i)
    {
        x(i, 0) = rng.uniform();
        x(i, 1) = rng.uniform();
        y(i) = std::sin(3 * x(i, 0)) + x(i, 1);
    }
    const auto m = gp_fit(x, y);
    for (int t = 0; t < 20; ++t)
    {
        const Eigen::Vector2d p(rng.uniform(), rng.uniform());
        const auto pr = m.predict(p);
        const double inc = m.standardized_targets().maxCoeff();
        if (pr.variance < 1e-8)
            continue;
        EXPECT_NEAR(expected_improvement(m, p, inc), ei_quadrature(pr.mean, std::sqrt(pr.variance), inc, 0.01), 1e-6);
    }
}

TEST(NegLml, GradientMatchesFiniteDifferences)
{
    counter_rng rng(5);
    Eigen::MatrixXd x(15, 3);
    Eigen::VectorXd y(15);
    for (int i = 0; i < 15; ++i)
    {
        for (int j = 0; j < 3; ++j)
            x(i, j) = rng.uniform();
        y(i) = std::cos(4 * x(i, 0)) * x(i, 1) + 0.1 * rng.normal();
    }
    y = (y.array() - y.mean()) / std::sqrt((y.array() - y.mean()).square().mean());
    for (int trial = 0; trial < 5; ++trial)
    {
        Eigen::VectorXd theta(5);
        for (int i = 0; i < 3; ++i)
            theta(i) = std::log(rng.uniform(0.1, 2.0));
        theta(3) = std::log(rng.uniform(0.3, 3.0));
        theta(4) = std::log(rng.uniform(1e-3, 1e-1));
        Eigen::VectorXd g;
        gp_model::neg_lml(x, y, theta, &g);
        for (int i = 0; i < 5; ++i)
        {
            const double h = 1e-6;
            Eigen::VectorXd tp = theta, tm = theta;
            tp(i) += h;
            tm(i) -= h;
            const double fd = (gp_model::neg_lml(x, y, tp, nullptr) - gp_model::neg_lml(x, y, tm, nullptr)) / (2 * h);
            EXPECT_NEAR(g(i), fd, 1e-5 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST(GpFit, ConstantTargets)
{
    Eigen::MatrixXd x(6, 1);
    x << 0.0, 0.2, 0.4, 0.6, 0.8, 1.0;
    const Eigen::VectorXd y = Eigen::VectorXd::Constant(6, 3.5);
    const auto m = gp_fit(x, y);
    const double inc = m.to_standardized(3.5);
    for (double q = 0.05; q < 1.0; q += 0.1)
    {
        Eigen::VectorXd p(1);
        p << q;
        EXPECT_NEAR(m.to_raw(m.predict(p).mean), 3.5, 1e-9);
        EXPECT_LT(expected_improvement(m, p, inc), 1e-3);
    }
}

TEST(GpFit, SineRegression)
{
    Eigen::MatrixXd x(16, 1);
    Eigen::VectorXd y(16);
    for (int i = 0; i < 16; ++i)
    {
        x(i, 0) = i / 15.0;
        y(i) = std::sin(2 * std::numbers::pi * x(i, 0));
    }
    const auto m = gp_fit(x, y);
    double se = 0.0;
    for (int i = 0; i < 50; ++i)
    {
        Eigen::VectorXd p(1);
        p << (i + 0.5) / 50.0;
        const double e = m.to_raw(m.predict(p).mean) - std::sin(2 * std::numbers::pi * p(0));
        se += e * e;
    }
    EXPECT_LT(std::sqrt(se / 50), 0.05);
}

TEST(GpFit, DuplicateInputsNeedNoise)
{
    Eigen::MatrixXd x(4, 1);
    x << 0.3, 0.3, 0.7, 0.7;
    Eigen::VectorXd y(4);
    y << 1.0, 1.4, -0.2, 0.1;
    const auto m = gp_fit(x, y);
    EXPECT_GT(m.hyper().noise_variance, 0.0);
    EXPECT_TRUE(std::isfinite(m.log_marginal_likelihood()));
    const gp_hyper_bounds b;
    EXPECT_GE(m.hyper().noise_variance, b.noise_min * 0.999);
    EXPECT_LE(m.hyper().noise_variance, b.noise_max * 1.001);
}

TEST(GpFit, HyperparametersStayInBounds)
{
    counter_rng rng(6);
    Eigen::MatrixXd x(20, 4);
    Eigen::VectorXd y(20);
    for (int i = 0; i < 20; ++i)
    {
        for (int j = 0; j < 4; ++j)
            x(i, j) = rng.uniform();
        y(i) = rng.normal();
    }
    const gp_hyper_bounds b;
    const auto m = gp_fit(x, y, b);
    for (int j = 0; j < 4; ++j)
    {
        EXPECT_GE(m.hyper().lengthscales(j), b.length_min * 0.999);
        EXPECT_LE(m.hyper().lengthscales(j), b.length_max * 1.001);
    }
}

TEST(GpFit, Deterministic)
{
    counter_rng rng(7);
    Eigen::MatrixXd x(10, 2);
    Eigen::VectorXd y(10);
    for (int i = 0; i < 10; ++i)
    {
        x(i, 0) = rng.uniform();
        x(i, 1) = rng.uniform();
        y(i) = x(i, 0) * x(i, 1);
    }
    const auto a = gp_fit(x, y), b = gp_fit(x, y);
    EXPECT_EQ(a.hyper().lengthscales, b.hyper().lengthscales);
    EXPECT_EQ(a.log_marginal_likelihood(), b.log_marginal_likelihood());
}

TEST(GpModel, InterpolatesWithSmallNoise)
{
    Eigen::MatrixXd x(5, 1);
    x << 0.1, 0.3, 0.5, 0.7, 0.9;
    Eigen::VectorXd y(5);
    y << 1, 2, 0, -1, 3;
    gp_hyper h;
    h.lengthscales = Eigen::VectorXd::Constant(1, 0.2);
    h.noise_variance = 1e-8;
    const gp_model m(x, y, h);
    for (int i = 0; i < 5; ++i)
    {
        const auto p = m.predict(x.row(i).transpose());
        EXPECT_NEAR(m.to_raw(p.mean), y(i), 1e-4);
        EXPECT_LT(p.variance, 1e-6);
    }
}
