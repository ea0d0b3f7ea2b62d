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

#ifndef MOVANT_GP_HPP
#define MOVANT_GP_HPP

#include "errors.hpp"
#include "rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace movant
{
    inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
    inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

    struct gp_hyper
    {
        Eigen::VectorXd lengthscales;
        double signal_variance = 1.0;
        double noise_variance = 1e-4;
    };

    struct gp_hyper_bounds
    {
        double length_min = 1e-2;
        double length_max = 10.0;
        double noise_min = 1e-8;
        double noise_max = 1e-1;
        double signal_min = 1e-2;
        double signal_max = 20.0;
    };

    struct gp_fit_options
    {
        int restarts = 8;
        int max_iterations = 30;
        std::uint64_t seed = 0;
        std::optional<gp_hyper> warm_start;
    };

    struct gp_prediction
    {
        double mean = 0.0;     // standardized units
        double variance = 0.0; // latent variance, standardized units
    };

    namespace detail
    {
        constexpr double sqrt5 = 2.23606797749978969641;

        // Matern-5/2 correlation at scaled distance r.
        inline double matern52(double r)
        {
            const double a = sqrt5 * r;
            return (1.0 + a + a * a / 3.0) * std::exp(-a);
        }

        inline Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b, const gp_hyper &h)
        {
            const Eigen::RowVectorXd inv_l = h.lengthscales.cwiseInverse().transpose();
            const Eigen::MatrixXd sa = a.array().rowwise() * inv_l.array();
            const Eigen::MatrixXd sb = b.array().rowwise() * inv_l.array();
            const Eigen::VectorXd na = sa.rowwise().squaredNorm();
            const Eigen::VectorXd nb = sb.rowwise().squaredNorm();
            Eigen::MatrixXd r2 = (-2.0 * sa * sb.transpose()).colwise() + na;
            r2.rowwise() += nb.transpose();
            return r2.unaryExpr([&](double v) { return h.signal_variance * matern52(std::sqrt(std::max(v, 0.0))); });
        }

        // Cholesky of `k` with the jitter ladder 1e-10, 1e-9, ..., 1e-4 added to the diagonal.
        inline bool jittered_cholesky(const Eigen::MatrixXd &k, Eigen::MatrixXd &lower, double &jitter)
        {
            const auto n = k.rows();
            for (jitter = 1e-10; jitter <= 1.0001e-4; jitter *= 10.0)
            {
                Eigen::LLT<Eigen::MatrixXd> llt(k + jitter * Eigen::MatrixXd::Identity(n, n));
                if (llt.info() == Eigen::Success)
                {
                    lower = llt.matrixL();
                    return true;
                }
            }
            return false;
        }

        // Limited-memory BFGS with Armijo backtracking. `f` returns the objective and
        // writes the gradient; +inf signals an invalid point and triggers backtracking.
        inline Eigen::VectorXd lbfgs_minimize(const std::function<double(const Eigen::VectorXd &, Eigen::VectorXd &)> &f,
                                              Eigen::VectorXd x, int max_iter, double &fx, int memory = 6)
        {
            Eigen::VectorXd g(x.size());
            fx = f(x, g);
            if (!std::isfinite(fx))
                return x;
            std::deque<Eigen::VectorXd> s_hist, y_hist;
            for (int it = 0; it < max_iter; ++it)
            {
                // two-loop recursion
                Eigen::VectorXd q = g;
                std::vector<double> alpha(s_hist.size());
                for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i)
                {
                    alpha[i] = s_hist[i].dot(q) / y_hist[i].dot(s_hist[i]);
                    q -= alpha[i] * y_hist[i];
                }
                if (!s_hist.empty())
                    q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
                for (std::size_t i = 0; i < s_hist.size(); ++i)
                {
                    const double beta = y_hist[i].dot(q) / y_hist[i].dot(s_hist[i]);
                    q += (alpha[i] - beta) * s_hist[i];
                }
                Eigen::VectorXd dir = -q;
                double slope = g.dot(dir);
                if (!(slope < 0.0))
                {
                    dir = -g;
                    slope = -g.squaredNorm();
                    s_hist.clear();
                    y_hist.clear();
                }
                if (std::abs(slope) < 1e-12)
                    break;
                double step = s_hist.empty() ? std::min(1.0, 1.0 / std::max(g.norm(), 1e-12)) : 1.0;
                Eigen::VectorXd gn(x.size());
                Eigen::VectorXd xn;
                double fn = std::numeric_limits<double>::infinity();
                bool accepted = false;
                for (int ls = 0; ls < 30; ++ls)
                {
                    xn = x + step * dir;
                    fn = f(xn, gn);
                    if (std::isfinite(fn) && fn <= fx + 1e-4 * step * slope)
                    {
                        accepted = true;
                        break;
                    }
                    step *= 0.5;
                }
                if (!accepted)
                    break;
                const Eigen::VectorXd s = xn - x, y = gn - g;
                const double improvement = fx - fn;
                x = xn;
                g = gn;
                fx = fn;
                if (s.dot(y) > 1e-12)
                {
                    s_hist.push_back(s);
                    y_hist.push_back(y);
                    if (static_cast<int>(s_hist.size()) > memory)
                    {
                        s_hist.pop_front();
                        y_hist.pop_front();
                    }
                }
                if (improvement < 1e-9 * (1.0 + std::abs(fx)) || g.norm() < 1e-6)
                    break;
            }
            return x;
        }
    }

    // Gaussian process with a Matern-5/2 ARD kernel. Inputs are expected in the unit
    // cube; targets are standardized internally and predictions are reported in those
    // standardized units (use to_raw / y_scale to map back).
    class gp_model
    {
      public:
        gp_model() = default;

        // Conditions on (x, y) with fixed hyperparameters.
        gp_model(Eigen::MatrixXd x, const Eigen::VectorXd &y, gp_hyper hyper) : x_(std::move(x)), hyper_(std::move(hyper))
        {
            standardize(y);
            factorize();
        }

        [[nodiscard]] gp_prediction predict(const Eigen::VectorXd &point) const
        {
            Eigen::VectorXd m, v;
            predict_batch(point.transpose(), m, v);
            return {m(0), v(0)};
        }

        // Rows of `points` are query inputs.
        void predict_batch(const Eigen::MatrixXd &points, Eigen::VectorXd &mean, Eigen::VectorXd &variance) const
        {
            const Eigen::MatrixXd ks = detail::cross_kernel(x_, points, hyper_);
            mean = ks.transpose() * alpha_;
            const Eigen::MatrixXd v = lower_.triangularView<Eigen::Lower>().solve(ks);
            variance = (hyper_.signal_variance - v.colwise().squaredNorm().array()).matrix().transpose();
            variance = variance.cwiseMax(0.0);
        }

        [[nodiscard]] double to_raw(double standardized) const { return y_mean_ + y_scale_ * standardized; }
        [[nodiscard]] double to_standardized(double raw) const { return (raw - y_mean_) / y_scale_; }
        [[nodiscard]] double y_scale() const { return y_scale_; }
        [[nodiscard]] const gp_hyper &hyper() const { return hyper_; }
        [[nodiscard]] double jitter() const { return jitter_; }
        [[nodiscard]] double log_marginal_likelihood() const { return lml_; }
        [[nodiscard]] const Eigen::MatrixXd &inputs() const { return x_; }
        [[nodiscard]] const Eigen::VectorXd &standardized_targets() const { return y_; }
        [[nodiscard]] Eigen::Index dims() const { return x_.cols(); }

        // Negative log marginal likelihood and its gradient with respect to
        // theta = (log l_1..log l_d, log s2, log noise). Returns +inf when the kernel
        // cannot be factorized.
        static double neg_lml(const Eigen::MatrixXd &x, const Eigen::VectorXd &y, const Eigen::VectorXd &theta,
                              Eigen::VectorXd *grad)
        {
            const auto n = x.rows(), d = x.cols();
            gp_hyper h;
            h.lengthscales = theta.head(d).array().exp();
            h.signal_variance = std::exp(theta(d));
            h.noise_variance = std::exp(theta(d + 1));
            Eigen::MatrixXd k = detail::cross_kernel(x, x, h);
            const Eigen::MatrixXd k_signal = k;
            k.diagonal().array() += h.noise_variance;
            Eigen::MatrixXd lower;
            double jitter = 0.0;
            if (!detail::jittered_cholesky(k, lower, jitter))
                return std::numeric_limits<double>::infinity();
            const auto tri = lower.triangularView<Eigen::Lower>();
            const Eigen::VectorXd alpha = lower.transpose().triangularView<Eigen::Upper>().solve(tri.solve(y));
            const double value = 0.5 * y.dot(alpha) + lower.diagonal().array().log().sum() +
                                 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
            if (grad)
            {
                Eigen::MatrixXd kinv = tri.solve(Eigen::MatrixXd::Identity(n, n));
                kinv = lower.transpose().triangularView<Eigen::Upper>().solve(kinv);
                const Eigen::MatrixXd w = alpha * alpha.transpose() - kinv; // d lml = 0.5 tr(W dK)
                grad->resize(d + 2);
                grad->setZero();
                const Eigen::MatrixXd xt = x.transpose();
                const Eigen::VectorXd inv_l2 = h.lengthscales.array().square().inverse().matrix();
                std::vector<double> diff2(static_cast<std::size_t>(d));
                for (Eigen::Index j = 0; j < n; ++j)
                    for (Eigen::Index i = j + 1; i < n; ++i)
                    {
                        double r2 = 0.0;
                        for (Eigen::Index c = 0; c < d; ++c)
                        {
                            const double t = xt(c, i) - xt(c, j);
                            diff2[c] = t * t * inv_l2(c);
                            r2 += diff2[c];
                        }
                        const double r = std::sqrt(r2);
                        // symmetric pair counted twice, times 0.5 from the trace formula
                        const double coef = w(i, j) * h.signal_variance * (5.0 / 3.0) * (1.0 + detail::sqrt5 * r) *
                                            std::exp(-detail::sqrt5 * r);
                        for (Eigen::Index c = 0; c < d; ++c)
                            (*grad)(c) -= coef * diff2[c];
                    }
                (*grad)(d) = -0.5 * (w.array() * k_signal.array()).sum();
                (*grad)(d + 1) = -0.5 * h.noise_variance * w.trace();
            }
            return value;
        }

      private:
        friend gp_model gp_fit(const Eigen::MatrixXd &, const Eigen::VectorXd &, const gp_hyper_bounds &,
                               const gp_fit_options &);

        void standardize(const Eigen::VectorXd &y)
        {
            if (y.size() != x_.rows())
                throw std::invalid_argument("gp: input/target size mismatch");
            if (!y.allFinite())
                throw std::invalid_argument("gp: targets must be finite");
            y_mean_ = y.mean();
            const double var = (y.array() - y_mean_).square().mean();
            y_scale_ = var > 1e-24 ? std::sqrt(var) : 1.0;
            y_ = (y.array() - y_mean_) / y_scale_;
        }

        void factorize()
        {
            const auto n = x_.rows();
            if (hyper_.lengthscales.size() != x_.cols())
                throw std::invalid_argument("gp: lengthscale count does not match input dimension");
            Eigen::MatrixXd k = detail::cross_kernel(x_, x_, hyper_);
            k.diagonal().array() += hyper_.noise_variance;
            if (!detail::jittered_cholesky(k, lower_, jitter_))
                throw singular_kernel("gp: kernel matrix not positive definite after jitter escalation to 1e-4");
            const auto tri = lower_.triangularView<Eigen::Lower>();
            alpha_ = lower_.transpose().triangularView<Eigen::Upper>().solve(tri.solve(y_));
            lml_ = -(0.5 * y_.dot(alpha_) + lower_.diagonal().array().log().sum() +
                     0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi));
        }

        Eigen::MatrixXd x_;
        Eigen::VectorXd y_;
        double y_mean_ = 0.0;
        double y_scale_ = 1.0;
        gp_hyper hyper_;
        Eigen::MatrixXd lower_;
        Eigen::VectorXd alpha_;
        double jitter_ = 0.0;
        double lml_ = 0.0;
    };

    // Maximizes the log marginal likelihood over (lengthscales, signal variance, noise)
    // inside the box bounds with multi-start L-BFGS on a sigmoid reparameterization.
    // Start 0 is the warm start (or a neutral default); the others are log-uniform draws.
    inline gp_model gp_fit(const Eigen::MatrixXd &x, const Eigen::VectorXd &y, const gp_hyper_bounds &bounds = {},
                           const gp_fit_options &opt = {})
    {
        if (x.rows() < 2)
            throw std::invalid_argument("gp_fit: need at least 2 observations");
        const auto d = x.cols();
        gp_model probe;
        probe.x_ = x;
        probe.standardize(y);
        const Eigen::VectorXd &ys = probe.y_;

        Eigen::VectorXd lo(d + 2), hi(d + 2);
        lo.head(d).setConstant(std::log(bounds.length_min));
        hi.head(d).setConstant(std::log(bounds.length_max));
        lo(d) = std::log(bounds.signal_min);
        hi(d) = std::log(bounds.signal_max);
        lo(d + 1) = std::log(bounds.noise_min);
        hi(d + 1) = std::log(bounds.noise_max);
        const Eigen::VectorXd span = hi - lo;

        auto to_theta = [&](const Eigen::VectorXd &u) -> Eigen::VectorXd {
            return lo.array() + span.array() / (1.0 + (-u.array()).exp());
        };
        auto to_u = [&](const Eigen::VectorXd &theta) -> Eigen::VectorXd {
            const Eigen::ArrayXd t = ((theta - lo).array() / span.array()).max(1e-6).min(1.0 - 1e-6);
            return (t / (1.0 - t)).log().matrix();
        };
        auto objective = [&](const Eigen::VectorXd &u, Eigen::VectorXd &gu) -> double {
            const Eigen::VectorXd theta = to_theta(u);
            Eigen::VectorXd gt;
            const double v = gp_model::neg_lml(x, ys, theta, &gt);
            if (!std::isfinite(v))
                return v;
            const Eigen::ArrayXd s = 1.0 / (1.0 + (-u.array()).exp());
            gu = (gt.array() * span.array() * s * (1.0 - s)).matrix();
            return v;
        };

        counter_rng rng = counter_rng(opt.seed).split("gp_fit");
        double best_value = std::numeric_limits<double>::infinity();
        Eigen::VectorXd best_theta;
        for (int start = 0; start < std::max(opt.restarts, 1); ++start)
        {
            Eigen::VectorXd theta0(d + 2);
            if (start == 0)
            {
                if (opt.warm_start && opt.warm_start->lengthscales.size() == d)
                {
                    theta0.head(d) = opt.warm_start->lengthscales.array().log();
                    theta0(d) = std::log(opt.warm_start->signal_variance);
                    theta0(d + 1) = std::log(opt.warm_start->noise_variance);
                }
                else
                {
                    theta0.head(d).setConstant(std::log(0.3));
                    theta0(d) = 0.0;
                    theta0(d + 1) = std::log(1e-4);
                }
            }
            else
                for (Eigen::Index i = 0; i < d + 2; ++i)
                    theta0(i) = lo(i) + span(i) * rng.uniform();
            double value = 0.0;
            const Eigen::VectorXd u = detail::lbfgs_minimize(objective, to_u(theta0), opt.max_iterations, value);
            if (std::isfinite(value) && value < best_value)
            {
                best_value = value;
                best_theta = to_theta(u);
            }
        }
        if (!std::isfinite(best_value))
            throw singular_kernel("gp_fit: no hyperparameter start produced a factorizable kernel");

        gp_hyper h;
        h.lengthscales = best_theta.head(d).array().exp();
        h.signal_variance = std::exp(best_theta(d));
        h.noise_variance = std::exp(best_theta(d + 1));
        return gp_model(x, y, h);
    }

    // EI in standardized units: sigma [z Phi(z) + phi(z)], z = (mu - incumbent - xi) / sigma.
    inline double expected_improvement(double mean, double sigma, double incumbent, double xi = 0.01)
    {
        const double delta = mean - incumbent - xi;
        if (sigma <= 1e-12)
            return std::max(0.0, delta);
        const double z = delta / sigma;
        return std::max(0.0, sigma * (z * normal_cdf(z) + normal_pdf(z)));
    }

    inline double expected_improvement(const gp_model &model, const Eigen::VectorXd &point, double incumbent,
                                       double xi = 0.01)
    {
        const auto p = model.predict(point);
        return expected_improvement(p.mean, std::sqrt(p.variance), incumbent, xi);
    }
}

#endif
