// SPDX-License-Identifier: Apache-2.0
//
// uavchan: air-ground channel synthesis and measurement analysis for vertical UAV flights
// Copyright (C) 2026 The uavchan authors
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

#ifndef UAVCHAN_FITTING_HPP
#define UAVCHAN_FITTING_HPP

#include "diagnostics.hpp"
#include "stochastic.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Maximum-likelihood fits of the envelope families.
//
//   Rayleigh     closed form sigma^2 = sum x^2 / 2n
//   Weibull      profile likelihood in the shape, scale in closed form; the profile score is monotone
//                so the shape is a bracketed root
//   Nakagami     Omega = mean x^2 in closed form, m from ln m - psi(m) = ln Omega - mean ln x^2,
//                clamped to the m >= 1/2 boundary
//   LogLogistic  ln x is logistic(mu, s); nested search: Brent on ln s, bracketed root for mu
//   Rician       EM fixed point on (nu, sigma^2) started from moments and from nu = 0

namespace uavchan
{
    inline constexpr std::size_t kMinMleSamples = 50;
    inline constexpr double kLogLikelihoodTolerance = 1e-8;

    struct FitResult
    {
        FadingDistribution distribution;
        double log_likelihood;
        std::size_t sample_count;
        int iterations; // optimizer iterations, 0 for closed forms
    };

    namespace detail
    {
        struct EnvelopeMoments
        {
            double mean_log;     // mean ln x
            double var_log;      // variance of ln x (population)
            double mean_sq;      // mean x^2
            double mean_log_sq;  // mean ln x^2
        };

        inline EnvelopeMoments check_envelope_samples(std::span<const double> xs)
        {
            if (xs.size() < kMinMleSamples)
                throw std::domain_error("fit_mle: need at least " + std::to_string(kMinMleSamples) + " samples, got " +
                                        std::to_string(xs.size()) + ".");
            for (double x : xs)
                if (!(x > 0.0) || !std::isfinite(x))
                    throw std::domain_error("fit_mle: envelope samples must be positive and finite.");

            const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
            // Spread at rounding level counts as constant.
            if (*hi - *lo <= 1e-9 * *hi)
                throw FitError("fit_mle: zero-variance sample, likelihood is unbounded.");

            const double n = static_cast<double>(xs.size());
            EnvelopeMoments m{};
            for (double x : xs)
            {
                m.mean_log += std::log(x);
                m.mean_sq += x * x;
            }
            m.mean_log /= n;
            m.mean_sq /= n;
            for (double x : xs)
                m.var_log += (std::log(x) - m.mean_log) * (std::log(x) - m.mean_log);
            m.var_log /= n;
            m.mean_log_sq = 2.0 * m.mean_log;
            return m;
        }

        // I1(z) / I0(z) without overflow.
        inline double bessel_ratio_i1_i0(double z)
        {
            if (z < 500.0)
                return std::cyl_bessel_i(1.0, z) / std::cyl_bessel_i(0.0, z);
            const double r = 1.0 / z;
            return 1.0 - 0.5 * r - 0.125 * r * r - 0.125 * r * r * r;
        }
    }

    inline FitResult fit_rayleigh(std::span<const double> xs)
    {
        const auto m = detail::check_envelope_samples(xs);
        FadingDistribution d = Rayleigh(std::sqrt(m.mean_sq / 2.0));
        return {d, log_likelihood(d, xs), xs.size(), 0};
    }

    inline FitResult fit_weibull(std::span<const double> xs)
    {
        const auto m = detail::check_envelope_samples(xs);
        std::vector<double> y(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            y[i] = std::log(xs[i]) - m.mean_log;
        const double ymax = *std::max_element(y.begin(), y.end());

        // Profile score sum(e^{ky} y)/sum(e^{ky}) - 1/k, increasing in k.
        auto score = [&](double k)
        {
            double num = 0.0, den = 0.0;
            for (double v : y)
            {
                const double w = std::exp(k * (v - ymax));
                num += w * v;
                den += w;
            }
            return num / den - 1.0 / k;
        };

        std::uintmax_t iters = 200;
        const double k0 = 1.2 / std::sqrt(m.var_log); // moment guess via sd of ln x
        auto tol = boost::math::tools::eps_tolerance<double>(50);
        const auto [klo, khi] = boost::math::tools::bracket_and_solve_root(score, k0, 2.0, true, tol, iters);
        if (iters >= 200)
            throw FitError("fit_mle(weibull): shape root did not converge.");
        const double k = 0.5 * (klo + khi);

        double s = 0.0;
        for (double v : y)
            s += std::exp(k * (v - ymax));
        s /= static_cast<double>(y.size());
        const double scale = std::exp(m.mean_log + ymax + std::log(s) / k);

        FadingDistribution d = Weibull(k, scale);
        return {d, log_likelihood(d, xs), xs.size(), static_cast<int>(iters)};
    }

    inline FitResult fit_nakagami(std::span<const double> xs)
    {
        const auto mo = detail::check_envelope_samples(xs);
        const double omega = mo.mean_sq;
        const double delta = std::log(omega) - mo.mean_log_sq; // >= 0 by Jensen
        if (!(delta > 0.0))
            throw FitError("fit_mle(nakagami): degenerate sample.");

        auto f = [delta](double m)
        { return std::log(m) - boost::math::digamma(m) - delta; };

        double m_hat = Nakagami::kMinShape;
        int iterations = 0;
        if (f(Nakagami::kMinShape) > 0.0)
        {
            std::uintmax_t iters = 200;
            const double guess = std::max(Nakagami::kMinShape, 0.5 / delta);
            auto tol = boost::math::tools::eps_tolerance<double>(50);
            const auto [lo, hi] = boost::math::tools::bracket_and_solve_root(f, guess, 2.0, false, tol, iters);
            if (iters >= 200)
                throw FitError("fit_mle(nakagami): shape root did not converge.");
            m_hat = std::max(Nakagami::kMinShape, 0.5 * (lo + hi));
            iterations = static_cast<int>(iters);
        }
        FadingDistribution d = Nakagami(m_hat, omega);
        return {d, log_likelihood(d, xs), xs.size(), iterations};
    }

    inline FitResult fit_loglogistic(std::span<const double> xs)
    {
        const auto m = detail::check_envelope_samples(xs);
        std::vector<double> y(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            y[i] = std::log(xs[i]);
        const auto [ylo, yhi] = std::minmax_element(y.begin(), y.end());
        const double n = static_cast<double>(y.size());

        // For fixed s the location solves sum tanh((y - mu) / 2s) = 0, decreasing in mu.
        auto location = [&](double s)
        {
            auto g = [&](double mu)
            {
                double acc = 0.0;
                for (double v : y)
                    acc += std::tanh((v - mu) / (2.0 * s));
                return acc;
            };
            std::uintmax_t iters = 200;
            auto tol = boost::math::tools::eps_tolerance<double>(52);
            const auto [a, b] = boost::math::tools::toms748_solve(g, *ylo, *yhi, tol, iters);
            return 0.5 * (a + b);
        };
        auto neg_ll = [&](double log_s)
        {
            const double s = std::exp(log_s);
            const double mu = location(s);
            double ll = 0.0;
            for (double v : y)
            {
                const double z = (v - mu) / s;
                const double az = std::abs(z);
                ll += -az - 2.0 * std::log1p(std::exp(-az)); // symmetric in z
            }
            return -(ll - n * std::log(s) - n * m.mean_log);
        };

        const double s0 = std::sqrt(3.0 * m.var_log) / kPi;
        std::uintmax_t iters = 500;
        const auto [log_s, nll] = boost::math::tools::brent_find_minima(neg_ll, std::log(s0) - std::log(50.0),
                                                                        std::log(s0) + std::log(50.0), 40, iters);
        if (iters >= 500)
            throw FitError("fit_mle(loglogistic): scale search did not converge.");
        const double s = std::exp(log_s);
        const double mu = location(s);

        FadingDistribution d = LogLogistic(std::exp(mu), 1.0 / s);
        return {d, log_likelihood(d, xs), xs.size(), static_cast<int>(iters)};
    }

    inline FitResult fit_rician(std::span<const double> xs, int max_iterations = 20000)
    {
        const auto m = detail::check_envelope_samples(xs);
        const double n = static_cast<double>(xs.size());
        double mean_x = 0.0;
        for (double x : xs)
            mean_x += x;
        mean_x /= n;

        auto loglik = [&](double nu, double s2)
        {
            const double k = nu * nu / (2.0 * s2);
            const double omega = nu * nu + 2.0 * s2;
            return log_likelihood(Rician(k, omega), xs);
        };

        auto em = [&](double nu, double s2, int &it)
        {
            double ll = loglik(nu, s2);
            for (it = 0; it < max_iterations; ++it)
            {
                double acc = 0.0;
                for (double x : xs)
                    acc += x * detail::bessel_ratio_i1_i0(x * nu / s2);
                const double nu_next = acc / n;
                const double s2_next = std::max(0.5 * (m.mean_sq - nu_next * nu_next), 1e-300);
                const double ll_next = loglik(nu_next, s2_next);
                const bool done = std::abs(ll_next - ll) <= kLogLikelihoodTolerance * std::max(1.0, std::abs(ll));
                nu = nu_next;
                s2 = s2_next;
                ll = ll_next;
                if (done)
                    break;
            }
            return std::array<double, 3>{nu, s2, ll};
        };

        // Moment start: E[x]^2 / E[x^2] runs from pi/4 (K = 0) towards 1 (K -> inf); a rough linear map sets K.
        // The second start sits near the Rayleigh boundary.
        const double ratio = std::clamp(mean_x * mean_x / m.mean_sq, 0.0, 0.999999);
        const double k_mom = ratio > kPi / 4.0 ? 2.0 * (ratio - kPi / 4.0) / (1.0 - ratio) : 0.0;
        const double nu0 = std::sqrt(k_mom / (k_mom + 1.0) * m.mean_sq);
        const double s20 = 0.5 * (m.mean_sq - nu0 * nu0);

        int it_a = 0, it_b = 0;
        const auto a = em(std::max(nu0, 1e-6 * std::sqrt(m.mean_sq)), s20, it_a);
        const auto b = em(0.1 * std::sqrt(m.mean_sq), 0.5 * m.mean_sq * 0.99, it_b);
        const auto &best = a[2] >= b[2] ? a : b;
        const int iterations = a[2] >= b[2] ? it_a : it_b;
        if (!std::isfinite(best[2]))
            throw FitError("fit_mle(rician): non-finite likelihood.");
        if (iterations >= max_iterations)
            throw FitError("fit_mle(rician): EM did not converge in " + std::to_string(max_iterations) +
                           " iterations (nu = " + std::to_string(best[0]) + ", sigma^2 = " + std::to_string(best[1]) + ").");

        // EM crawls near the K = 0 boundary; the boundary point itself has a closed form.
        const double ll_k0 = loglik(0.0, 0.5 * m.mean_sq);
        if (ll_k0 >= best[2])
            return {Rician(0.0, m.mean_sq), ll_k0, xs.size(), iterations};

        const double nu = best[0], s2 = best[1];
        FadingDistribution d = Rician(nu * nu / (2.0 * s2), nu * nu + 2.0 * s2);
        return {d, best[2], xs.size(), iterations};
    }

    inline FitResult fit_mle(std::span<const double> xs, FadingFamily family)
    {
        switch (family)
        {
        case FadingFamily::LogLogistic:
            return fit_loglogistic(xs);
        case FadingFamily::Rician:
            return fit_rician(xs);
        case FadingFamily::Rayleigh:
            return fit_rayleigh(xs);
        case FadingFamily::NakagamiM:
            return fit_nakagami(xs);
        case FadingFamily::Weibull:
            return fit_weibull(xs);
        }
        throw std::invalid_argument("fit_mle: unknown family.");
    }

    // Log-likelihood descending. Ties: fewer parameters first, then the FadingFamily order.
    inline bool ranks_before(const FitResult &a, const FitResult &b)
    {
        if (a.log_likelihood != b.log_likelihood)
            return a.log_likelihood > b.log_likelihood;
        const auto fa = family_of(a.distribution), fb = family_of(b.distribution);
        if (parameter_count(fa) != parameter_count(fb))
            return parameter_count(fa) < parameter_count(fb);
        return static_cast<int>(fa) < static_cast<int>(fb);
    }

    inline std::vector<FitResult> select_distribution(std::span<const double> xs,
                                                      std::span<const FadingFamily> families = kAllFamilies)
    {
        if (families.empty())
            throw std::invalid_argument("select_distribution: no families requested.");
        std::vector<FitResult> out;
        out.reserve(families.size());
        for (auto f : families)
            out.push_back(fit_mle(xs, f));
        std::stable_sort(out.begin(), out.end(), ranks_before);
        return out;
    }
}

#endif
