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

#include "uavchan/stochastic.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace uavchan;
using Catch::Approx;

namespace
{
    constexpr double kPiD = 3.14159265358979323846;

    std::vector<FadingDistribution> zoo()
    {
        return {LogLogistic(1.0, 1.41), LogLogistic(1.0, 1.12), LogLogistic(2.5, 3.0), Rician(3.0, 1.0),
                Rician(0.5, 2.0),       Rician(20.0, 1.0),      Rayleigh(0.7),         Nakagami(0.5, 1.0),
                Nakagami(2.5, 1.5),     Weibull(0.8, 1.2),      Weibull(2.0, 1.0)};
    }

    // Textbook densities written out independently of the library.
    double oracle_pdf(const FadingDistribution &d, double x)
    {
        if (auto *p = std::get_if<LogLogistic>(&d))
        {
            const double a = p->alpha(), b = p->beta(), z = std::pow(x / a, b);
            return (b / a) * std::pow(x / a, b - 1.0) / ((1.0 + z) * (1.0 + z));
        }
        if (auto *p = std::get_if<Rayleigh>(&d))
        {
            const double s2 = p->sigma() * p->sigma();
            return x / s2 * std::exp(-x * x / (2.0 * s2));
        }
        if (auto *p = std::get_if<Rician>(&d))
        {
            const double K = p->k_factor(), W = p->omega();
            const double nu2 = K * W / (K + 1.0), s2 = W / (2.0 * (K + 1.0));
            return x / s2 * std::exp(-(x * x + nu2) / (2.0 * s2)) * std::cyl_bessel_i(0.0, x * std::sqrt(nu2) / s2);
        }
        if (auto *p = std::get_if<Nakagami>(&d))
        {
            const double m = p->m(), W = p->omega();
            return 2.0 * std::pow(m, m) / (std::tgamma(m) * std::pow(W, m)) * std::pow(x, 2.0 * m - 1.0) *
                   std::exp(-m * x * x / W);
        }
        const auto &w = std::get<Weibull>(d);
        const double k = w.shape(), l = w.scale();
        return k / l * std::pow(x / l, k - 1.0) * std::exp(-std::pow(x / l, k));
    }

    double integrate_pdf(const FadingDistribution &d, double lo, double hi)
    {
        boost::math::quadrature::tanh_sinh<double> ts;
        return ts.integrate([&](double x)
                            { return pdf(d, x); },
                            lo, hi, 1e-13);
    }

    double total_mass(const FadingDistribution &d)
    {
        const double split = quantile(d, 0.5);
        boost::math::quadrature::exp_sinh<double> es;
        const double tail = es.integrate([&](double x)
                                         { return pdf(d, x); },
                                         split, std::numeric_limits<double>::infinity(), 1e-13);
        return integrate_pdf(d, 0.0, split) + tail;
    }

    // Two-sided KS statistic against a continuous CDF.
    double ks_statistic(std::vector<double> xs, const FadingDistribution &d)
    {
        std::sort(xs.begin(), xs.end());
        const double n = static_cast<double>(xs.size());
        double D = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i)
        {
            const double F = cdf(d, xs[i]);
            D = std::max({D, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
        }
        return D;
    }
}

TEST_CASE("uniform and normal helpers")
{
    Rng rng(1);
    for (int i = 0; i < 100000; ++i)
    {
        const double u = open_unit(rng);
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
    CHECK(standard_normal_cdf(0.0) == 0.5);
    CHECK(standard_normal_cdf(1.959963984540054) == Approx(0.975).epsilon(1e-12));
    CHECK(standard_normal_cdf(-8.0) == Approx(6.22096057427178e-16).epsilon(1e-10));
}

TEST_CASE("shadowing sample moments")
{
    Rng rng(5);
    const ShadowingParams p{1.5, 4.0};
    const int n = 200000;
    double s = 0.0, ss = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double x = sample_shadowing(rng, p);
        s += x;
        ss += x * x;
    }
    const double mean = s / n, var = ss / n - mean * mean;
    CHECK(mean == Approx(1.5).margin(4.0 * 4.0 / std::sqrt(n)));
    CHECK(std::sqrt(var) == Approx(4.0).epsilon(0.01));
    CHECK_THROWS_AS((ShadowingParams{0.0, -1.0}.validate()), std::domain_error);
}

TEST_CASE("densities match textbook forms")
{
    for (const auto &d : zoo())
        for (double x : {0.05, 0.3, 0.9, 1.0, 1.7, 3.2})
        {
            INFO(to_string(family_of(d)) << " x=" << x);
            CHECK(pdf(d, x) == Approx(oracle_pdf(d, x)).epsilon(1e-10));
            CHECK(log_pdf(d, x) == Approx(std::log(oracle_pdf(d, x))).epsilon(1e-10));
        }
}

TEST_CASE("each density integrates to one")
{
    for (const auto &d : zoo())
    {
        INFO(to_string(family_of(d)) << " " << parameters(d)[0].value);
        CHECK(total_mass(d) == Approx(1.0).margin(1e-6));
    }
}

TEST_CASE("CDF equals the integrated density")
{
    for (const auto &d : zoo())
        for (double x : {0.2, 0.8, 1.5, 2.5})
        {
            INFO(to_string(family_of(d)) << " x=" << x);
            CHECK(cdf(d, x) == Approx(integrate_pdf(d, 0.0, x)).margin(1e-9));
        }
}

TEST_CASE("quantile inverts the CDF")
{
    for (const auto &d : zoo())
    {
        for (double u : {1e-6, 0.01, 0.1, 0.5, 0.9, 0.99, 0.999999})
        {
            INFO(to_string(family_of(d)) << " u=" << u);
            CHECK(cdf(d, quantile(d, u)) == Approx(u).epsilon(1e-9));
        }
        for (double x : {0.1, 0.7, 1.3, 2.9})
        {
            INFO(to_string(family_of(d)) << " x=" << x);
            const double u = cdf(d, x);
            if (u > 1.0 - 1e-9) // tail: the CDF no longer resolves x
                continue;
            CHECK(quantile(d, u) == Approx(x).epsilon(1e-9));
        }
    }
}

TEST_CASE("closed-form anchors")
{
    // Log-logistic median is alpha; Rayleigh median sigma sqrt(2 ln 2); Weibull median scale (ln 2)^(1/k).
    CHECK(quantile(LogLogistic(1.7, 1.41), 0.5) == Approx(1.7).epsilon(1e-14));
    CHECK(cdf(LogLogistic(1.0, 2.0), 3.0) == Approx(9.0 / 10.0).epsilon(1e-14));
    CHECK(quantile(Rayleigh(2.0), 0.5) == Approx(2.0 * std::sqrt(2.0 * std::log(2.0))).epsilon(1e-14));
    CHECK(quantile(Weibull(3.0, 2.0), 0.5) == Approx(2.0 * std::cbrt(std::log(2.0))).epsilon(1e-14));
    // Nakagami m = 0.5 is a half-normal of variance omega.
    CHECK(cdf(Nakagami(0.5, 4.0), 2.0) == Approx(std::erf(2.0 / std::sqrt(2.0 * 4.0))).epsilon(1e-12));
    // Rician mean power equals omega.
    boost::math::quadrature::exp_sinh<double> es;
    const Rician r(4.0, 2.5);
    CHECK(es.integrate([&](double x)
                       { return x * x * pdf(r, x); },
                       0.0, INFINITY) == Approx(2.5).epsilon(1e-8));
}

TEST_CASE("degenerate members coincide with Rayleigh")
{
    for (double omega : {0.5, 1.0, 3.0})
    {
        const Rayleigh ray(std::sqrt(omega / 2.0));
        const Rician ric(0.0, omega);
        const Nakagami nak(1.0, omega);
        for (double x : {0.01, 0.2, 0.5, 1.0, 1.9, 4.0})
        {
            CHECK(ric.pdf(x) == Approx(ray.pdf(x)).epsilon(1e-12));
            CHECK(ric.cdf(x) == Approx(ray.cdf(x)).epsilon(1e-12));
            CHECK(nak.pdf(x) == Approx(ray.pdf(x)).epsilon(1e-12));
            CHECK(nak.cdf(x) == Approx(ray.cdf(x)).epsilon(1e-12));
        }
        for (double u : {0.01, 0.3, 0.5, 0.9, 0.999})
        {
            CHECK(ric.quantile(u) == Approx(ray.quantile(u)).epsilon(1e-12));
            CHECK(nak.quantile(u) == Approx(ray.quantile(u)).epsilon(1e-12));
        }
    }
}

TEST_CASE("sampler passes KS at the 1% level for every family")
{
    const std::size_t n = 100000;
    const double critical = 1.6276 / std::sqrt(static_cast<double>(n)); // asymptotic 1 % point
    std::uint64_t seed = 11;
    for (const auto &d : zoo())
    {
        Rng rng(seed++);
        std::vector<double> xs(n);
        for (auto &x : xs)
            x = sample_envelope(rng, d);
        INFO(to_string(family_of(d)));
        CHECK(ks_statistic(xs, d) < critical);
    }
}

TEST_CASE("parameter validation")
{
    CHECK_THROWS_AS(LogLogistic(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(LogLogistic(1.0, -1.0), std::domain_error);
    CHECK_THROWS_AS(Rician(-0.1, 1.0), std::domain_error);
    CHECK_THROWS_AS(Rician(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(Rayleigh(0.0), std::domain_error);
    CHECK_THROWS_AS(Nakagami(0.49, 1.0), std::domain_error);
    CHECK_THROWS_AS(Weibull(1.0, NAN), std::domain_error);
    const FadingDistribution d = Rayleigh(1.0);
    CHECK_THROWS_AS(pdf(d, -1.0), std::domain_error);
    CHECK_THROWS_AS(quantile(d, 0.0), std::domain_error);
    CHECK_THROWS_AS(quantile(d, 1.0), std::domain_error);
}

TEST_CASE("family registry")
{
    for (auto f : kAllFamilies)
        CHECK(parse_family(to_string(f)) == f);
    CHECK_THROWS_AS(parse_family("gamma"), std::invalid_argument);
    CHECK(parameter_count(FadingFamily::Rayleigh) == 1);
    CHECK(parameter_count(FadingFamily::Rician) == 2);
    const std::vector<double> p{1.0, 1.41};
    const auto d = make_distribution(FadingFamily::LogLogistic, p);
    CHECK(std::get<LogLogistic>(d).beta() == 1.41);
    CHECK(parameters(d)[0].name == "alpha");
    CHECK_THROWS_AS(make_distribution(FadingFamily::Rayleigh, p), std::invalid_argument);
}

TEST_CASE("empirical percentiles follow linear interpolation")
{
    const std::vector<double> s{1.0, 2.0, 4.0, 8.0};
    CHECK(empirical_quantile(s, 0.0) == 1.0);
    CHECK(empirical_quantile(s, 1.0) == 8.0);
    CHECK(empirical_quantile(s, 0.5) == 3.0);          // h = 1.5
    CHECK(empirical_quantile(s, 0.25) == Approx(1.75)); // h = 0.75
    CHECK_THROWS_AS(empirical_quantile(std::vector<double>{}, 0.5), std::domain_error);
    CHECK_THROWS_AS(empirical_quantile(s, 1.5), std::domain_error);
}

namespace
{
    // Sort-based percentile written without the library: rank (n-1) p, linear between neighbours.
    double brute_percentile(std::vector<double> v, double p)
    {
        std::sort(v.begin(), v.end());
        const double rank = p * static_cast<double>(v.size() - 1);
        const auto below = static_cast<std::size_t>(rank);
        if (below + 1 >= v.size())
            return v.back();
        const double w = rank - static_cast<double>(below);
        return v[below] * (1.0 - w) + v[below + 1] * w;
    }
}

TEST_CASE("fading depth on engineered samples")
{
    // 1001 samples: order statistic 10 is the 1 % point and 500 the median.
    std::vector<double> level(1001);
    for (std::size_t i = 0; i < level.size(); ++i)
    {
        if (i < 10)
            level[i] = -20.0 + static_cast<double>(i);
        else if (i == 10)
            level[i] = -5.88;
        else if (i < 500)
            level[i] = -5.88 + (5.88 - 0.169) * static_cast<double>(i - 10) / 490.0;
        else if (i == 500)
            level[i] = -0.169;
        else
            level[i] = -0.169 + 0.01 * static_cast<double>(i - 500);
    }
    std::reverse(level.begin(), level.end()); // order must not matter
    const auto st = fading_statistics(level);
    CHECK(st.p1_db == Approx(-5.88).margin(1e-12));
    CHECK(st.p50_db == Approx(-0.169).margin(1e-12));
    CHECK(st.depth_db == Approx(5.711).margin(0.01));
    CHECK(fading_depth(level) == Approx(5.711).margin(1e-9));
}

TEST_CASE("fading depth on Gaussian samples matches a brute-force percentile")
{
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u})
    {
        Rng rng(seed);
        std::normal_distribution<double> g(0.0, 5.0);
        std::vector<double> level(5000 + seed * 37);
        for (auto &x : level)
            x = g(rng);
        const double oracle = brute_percentile(level, 0.5) - brute_percentile(level, 0.01);
        CHECK(fading_depth(level) == Approx(oracle).margin(1e-9));
        const auto st = fading_statistics(level);
        CHECK(st.min_db == *std::min_element(level.begin(), level.end()));
        CHECK(st.max_db == *std::max_element(level.begin(), level.end()));
        CHECK(st.count == level.size());
    }
}

TEST_CASE("fading statistics warn on short samples and reject empty ones")
{
    std::vector<double> few(50, 0.0);
    few[3] = -1.0;
    ScopedWarningCapture cap;
    CHECK_NOTHROW(fading_statistics(few));
    CHECK(cap.messages().size() == 1);
    CHECK_THROWS_AS(fading_statistics(std::vector<double>{}), std::domain_error);
}
