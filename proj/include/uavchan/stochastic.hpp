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

#ifndef UAVCHAN_STOCHASTIC_HPP
#define UAVCHAN_STOCHASTIC_HPP

#include "diagnostics.hpp"
#include "units.hpp"

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

// Envelope-domain fading laws and dB-domain shadowing.
//
// Parameterizations:
//   LogLogistic(alpha, beta)  f = (b/a)(x/a)^(b-1) / (1 + (x/a)^b)^2, alpha is the median
//   Rayleigh(sigma)           f = x/s^2 exp(-x^2 / 2s^2)
//   Rician(K, Omega)          nu^2 = K Omega/(K+1), s^2 = Omega / (2(K+1)), Omega = E[x^2]
//   Nakagami(m, Omega)        m >= 1/2, Omega = E[x^2]
//   Weibull(shape k, scale l) f = (k/l)(x/l)^(k-1) exp(-(x/l)^k)

namespace uavchan
{
    using Rng = std::mt19937_64;

    // Uniform draw on the open interval (0, 1) from the top 53 bits.
    inline double open_unit(Rng &rng)
    {
        return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    }

    inline double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

    namespace detail
    {
        inline void require(bool ok, const char *msg)
        {
            if (!ok)
                throw std::domain_error(msg);
        }

        inline void check_envelope(double x)
        {
            if (!(x >= 0.0) || std::isnan(x))
                throw std::domain_error("Envelope value must be non-negative.");
        }

        inline void check_probability(double u)
        {
            if (!(u > 0.0 && u < 1.0))
                throw std::domain_error("Probability must lie in the open interval (0, 1).");
        }

        inline bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

        // log I0(z) for z >= 0 without overflow.
        inline double log_bessel_i0(double z)
        {
            if (z < 500.0)
                return std::log(std::cyl_bessel_i(0.0, z));
            const double r = 1.0 / (8.0 * z);
            return z - 0.5 * std::log(2.0 * kPi * z) + std::log1p(r + 4.5 * r * r + 37.5 * r * r * r);
        }
    }

    // ---- Shadowing --------------------------------------------------------------------------------

    struct ShadowingParams
    {
        double mean_db = 0.0;
        double sigma_db = 0.0;

        void validate() const
        {
            detail::require(std::isfinite(mean_db), "ShadowingParams: mean must be finite.");
            detail::require(sigma_db >= 0.0 && std::isfinite(sigma_db), "ShadowingParams: sigma must be >= 0.");
        }
        friend bool operator==(const ShadowingParams &, const ShadowingParams &) = default;
    };

    inline double sample_shadowing(Rng &rng, const ShadowingParams &p)
    {
        p.validate();
        std::normal_distribution<double> n(0.0, 1.0);
        return p.mean_db + p.sigma_db * n(rng);
    }

    // ---- Envelope distributions -------------------------------------------------------------------

    enum class FadingFamily
    {
        LogLogistic,
        Rician,
        Rayleigh,
        NakagamiM,
        Weibull
    };

    inline constexpr std::array<FadingFamily, 5> kAllFamilies = {FadingFamily::LogLogistic, FadingFamily::Rician,
                                                                 FadingFamily::Rayleigh, FadingFamily::NakagamiM,
                                                                 FadingFamily::Weibull};

    inline std::string_view to_string(FadingFamily f)
    {
        switch (f)
        {
        case FadingFamily::LogLogistic:
            return "loglogistic";
        case FadingFamily::Rician:
            return "rician";
        case FadingFamily::Rayleigh:
            return "rayleigh";
        case FadingFamily::NakagamiM:
            return "nakagami";
        case FadingFamily::Weibull:
            return "weibull";
        }
        return "unknown";
    }

    inline FadingFamily parse_family(std::string_view s)
    {
        for (auto f : kAllFamilies)
            if (to_string(f) == s)
                return f;
        throw std::invalid_argument("Unknown fading family '" + std::string(s) + "'.");
    }

    class LogLogistic
    {
    public:
        static constexpr FadingFamily family = FadingFamily::LogLogistic;

        LogLogistic(double alpha, double beta) : alpha_(alpha), beta_(beta)
        {
            detail::require(detail::positive_finite(alpha) && detail::positive_finite(beta),
                            "LogLogistic: alpha and beta must be positive.");
        }
        double alpha() const { return alpha_; }
        double beta() const { return beta_; }

        double log_pdf(double x) const
        {
            detail::check_envelope(x);
            if (x == 0.0)
                return beta_ > 1.0 ? -std::numeric_limits<double>::infinity()
                                   : (beta_ == 1.0 ? -std::log(alpha_) : std::numeric_limits<double>::infinity());
            const double lz = std::log(x / alpha_);
            const double t = beta_ * lz;
            // log1p(e^t) evaluated without overflow
            const double softplus = t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
            return std::log(beta_ / alpha_) + (beta_ - 1.0) * lz - 2.0 * softplus;
        }
        double pdf(double x) const { return std::exp(log_pdf(x)); }
        double cdf(double x) const
        {
            detail::check_envelope(x);
            if (x == 0.0)
                return 0.0;
            return 1.0 / (1.0 + std::exp(-beta_ * std::log(x / alpha_)));
        }
        double quantile(double u) const
        {
            detail::check_probability(u);
            return alpha_ * std::exp((std::log(u) - std::log1p(-u)) / beta_);
        }

        friend bool operator==(const LogLogistic &, const LogLogistic &) = default;

    private:
        double alpha_;
        double beta_;
    };

    class Rayleigh
    {
    public:
        static constexpr FadingFamily family = FadingFamily::Rayleigh;

        explicit Rayleigh(double sigma) : sigma_(sigma)
        {
            detail::require(detail::positive_finite(sigma), "Rayleigh: sigma must be positive.");
        }
        double sigma() const { return sigma_; }

        double log_pdf(double x) const
        {
            detail::check_envelope(x);
            const double s2 = sigma_ * sigma_;
            return std::log(x) - std::log(s2) - x * x / (2.0 * s2);
        }
        double pdf(double x) const
        {
            detail::check_envelope(x);
            const double s2 = sigma_ * sigma_;
            return x / s2 * std::exp(-x * x / (2.0 * s2));
        }
        double cdf(double x) const
        {
            detail::check_envelope(x);
            return -std::expm1(-x * x / (2.0 * sigma_ * sigma_));
        }
        double quantile(double u) const
        {
            detail::check_probability(u);
            return sigma_ * std::sqrt(-2.0 * std::log1p(-u));
        }

        friend bool operator==(const Rayleigh &, const Rayleigh &) = default;

    private:
        double sigma_;
    };

    class Rician
    {
    public:
        static constexpr FadingFamily family = FadingFamily::Rician;

        Rician(double k_factor, double omega) : k_(k_factor), omega_(omega)
        {
            detail::require(k_factor >= 0.0 && std::isfinite(k_factor), "Rician: K-factor must be >= 0.");
            detail::require(detail::positive_finite(omega), "Rician: Omega must be positive.");
            sigma2_ = omega_ / (2.0 * (k_ + 1.0));
            nu_ = std::sqrt(k_ * omega_ / (k_ + 1.0));
        }
        double k_factor() const { return k_; }
        double omega() const { return omega_; }
        double nu() const { return nu_; }
        double sigma() const { return std::sqrt(sigma2_); }

        double log_pdf(double x) const
        {
            detail::check_envelope(x);
            return std::log(x) - std::log(sigma2_) - (x * x + nu_ * nu_) / (2.0 * sigma2_) +
                   detail::log_bessel_i0(x * nu_ / sigma2_);
        }
        double pdf(double x) const
        {
            detail::check_envelope(x);
            if (x == 0.0)
                return 0.0;
            return std::exp(log_pdf(x));
        }
        // (x/s)^2 is non-central chi-squared with 2 degrees of freedom and non-centrality (nu/s)^2.
        double cdf(double x) const
        {
            detail::check_envelope(x);
            if (k_ == 0.0)
                return -std::expm1(-x * x / (2.0 * sigma2_));
            return boost::math::cdf(chi2(), x * x / sigma2_);
        }
        double quantile(double u) const
        {
            detail::check_probability(u);
            if (k_ == 0.0)
                return std::sqrt(-2.0 * sigma2_ * std::log1p(-u));
            return std::sqrt(boost::math::quantile(chi2(), u) * sigma2_);
        }

        friend bool operator==(const Rician &, const Rician &) = default;

    private:
        boost::math::non_central_chi_squared_distribution<double> chi2() const
        {
            return boost::math::non_central_chi_squared_distribution<double>(2.0, nu_ * nu_ / sigma2_);
        }
        double k_;
        double omega_;
        double sigma2_;
        double nu_;
    };

    class Nakagami
    {
    public:
        static constexpr FadingFamily family = FadingFamily::NakagamiM;
        static constexpr double kMinShape = 0.5;

        Nakagami(double m, double omega) : m_(m), omega_(omega)
        {
            detail::require(m >= kMinShape && std::isfinite(m), "Nakagami: m must be >= 0.5.");
            detail::require(detail::positive_finite(omega), "Nakagami: Omega must be positive.");
        }
        double m() const { return m_; }
        double omega() const { return omega_; }

        double log_pdf(double x) const
        {
            detail::check_envelope(x);
            return std::log(2.0) + m_ * std::log(m_ / omega_) - std::lgamma(m_) + (2.0 * m_ - 1.0) * std::log(x) -
                   m_ * x * x / omega_;
        }
        double pdf(double x) const
        {
            detail::check_envelope(x);
            if (x == 0.0)
                return m_ == kMinShape ? std::exp(log_pdf(0.0)) : 0.0;
            return std::exp(log_pdf(x));
        }
        double cdf(double x) const
        {
            detail::check_envelope(x);
            return boost::math::gamma_p(m_, m_ * x * x / omega_);
        }
        double quantile(double u) const
        {
            detail::check_probability(u);
            return std::sqrt(boost::math::gamma_p_inv(m_, u) * omega_ / m_);
        }

        friend bool operator==(const Nakagami &, const Nakagami &) = default;

    private:
        double m_;
        double omega_;
    };

    class Weibull
    {
    public:
        static constexpr FadingFamily family = FadingFamily::Weibull;

        Weibull(double shape, double scale) : k_(shape), lambda_(scale)
        {
            detail::require(detail::positive_finite(shape) && detail::positive_finite(scale),
                            "Weibull: shape and scale must be positive.");
        }
        double shape() const { return k_; }
        double scale() const { return lambda_; }

        double log_pdf(double x) const
        {
            detail::check_envelope(x);
            const double z = x / lambda_;
            return std::log(k_ / lambda_) + (k_ - 1.0) * std::log(z) - std::pow(z, k_);
        }
        double pdf(double x) const
        {
            detail::check_envelope(x);
            const double z = x / lambda_;
            if (x == 0.0)
                return k_ > 1.0 ? 0.0 : (k_ == 1.0 ? 1.0 / lambda_ : std::numeric_limits<double>::infinity());
            return (k_ / lambda_) * std::pow(z, k_ - 1.0) * std::exp(-std::pow(z, k_));
        }
        double cdf(double x) const
        {
            detail::check_envelope(x);
            return -std::expm1(-std::pow(x / lambda_, k_));
        }
        double quantile(double u) const
        {
            detail::check_probability(u);
            return lambda_ * std::pow(-std::log1p(-u), 1.0 / k_);
        }

        friend bool operator==(const Weibull &, const Weibull &) = default;

    private:
        double k_;
        double lambda_;
    };

    using FadingDistribution = std::variant<LogLogistic, Rician, Rayleigh, Nakagami, Weibull>;

    inline FadingFamily family_of(const FadingDistribution &d)
    {
        return std::visit([](const auto &x)
                          { return std::decay_t<decltype(x)>::family; },
                          d);
    }

    inline double pdf(const FadingDistribution &d, double x)
    {
        return std::visit([x](const auto &dist)
                          { return dist.pdf(x); },
                          d);
    }
    inline double log_pdf(const FadingDistribution &d, double x)
    {
        return std::visit([x](const auto &dist)
                          { return dist.log_pdf(x); },
                          d);
    }
    inline double cdf(const FadingDistribution &d, double x)
    {
        return std::visit([x](const auto &dist)
                          { return dist.cdf(x); },
                          d);
    }
    inline double quantile(const FadingDistribution &d, double u)
    {
        return std::visit([u](const auto &dist)
                          { return dist.quantile(u); },
                          d);
    }

    inline double log_likelihood(const FadingDistribution &d, std::span<const double> xs)
    {
        double ll = 0.0;
        for (double x : xs)
            ll += log_pdf(d, x);
        return ll;
    }

    inline std::size_t parameter_count(FadingFamily f) { return f == FadingFamily::Rayleigh ? 1 : 2; }

    struct NamedParameter
    {
        std::string_view name;
        double value;
    };

    inline std::vector<NamedParameter> parameters(const FadingDistribution &d)
    {
        struct Visitor
        {
            std::vector<NamedParameter> operator()(const LogLogistic &x) const { return {{"alpha", x.alpha()}, {"beta", x.beta()}}; }
            std::vector<NamedParameter> operator()(const Rician &x) const { return {{"k_factor", x.k_factor()}, {"omega", x.omega()}}; }
            std::vector<NamedParameter> operator()(const Rayleigh &x) const { return {{"sigma", x.sigma()}}; }
            std::vector<NamedParameter> operator()(const Nakagami &x) const { return {{"m", x.m()}, {"omega", x.omega()}}; }
            std::vector<NamedParameter> operator()(const Weibull &x) const { return {{"shape", x.shape()}, {"scale", x.scale()}}; }
        };
        return std::visit(Visitor{}, d);
    }

    // Parameters in the order reported by parameters().
    inline FadingDistribution make_distribution(FadingFamily f, std::span<const double> p)
    {
        if (p.size() != parameter_count(f))
            throw std::invalid_argument("Family '" + std::string(to_string(f)) + "' takes " +
                                        std::to_string(parameter_count(f)) + " parameter(s).");
        switch (f)
        {
        case FadingFamily::LogLogistic:
            return LogLogistic(p[0], p[1]);
        case FadingFamily::Rician:
            return Rician(p[0], p[1]);
        case FadingFamily::Rayleigh:
            return Rayleigh(p[0]);
        case FadingFamily::NakagamiM:
            return Nakagami(p[0], p[1]);
        case FadingFamily::Weibull:
            return Weibull(p[0], p[1]);
        }
        throw std::invalid_argument("Unknown fading family.");
    }

    inline double sample_envelope(Rng &rng, const FadingDistribution &d)
    {
        struct Visitor
        {
            Rng &rng;
            double operator()(const Rician &r) const
            {
                std::normal_distribution<double> n(0.0, 1.0);
                const double s = r.sigma();
                const double i = r.nu() + s * n(rng);
                const double q = s * n(rng);
                return std::hypot(i, q);
            }
            double operator()(const Nakagami &m) const
            {
                std::gamma_distribution<double> g(m.m(), m.omega() / m.m());
                return std::sqrt(g(rng));
            }
            double operator()(const LogLogistic &d) const { return d.quantile(open_unit(rng)); }
            double operator()(const Rayleigh &d) const { return d.quantile(open_unit(rng)); }
            double operator()(const Weibull &d) const { return d.quantile(open_unit(rng)); }
        };
        return std::visit(Visitor{rng}, d);
    }

    // ---- Empirical percentiles and fading depth ---------------------------------------------------

    // Linear interpolation between order statistics: h = (n-1) p, x[floor h] + frac(h) (x[floor h + 1] - x[floor h]).
    // `sorted` must be ascending.
    inline double empirical_quantile(std::span<const double> sorted, double p)
    {
        if (sorted.empty())
            throw std::domain_error("empirical_quantile: empty sample.");
        if (!(p >= 0.0 && p <= 1.0))
            throw std::domain_error("empirical_quantile: p must lie in [0, 1].");
        const double h = static_cast<double>(sorted.size() - 1) * p;
        const auto lo = static_cast<std::size_t>(std::floor(h));
        if (lo + 1 >= sorted.size())
            return sorted.back();
        return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
    }

    inline constexpr std::size_t kMinFadingDepthSamples = 200;

    struct FadingStatistics
    {
        double p1_db;        // 1 % level
        double p50_db;       // median level
        double depth_db;     // p50 - p1
        double min_db;       // deepest fade (signed)
        double max_db;       // strongest enhancement (signed)
        double max_abs_db;   // max |level|
        std::size_t count;
    };

    // Statistics of received-level fading samples in dB (negative = fade).
    inline FadingStatistics fading_statistics(std::span<const double> level_db)
    {
        if (level_db.empty())
            throw std::domain_error("fading_statistics: empty sample.");
        if (level_db.size() < kMinFadingDepthSamples)
            warn("fading depth from " + std::to_string(level_db.size()) + " samples; the 1 % level needs at least " +
                 std::to_string(kMinFadingDepthSamples));
        std::vector<double> s(level_db.begin(), level_db.end());
        std::sort(s.begin(), s.end());
        FadingStatistics st{};
        st.p1_db = empirical_quantile(s, 0.01);
        st.p50_db = empirical_quantile(s, 0.50);
        st.depth_db = st.p50_db - st.p1_db;
        st.min_db = s.front();
        st.max_db = s.back();
        st.max_abs_db = std::max(std::abs(s.front()), std::abs(s.back()));
        st.count = s.size();
        return st;
    }

    inline double fading_depth(std::span<const double> level_db) { return fading_statistics(level_db).depth_db; }
}

#endif
