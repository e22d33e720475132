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

#ifndef UAVCHAN_EXTRACTION_HPP
#define UAVCHAN_EXTRACTION_HPP

#include "diagnostics.hpp"
#include "fitting.hpp"
#include "geometry.hpp"
#include "propagation.hpp"
#include "stochastic.hpp"
#include "units.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Measurement analysis: split a loss trace into path loss, shadowing and fast fading with
// sliding local means, then fit each part.
//
//   PL0 = least-squares altitude model fitted to the trace
//   L   = PL0 + local mean of (trace - PL0) over 40 lambda
//   S   = PL0 + local mean of (trace - PL0) over lambda / 2
//   SF  = L - PL0,  FF = S - L,  residual = trace - S
//
// so PL0 + SF + FF + residual reproduces the trace sample by sample.

namespace uavchan
{
    struct TraceSample
    {
        double altitude_m;
        double loss_db;

        friend bool operator==(const TraceSample &, const TraceSample &) = default;
    };

    struct Trace
    {
        std::vector<TraceSample> samples;
        Frequency freq;
        double samples_per_meter = 62.5;
        ScenarioGeometry scenario{};

        explicit Trace(Frequency f) : freq(f) {}
        Trace(std::vector<TraceSample> s, Frequency f, double resolution, ScenarioGeometry sc = {})
            : samples(std::move(s)), freq(f), samples_per_meter(resolution), scenario(sc) {}

        std::size_t size() const { return samples.size(); }

        void validate() const
        {
            if (samples.size() < 2)
                throw std::domain_error("Trace: need at least 2 samples.");
            if (!(samples_per_meter > 0.0) || !std::isfinite(samples_per_meter))
                throw std::domain_error("Trace: spatial resolution must be positive.");
            scenario.validate();
            for (std::size_t i = 0; i < samples.size(); ++i)
            {
                const auto &s = samples[i];
                if (!(s.altitude_m >= 0.0) || !std::isfinite(s.altitude_m) || !std::isfinite(s.loss_db))
                    throw std::domain_error("Trace: sample " + std::to_string(i) + " is not finite / has negative altitude.");
                if (i > 0 && s.altitude_m < samples[i - 1].altitude_m)
                    throw std::domain_error("Trace: altitudes must be non-decreasing (sort the trace first).");
            }
        }

        std::vector<double> altitudes() const
        {
            std::vector<double> v(samples.size());
            std::transform(samples.begin(), samples.end(), v.begin(), [](const TraceSample &s)
                           { return s.altitude_m; });
            return v;
        }
        std::vector<double> losses() const
        {
            std::vector<double> v(samples.size());
            std::transform(samples.begin(), samples.end(), v.begin(), [](const TraceSample &s)
                           { return s.loss_db; });
            return v;
        }
    };

    // Stable sort by altitude; the only preprocessing applied to raw traces.
    inline Trace sorted_by_altitude(Trace t)
    {
        std::stable_sort(t.samples.begin(), t.samples.end(), [](const TraceSample &a, const TraceSample &b)
                         { return a.altitude_m < b.altitude_m; });
        return t;
    }

    // ---- Local mean -------------------------------------------------------------------------------

    enum class AveragingDomain
    {
        LinearPower, // average 10^(-loss/10), convert back
        Decibel      // average the dB values directly
    };

    // Centered box of `window_samples` sample spacings. Sample j occupies [j - 1/2, j + 1/2] and is weighted
    // by its overlap with the box, so fractional windows are exact. Windows shrink at the edges.
    // A window shorter than one spacing returns the input unchanged with a warning.
    inline std::vector<double> local_mean_db(std::span<const double> loss_db, double window_samples,
                                             AveragingDomain domain = AveragingDomain::LinearPower)
    {
        const std::size_t n = loss_db.size();
        std::vector<double> out(loss_db.begin(), loss_db.end());
        if (n == 0)
            return out;
        if (!(window_samples >= 1.0))
        {
            warn("local mean window of " + std::to_string(window_samples) +
                 " samples is shorter than one sample spacing; returning input");
            return out;
        }

        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = domain == AveragingDomain::LinearPower ? db_to_linear(-loss_db[i]) : loss_db[i];

        const double reach = 0.5 * window_samples - 0.5;
        const double full = std::floor(reach);
        const double frac = reach - full;
        const auto k = static_cast<std::ptrdiff_t>(std::min(full, static_cast<double>(n)));
        const auto sn = static_cast<std::ptrdiff_t>(n);

        for (std::ptrdiff_t i = 0; i < sn; ++i)
        {
            const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - k);
            const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(sn - 1, i + k);
            double sum = 0.0;
            for (std::ptrdiff_t j = lo; j <= hi; ++j)
                sum += v[j];
            double weight = static_cast<double>(hi - lo + 1);
            if (frac > 0.0)
            {
                if (i - k - 1 >= 0)
                {
                    sum += frac * v[i - k - 1];
                    weight += frac;
                }
                if (i + k + 1 < sn)
                {
                    sum += frac * v[i + k + 1];
                    weight += frac;
                }
            }
            const double mean = sum / weight;
            out[i] = domain == AveragingDomain::LinearPower ? -linear_to_db(mean) : mean;
        }
        return out;
    }

    inline double window_in_samples(double window_wavelengths, Frequency f, double samples_per_meter)
    {
        if (!(window_wavelengths > 0.0))
            throw std::domain_error("local_mean: window length must be positive.");
        return window_wavelengths * f.wavelength_m() * samples_per_meter;
    }

    inline Trace local_mean(const Trace &trace, double window_wavelengths,
                            AveragingDomain domain = AveragingDomain::LinearPower)
    {
        trace.validate();
        const auto smoothed = local_mean_db(trace.losses(),
                                            window_in_samples(window_wavelengths, trace.freq, trace.samples_per_meter),
                                            domain);
        Trace out = trace;
        for (std::size_t i = 0; i < out.samples.size(); ++i)
            out.samples[i].loss_db = smoothed[i];
        return out;
    }

    // Local mean applied independently to each contiguous run of equal link state, so a window never
    // mixes LOS and NLOS samples.
    inline std::vector<double> local_mean_by_run(std::span<const double> loss_db, std::span<const LinkState> state,
                                                 double window_samples, AveragingDomain domain)
    {
        std::vector<double> out(loss_db.size());
        std::size_t start = 0;
        while (start < loss_db.size())
        {
            std::size_t end = start + 1;
            while (end < loss_db.size() && state[end] == state[start])
                ++end;
            const auto part = local_mean_db(loss_db.subspan(start, end - start), window_samples, domain);
            std::copy(part.begin(), part.end(), out.begin() + static_cast<std::ptrdiff_t>(start));
            start = end;
        }
        return out;
    }

    // ---- Altitude model fit -----------------------------------------------------------------------

    enum class InterceptMode
    {
        FreeIntercepts,  // fit intercept and altitude factor per condition
        FixedIntercepts  // keep the base intercepts, fit the altitude factor only
    };

    struct AltitudeFit
    {
        PathLossParams params;
        double rms_los_db = 0.0;
        double rms_nlos_db = 0.0;
        double rms_db = 0.0;
        std::size_t n_los = 0;
        std::size_t n_nlos = 0;
    };

    namespace detail
    {
        struct LineFit
        {
            double intercept;
            double n; // PL decreases by n dB per metre
            double sse;
        };

        inline LineFit fit_condition(std::span<const double> h, std::span<const double> y, InterceptMode mode,
                                     double fixed_intercept, LinkState state)
        {
            const double cnt = static_cast<double>(h.size());
            LineFit f{};
            if (mode == InterceptMode::FreeIntercepts)
            {
                const double hbar = std::accumulate(h.begin(), h.end(), 0.0) / cnt;
                const double ybar = std::accumulate(y.begin(), y.end(), 0.0) / cnt;
                double sxx = 0.0, sxy = 0.0;
                for (std::size_t i = 0; i < h.size(); ++i)
                {
                    sxx += (h[i] - hbar) * (h[i] - hbar);
                    sxy += (h[i] - hbar) * (y[i] - ybar);
                }
                if (!(sxx > 1e-12 * std::max(1.0, hbar * hbar) * cnt))
                    throw FitError("fit_altitude_model: " + std::string(to_string(state)) +
                                   " samples span a single altitude; slope is not identifiable.");
                const double slope = sxy / sxx;
                f.n = -slope;
                f.intercept = ybar - slope * hbar;
            }
            else
            {
                double shh = 0.0, shy = 0.0;
                for (std::size_t i = 0; i < h.size(); ++i)
                {
                    shh += h[i] * h[i];
                    shy += h[i] * (y[i] - fixed_intercept);
                }
                if (!(shh > 0.0))
                    throw FitError("fit_altitude_model: " + std::string(to_string(state)) +
                                   " samples all at zero altitude; slope is not identifiable.");
                f.n = -shy / shh;
                f.intercept = fixed_intercept;
            }
            for (std::size_t i = 0; i < h.size(); ++i)
            {
                const double r = y[i] - (f.intercept - f.n * h[i]);
                f.sse += r * r;
            }
            return f;
        }
    }

    // Per condition, ordinary least squares of y = PL - k_d log10(d3D) - k_f log10(f_GHz) on altitude.
    // `base` supplies the fixed coefficients (and the intercepts in FixedIntercepts mode). A condition
    // without samples keeps the base values.
    inline AltitudeFit fit_altitude_model(const Trace &trace, InterceptMode mode = InterceptMode::FreeIntercepts,
                                          const PathLossParams &base = PathLossParams{})
    {
        trace.validate();
        base.validate();
        std::vector<double> h[2], y[2];
        for (const auto &s : trace.samples)
        {
            const auto g = link_geometry(trace.scenario, s.altitude_m);
            const int c = g.los == LinkState::Los ? 0 : 1;
            h[c].push_back(s.altitude_m);
            y[c].push_back(s.loss_db - base.dist_exponent_coeff * std::log10(g.d3d_m) -
                           base.freq_coeff * std::log10(trace.freq.ghz()));
        }

        AltitudeFit out;
        out.params = base;
        out.params.name = "fitted";
        out.n_los = h[0].size();
        out.n_nlos = h[1].size();
        double sse_total = 0.0;
        for (int c = 0; c < 2; ++c)
        {
            const auto state = c == 0 ? LinkState::Los : LinkState::Nlos;
            if (h[c].empty())
            {
                warn("fit_altitude_model: no " + std::string(to_string(state)) + " samples; keeping base parameters");
                continue;
            }
            const auto f = detail::fit_condition(h[c], y[c], mode, base.intercept(state), state);
            const double rms = std::sqrt(f.sse / static_cast<double>(h[c].size()));
            sse_total += f.sse;
            if (c == 0)
            {
                out.params.intercept_los_db = f.intercept;
                out.params.n_los = f.n;
                out.rms_los_db = rms;
            }
            else
            {
                out.params.intercept_nlos_db = f.intercept;
                out.params.n_nlos = f.n;
                out.rms_nlos_db = rms;
            }
        }
        out.rms_db = std::sqrt(sse_total / static_cast<double>(trace.size()));
        return out;
    }

    // ---- Gaussian shadowing fit -------------------------------------------------------------------

    struct ShadowFit
    {
        ShadowingParams params; // sample mean, unbiased standard deviation
        double max_abs_db;
        std::size_t count;
    };

    inline ShadowFit fit_gaussian(std::span<const double> sf_db)
    {
        if (sf_db.size() < 2)
            throw std::domain_error("fit_gaussian: need at least 2 samples.");
        const double n = static_cast<double>(sf_db.size());
        const double mean = std::accumulate(sf_db.begin(), sf_db.end(), 0.0) / n;
        double ss = 0.0, max_abs = 0.0;
        for (double v : sf_db)
        {
            ss += (v - mean) * (v - mean);
            max_abs = std::max(max_abs, std::abs(v));
        }
        return {{mean, std::sqrt(ss / (n - 1.0))}, max_abs, sf_db.size()};
    }

    // ---- Decomposition ----------------------------------------------------------------------------

    struct DecomposeOptions
    {
        double large_scale_wavelengths = 40.0;
        double small_scale_wavelengths = 0.5;
        AveragingDomain domain = AveragingDomain::LinearPower;
        InterceptMode mode = InterceptMode::FreeIntercepts;
        PathLossParams base{};
        bool split_windows_at_los_change = true;
        // Average loss - PL0_fit instead of the raw loss; keeps a steep altitude trend from biasing linear-power means.
        bool detrend_before_averaging = true;
    };

    struct Decomposition
    {
        std::vector<double> altitude_m;
        std::vector<LinkState> state;
        std::vector<double> loss_db;
        std::vector<double> large_scale_db; // L
        std::vector<double> small_scale_db; // S
        std::vector<double> pl0_fit_db;
        std::vector<double> sf_db;
        std::vector<double> ff_db;
        std::vector<double> residual_db;
        AltitudeFit fit;

        std::size_t size() const { return altitude_m.size(); }
    };

    inline Decomposition decompose(const Trace &trace, const DecomposeOptions &opt = {})
    {
        trace.validate();
        Decomposition d;
        d.altitude_m = trace.altitudes();
        d.loss_db = trace.losses();
        d.state.reserve(trace.size());
        for (double h : d.altitude_m)
            d.state.push_back(los_state(trace.scenario, h));

        d.fit = fit_altitude_model(trace, opt.mode, opt.base);

        const std::size_t n = trace.size();
        d.pl0_fit_db.resize(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            const auto dist = link_distances(trace.scenario, d.altitude_m[i]);
            d.pl0_fit_db[i] = pl_altitude_model_db(dist.d3d_m, trace.freq, d.altitude_m[i], d.state[i], d.fit.params);
        }

        std::vector<double> input = d.loss_db;
        if (opt.detrend_before_averaging)
            for (std::size_t i = 0; i < n; ++i)
                input[i] -= d.pl0_fit_db[i];

        const double wl = window_in_samples(opt.large_scale_wavelengths, trace.freq, trace.samples_per_meter);
        const double ws = window_in_samples(opt.small_scale_wavelengths, trace.freq, trace.samples_per_meter);
        if (opt.split_windows_at_los_change)
        {
            d.large_scale_db = local_mean_by_run(input, d.state, wl, opt.domain);
            d.small_scale_db = local_mean_by_run(input, d.state, ws, opt.domain);
        }
        else
        {
            d.large_scale_db = local_mean_db(input, wl, opt.domain);
            d.small_scale_db = local_mean_db(input, ws, opt.domain);
        }
        if (opt.detrend_before_averaging)
            for (std::size_t i = 0; i < n; ++i)
            {
                d.large_scale_db[i] += d.pl0_fit_db[i];
                d.small_scale_db[i] += d.pl0_fit_db[i];
            }

        d.sf_db.resize(n);
        d.ff_db.resize(n);
        d.residual_db.resize(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            d.sf_db[i] = d.large_scale_db[i] - d.pl0_fit_db[i];
            d.ff_db[i] = d.small_scale_db[i] - d.large_scale_db[i];
            d.residual_db[i] = d.loss_db[i] - d.small_scale_db[i];
        }
        return d;
    }

    // ---- Envelopes and the full report ------------------------------------------------------------

    struct Envelope
    {
        std::vector<double> samples; // median-normalized received envelope
        double median_scale;         // median of 10^(-FF/20) before normalization
    };

    // FF is a loss term, so the received envelope is 10^(-FF/20).
    inline Envelope envelope_from_ff(std::span<const double> ff_db)
    {
        if (ff_db.empty())
            throw std::domain_error("envelope_from_ff: empty input.");
        Envelope e;
        e.samples.resize(ff_db.size());
        for (std::size_t i = 0; i < ff_db.size(); ++i)
            e.samples[i] = std::pow(10.0, -ff_db[i] / 20.0);
        std::vector<double> sorted = e.samples;
        std::sort(sorted.begin(), sorted.end());
        e.median_scale = empirical_quantile(sorted, 0.5);
        for (double &x : e.samples)
            x /= e.median_scale;
        return e;
    }

    struct ConditionReport
    {
        LinkState state;
        std::size_t sample_count = 0;
        ShadowFit shadowing{};
        FadingStatistics fading{}; // received-level fast fading, dB
        double envelope_median_scale = 1.0;
        std::vector<FitResult> ranking;
    };

    struct FitReport
    {
        double frequency_hz = 0.0;
        std::size_t sample_count = 0;
        AltitudeFit pathloss;
        std::vector<ConditionReport> conditions; // LOS first, then NLOS; only conditions present in the trace

        const ConditionReport *condition(LinkState s) const
        {
            for (const auto &c : conditions)
                if (c.state == s)
                    return &c;
            return nullptr;
        }
    };

    struct AnalysisOptions
    {
        DecomposeOptions decompose{};
        std::vector<FadingFamily> families{kAllFamilies.begin(), kAllFamilies.end()};
    };

    struct Analysis
    {
        Decomposition decomposition;
        FitReport report;
    };

    inline Analysis analyze(const Trace &trace, const AnalysisOptions &opt = {})
    {
        Analysis a{decompose(trace, opt.decompose), {}};
        const auto &d = a.decomposition;
        a.report.frequency_hz = trace.freq.hz();
        a.report.sample_count = d.size();
        a.report.pathloss = d.fit;

        for (auto state : {LinkState::Los, LinkState::Nlos})
        {
            std::vector<double> sf, ff, level;
            for (std::size_t i = 0; i < d.size(); ++i)
                if (d.state[i] == state)
                {
                    sf.push_back(d.sf_db[i]);
                    ff.push_back(d.ff_db[i]);
                    level.push_back(-d.ff_db[i]);
                }
            if (sf.empty())
                continue;

            ConditionReport c;
            c.state = state;
            c.sample_count = sf.size();
            c.shadowing = fit_gaussian(sf);
            c.fading = fading_statistics(level);
            const auto env = envelope_from_ff(ff);
            c.envelope_median_scale = env.median_scale;
            try
            {
                c.ranking = select_distribution(env.samples, opt.families);
            }
            catch (const FitError &e)
            {
                // A fading-free trace leaves nothing to fit; the rest of the report still stands.
                warn(std::string(to_string(state)) + " fading fit skipped: " + e.what());
            }
            a.report.conditions.push_back(std::move(c));
        }
        return a;
    }
}

#endif
