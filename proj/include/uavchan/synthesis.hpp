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

#ifndef UAVCHAN_SYNTHESIS_HPP
#define UAVCHAN_SYNTHESIS_HPP

#include "diagnostics.hpp"
#include "extraction.hpp"
#include "geometry.hpp"
#include "propagation.hpp"
#include "stochastic.hpp"
#include "units.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uavchan
{
    // Per link-state stochastic terms. No fading distribution means a unit envelope (0 dB).
    struct ConditionModel
    {
        ShadowingParams shadowing{};
        std::optional<FadingDistribution> fading{};
    };

    struct ChannelModel
    {
        std::string name = "custom";
        PathLossParams pathloss{};
        ConditionModel los{};
        ConditionModel nlos{};

        const ConditionModel &condition(LinkState s) const { return s == LinkState::Los ? los : nlos; }
    };

    // Generator presets. The shadowing sigmas (2 dB LOS, 6 dB NLOS) are modelling defaults, not
    // measured values; the log-logistic shapes are per link state at each carrier.
    inline ChannelModel paper_1ghz_model()
    {
        return {"paper-1ghz", PathLossParams::paper_1ghz(), {{0.0, 2.0}, LogLogistic(1.0, 1.41)},
                {{0.0, 6.0}, LogLogistic(1.0, 1.74)}};
    }
    inline ChannelModel paper_4ghz_model()
    {
        return {"paper-4ghz", PathLossParams::paper_4ghz(), {{0.0, 2.0}, LogLogistic(1.0, 1.12)},
                {{0.0, 6.0}, LogLogistic(1.0, 1.38)}};
    }
    inline Frequency paper_preset_frequency(const std::string &preset)
    {
        if (preset == "paper-1ghz")
            return Frequency::from_ghz(1.0);
        if (preset == "paper-4ghz")
            return Frequency::from_ghz(4.0);
        throw std::invalid_argument("Unknown preset '" + preset + "'.");
    }

    struct FlightConfig
    {
        ScenarioGeometry scenario{};
        Frequency freq = Frequency::from_ghz(4.0);
        double altitude_min_m = 0.0;
        double altitude_max_m = 24.0;
        double samples_per_meter = 62.5; // stored samples per metre of climb
        int averaging_factor = 20;       // readings power-averaged into one stored sample
        int round_trips = 1;             // each round trip is an ascent and a descent
        std::uint64_t seed = 1;
        double shadow_segment_wavelengths = 40.0;  // spacing of independent shadowing anchors
        double ff_correlation_wavelengths = 1.0;   // fast-fading correlation length, 0 = independent samples
        double reading_noise_db = 0.0;             // per-reading receiver noise, dB standard deviation

        void validate() const
        {
            scenario.validate();
            auto fail = [](const std::string &m)
            { throw ConfigError("FlightConfig: " + m); };
            if (!(altitude_min_m >= 0.0) || !(altitude_min_m < altitude_max_m) || !std::isfinite(altitude_max_m))
                fail("need 0 <= altitude_min < altitude_max.");
            if (!(samples_per_meter > 0.0) || !std::isfinite(samples_per_meter))
                fail("samples_per_meter must be positive.");
            if (averaging_factor < 1)
                fail("averaging_factor must be >= 1.");
            if (round_trips < 1)
                fail("round_trips must be >= 1.");
            if (!(shadow_segment_wavelengths > 0.0))
                fail("shadow_segment_wavelengths must be positive.");
            if (!(ff_correlation_wavelengths >= 0.0))
                fail("ff_correlation_wavelengths must be >= 0.");
            if (!(reading_noise_db >= 0.0))
                fail("reading_noise_db must be >= 0.");
            if (samples_per_pass() < 2)
                fail("altitude range holds fewer than 2 samples.");
        }

        std::size_t samples_per_pass() const
        {
            return static_cast<std::size_t>(std::llround((altitude_max_m - altitude_min_m) * samples_per_meter));
        }

        // Stored samples sit at the centres of their 1/resolution bins.
        double altitude_of(std::size_t k) const
        {
            return altitude_min_m + (static_cast<double>(k) + 0.5) / samples_per_meter;
        }
    };

    // Power average of dB losses. Equal inputs are returned unchanged.
    inline double power_average_db(std::span<const double> loss_db)
    {
        if (std::adjacent_find(loss_db.begin(), loss_db.end(), std::not_equal_to<>()) == loss_db.end())
            return loss_db.front();
        double acc = 0.0;
        for (double v : loss_db)
            acc += db_to_linear(-v);
        return -linear_to_db(acc / static_cast<double>(loss_db.size()));
    }

    // Deterministic path loss of the flight grid without any randomness.
    inline std::vector<double> pl0_profile(const FlightConfig &cfg, const PathLossParams &p)
    {
        std::vector<double> out(cfg.samples_per_pass());
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] = pl_altitude_model_db(link_geometry(cfg.scenario, cfg.altitude_of(k)), cfg.freq, p);
        return out;
    }

    // Composite loss PL0 + X_sigma + F for a vertical flight.
    //
    // Shadowing and fast fading are spatial fields shared by every pass over the same altitude:
    //  - shadowing: unit Gaussian anchors every `shadow_segment_wavelengths` lambda, linearly interpolated,
    //    then scaled by the link-state sigma;
    //  - fast fading: a Gaussian AR(1) field with correlation exp(-d / (ff_correlation_wavelengths lambda))
    //    mapped through the link-state envelope quantile, so every stored sample has exactly the
    //    requested envelope marginal; loss term -20 log10(envelope).
    // Each stored sample power-averages `averaging_factor` readings, each carrying independent
    // receiver noise; ascents and descents are then power-averaged per altitude.
    inline Trace synthesize_flight(const FlightConfig &cfg, const ChannelModel &model)
    {
        cfg.validate();
        model.pathloss.validate();
        model.los.shadowing.validate();
        model.nlos.shadowing.validate();

        Rng rng(cfg.seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        const std::size_t n = cfg.samples_per_pass();
        const double lambda = cfg.freq.wavelength_m();

        std::vector<LinkState> state(n);
        std::vector<double> level(n);
        for (std::size_t k = 0; k < n; ++k)
        {
            const auto g = link_geometry(cfg.scenario, cfg.altitude_of(k));
            state[k] = g.los;
            level[k] = pl_altitude_model_db(g, cfg.freq, model.pathloss);
        }

        // Shadowing
        const double spacing = cfg.shadow_segment_wavelengths * lambda;
        const double span_m = cfg.altitude_max_m - cfg.altitude_min_m;
        const auto anchors = static_cast<std::size_t>(std::ceil(span_m / spacing)) + 1;
        std::vector<double> unit(anchors);
        for (auto &a : unit)
            a = normal(rng);
        for (std::size_t k = 0; k < n; ++k)
        {
            const double pos = (cfg.altitude_of(k) - cfg.altitude_min_m) / spacing;
            const auto j = std::min(static_cast<std::size_t>(pos), anchors - 2);
            const double t = pos - static_cast<double>(j);
            const double z = (1.0 - t) * unit[j] + t * unit[j + 1];
            const auto &sh = model.condition(state[k]).shadowing;
            level[k] += sh.mean_db + sh.sigma_db * z;
        }

        // Fast fading
        const double step = 1.0 / cfg.samples_per_meter;
        const double rho = cfg.ff_correlation_wavelengths > 0.0
                               ? std::exp(-step / (cfg.ff_correlation_wavelengths * lambda))
                               : 0.0;
        const double innovation = std::sqrt(1.0 - rho * rho);
        double latent = normal(rng);
        for (std::size_t k = 0; k < n; ++k)
        {
            if (k > 0)
                latent = rho * latent + innovation * normal(rng);
            const auto &fading = model.condition(state[k]).fading;
            if (!fading)
                continue;
            const double u = std::clamp(standard_normal_cdf(latent), 1e-15, 1.0 - 1e-15);
            level[k] += -20.0 * std::log10(quantile(*fading, u));
        }

        // Storage and round-trip averaging
        const int passes = 2 * cfg.round_trips;
        std::vector<TraceSample> samples(n);
        if (cfg.reading_noise_db == 0.0)
        {
            for (std::size_t k = 0; k < n; ++k)
                samples[k] = {cfg.altitude_of(k), level[k]};
        }
        else
        {
            std::vector<std::vector<double>> stored(n, std::vector<double>(static_cast<std::size_t>(passes)));
            std::vector<double> readings(static_cast<std::size_t>(cfg.averaging_factor));
            for (int p = 0; p < passes; ++p)
            {
                const bool ascending = p % 2 == 0;
                for (std::size_t i = 0; i < n; ++i)
                {
                    const std::size_t k = ascending ? i : n - 1 - i;
                    for (auto &r : readings)
                        r = level[k] + cfg.reading_noise_db * normal(rng);
                    stored[k][static_cast<std::size_t>(p)] = power_average_db(readings);
                }
            }
            for (std::size_t k = 0; k < n; ++k)
                samples[k] = {cfg.altitude_of(k), power_average_db(stored[k])};
        }
        return Trace(std::move(samples), cfg.freq, cfg.samples_per_meter, cfg.scenario);
    }

    // ---- Link budget ------------------------------------------------------------------------------

    struct LinkBudget
    {
        double tx_power_dbm = 30.0;
        double tx_gain_dbi = 3.0;
        double rx_gain_dbi = 2.15;
        double noise_floor_dbm = -120.0;

        double link_margin_db() const { return tx_power_dbm - noise_floor_dbm; }

        void validate() const
        {
            if (!std::isfinite(tx_power_dbm) || !std::isfinite(tx_gain_dbi) || !std::isfinite(rx_gain_dbi) ||
                !std::isfinite(noise_floor_dbm))
                throw ConfigError("LinkBudget: non-finite value.");
            if (link_margin_db() < 0.0)
                throw ConfigError("LinkBudget: transmit power below the noise floor.");
        }
    };

    struct ReceivedSample
    {
        double altitude_m;
        double power_dbm;
        bool below_noise_floor;
    };

    inline double received_power_dbm(double loss_db, const LinkBudget &b)
    {
        return b.tx_power_dbm + b.tx_gain_dbi + b.rx_gain_dbi - loss_db;
    }

    inline std::vector<ReceivedSample> received_power(const Trace &trace, const LinkBudget &b)
    {
        b.validate();
        std::vector<ReceivedSample> out;
        out.reserve(trace.size());
        for (const auto &s : trace.samples)
        {
            const double p = received_power_dbm(s.loss_db, b);
            out.push_back({s.altitude_m, p, p < b.noise_floor_dbm});
        }
        return out;
    }
}

#endif
