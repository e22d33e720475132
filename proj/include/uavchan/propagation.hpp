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

#ifndef UAVCHAN_PROPAGATION_HPP
#define UAVCHAN_PROPAGATION_HPP

#include "diagnostics.hpp"
#include "geometry.hpp"
#include "units.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace uavchan
{
    namespace detail
    {
        inline void check_distance(double d, const char *what)
        {
            if (!(d > 0.0) || !std::isfinite(d))
                throw std::domain_error(std::string(what) + ": distance must be positive.");
        }
    }

    // Free-space loss with d in km and f in MHz: 32.45 + 20 log10(d) + 20 log10(f).
    inline double fspl_db(double d_km, Frequency f)
    {
        detail::check_distance(d_km, "fspl");
        return 32.45 + 20.0 * std::log10(d_km) + 20.0 * std::log10(f.mhz());
    }

    // Same model, distance in metres.
    inline double fspl_db_m(double d_m, Frequency f) { return fspl_db(d_m * 1.0e-3, f); }

    // ---- 3GPP TR 38.901 UMa ----------------------------------------------------------------------

    // LOS:  28    + 22    log10(d3D) + 20 log10(f_GHz)
    // NLOS: 13.54 + 39.08 log10(d3D) + 20 log10(f_GHz) - 0.6 (h - 0.5)
    // No max(LOS, NLOS) clamp is applied to the NLOS branch.
    inline double pl_3gpp_uma_db(double d3d_m, Frequency f, double uav_altitude_m, LinkState los)
    {
        detail::check_distance(d3d_m, "pl_3gpp_uma");
        const double fterm = 20.0 * std::log10(f.ghz());
        if (los == LinkState::Los)
            return 28.0 + 22.0 * std::log10(d3d_m) + fterm;
        return 13.54 + 39.08 * std::log10(d3d_m) + fterm - 0.6 * (uav_altitude_m - 0.5);
    }

    enum class ApplicabilityCheck
    {
        Off,
        Advisory, // warn and evaluate anyway
        Strict    // throw ApplicabilityError
    };

    struct UmaApplicability
    {
        bool applicable;
        double d2d_m;
        double breakpoint_m; // 0 when the UAV is on the ground (breakpoint undefined)
    };

    // The LOS formula holds for 10 m <= d2D <= d_break.
    inline UmaApplicability uma_los_applicability(double d2d_m, double uav_altitude_m, double gs_height_m, Frequency f)
    {
        const double dbp = uav_altitude_m > 0.0 ? breakpoint_distance_m(uav_altitude_m, gs_height_m, f) : 0.0;
        return {d2d_m >= 10.0 && d2d_m <= dbp, d2d_m, dbp};
    }

    struct UmaEvaluation
    {
        double loss_db;
        std::optional<UmaApplicability> applicability; // set for LOS when checking is enabled
    };

    inline UmaEvaluation pl_3gpp_uma(const LinkGeometry &link, double gs_height_m, Frequency f,
                                     ApplicabilityCheck check = ApplicabilityCheck::Advisory)
    {
        UmaEvaluation out{pl_3gpp_uma_db(link.d3d_m, f, link.uav_altitude_m, link.los), std::nullopt};
        if (link.los != LinkState::Los || check == ApplicabilityCheck::Off)
            return out;

        const auto a = uma_los_applicability(link.d2d_m, link.uav_altitude_m, gs_height_m, f);
        out.applicability = a;
        if (!a.applicable)
        {
            const std::string msg = "3GPP UMa LOS outside applicability: d2D = " + std::to_string(a.d2d_m) +
                                    " m, required [10, " + std::to_string(a.breakpoint_m) + "] m";
            if (check == ApplicabilityCheck::Strict)
                throw ApplicabilityError(msg, a.d2d_m, a.breakpoint_m);
            warn(msg);
        }
        return out;
    }

    // ---- Altitude-dependent model ----------------------------------------------------------------

    // PL0 = A_c + k_d log10(d3D[m]) + k_f log10(f[GHz]) - n_c h,   c in {LOS, NLOS}
    struct PathLossParams
    {
        std::string name = "custom";
        double intercept_los_db = 40.55;
        double intercept_nlos_db = 62.41;
        double dist_exponent_coeff = 20.0;
        double freq_coeff = 20.0;
        double n_los = 0.0;  // dB per metre of altitude
        double n_nlos = 0.0; // dB per metre of altitude

        double intercept(LinkState s) const { return s == LinkState::Los ? intercept_los_db : intercept_nlos_db; }
        double altitude_factor(LinkState s) const { return s == LinkState::Los ? n_los : n_nlos; }

        void validate() const
        {
            for (double v : {intercept_los_db, intercept_nlos_db, dist_exponent_coeff, freq_coeff, n_los, n_nlos})
                if (!std::isfinite(v))
                    throw std::domain_error("PathLossParams: non-finite coefficient.");
        }

        static PathLossParams paper_1ghz()
        {
            return {"paper-1ghz", 40.55, 62.41, 20.0, 20.0, 0.102, 1.190};
        }
        static PathLossParams paper_4ghz()
        {
            return {"paper-4ghz", 40.55, 62.41, 20.0, 20.0, 0.250, 2.075};
        }

        friend bool operator==(const PathLossParams &, const PathLossParams &) = default;
    };

    inline double pl_altitude_model_db(double d3d_m, Frequency f, double uav_altitude_m, LinkState los,
                                       const PathLossParams &p)
    {
        detail::check_distance(d3d_m, "pl_altitude_model");
        check_altitude(uav_altitude_m);
        return p.intercept(los) + p.dist_exponent_coeff * std::log10(d3d_m) + p.freq_coeff * std::log10(f.ghz()) -
               p.altitude_factor(los) * uav_altitude_m;
    }

    inline double pl_altitude_model_db(const LinkGeometry &link, Frequency f, const PathLossParams &p)
    {
        return pl_altitude_model_db(link.d3d_m, f, link.uav_altitude_m, link.los, p);
    }
}

#endif
