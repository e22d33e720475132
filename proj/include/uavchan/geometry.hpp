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

#ifndef UAVCHAN_GEOMETRY_HPP
#define UAVCHAN_GEOMETRY_HPP

#include "units.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace uavchan
{
    enum class LinkState
    {
        Los,
        Nlos
    };

    inline std::string_view to_string(LinkState s) { return s == LinkState::Los ? "LOS" : "NLOS"; }

    // Vertical-plane layout of one ground station, one UAV take-off point and one blocking building.
    //
    //   GS antenna (gs_height_m) ........ x = horizontal_distance_m
    //   blocker face (blocker_height_m) . x = blocker_distance_m
    //   UAV ground point ................ x = 0
    //
    // The default blocker position (100 m from the UAV) puts the grazing ray over the 15 m roof at a
    // UAV altitude of exactly 11 m for a 25 m ground station 350 m away.
    struct ScenarioGeometry
    {
        double horizontal_distance_m = 350.0; // D, Tx-Rx ground-plane separation
        double gs_height_m = 25.0;            // h_RX
        double blocker_distance_m = 100.0;    // from the UAV ground point to the blocker face
        double blocker_height_m = 15.0;       // 0 disables the blocker

        void validate() const
        {
            auto positive = [](double v, const char *name)
            {
                if (!(v > 0.0) || !std::isfinite(v))
                    throw std::domain_error(std::string("ScenarioGeometry: ") + name + " must be positive.");
            };
            positive(horizontal_distance_m, "horizontal_distance_m");
            positive(gs_height_m, "gs_height_m");
            positive(blocker_distance_m, "blocker_distance_m");
            if (!(blocker_height_m >= 0.0) || !std::isfinite(blocker_height_m))
                throw std::domain_error("ScenarioGeometry: blocker_height_m must be non-negative.");
            if (!(blocker_distance_m < horizontal_distance_m))
                throw std::domain_error("ScenarioGeometry: blocker must lie between the UAV and the ground station.");
        }

        friend bool operator==(const ScenarioGeometry &, const ScenarioGeometry &) = default;
    };

    struct LinkDistances
    {
        double d2d_m;
        double d3d_m;
    };

    struct LinkGeometry
    {
        double d2d_m;
        double d3d_m;
        double elevation_deg;
        LinkState los;
        double uav_altitude_m;
    };

    inline void check_altitude(double uav_altitude_m)
    {
        if (!(uav_altitude_m >= 0.0) || !std::isfinite(uav_altitude_m))
            throw std::domain_error("UAV altitude must be non-negative, got " + std::to_string(uav_altitude_m) + " m.");
    }

    inline LinkDistances link_distances(const ScenarioGeometry &scenario, double uav_altitude_m)
    {
        scenario.validate();
        check_altitude(uav_altitude_m);
        const double d2d = scenario.horizontal_distance_m;
        return {d2d, std::hypot(d2d, scenario.gs_height_m - uav_altitude_m)};
    }

    // arctan((h_R - h_T) / D) in degrees; negative when the UAV is above the ground station.
    inline double elevation_angle_deg(double uav_altitude_m, double gs_height_m, double horizontal_distance_m)
    {
        if (!(horizontal_distance_m > 0.0))
            throw std::domain_error("elevation_angle: horizontal distance must be positive.");
        return rad_to_deg(std::atan((gs_height_m - uav_altitude_m) / horizontal_distance_m));
    }

    // Height of the straight UAV-GS ray above ground at the blocker face.
    inline double ray_height_at_blocker(const ScenarioGeometry &scenario, double uav_altitude_m)
    {
        const double t = scenario.blocker_distance_m / scenario.horizontal_distance_m;
        return uav_altitude_m + (scenario.gs_height_m - uav_altitude_m) * t;
    }

    // A ray that grazes the roof edge counts as obstructed, so the transition altitude itself is NLOS.
    inline LinkState los_state(const ScenarioGeometry &scenario, double uav_altitude_m)
    {
        scenario.validate();
        check_altitude(uav_altitude_m);
        if (scenario.blocker_height_m <= 0.0)
            return LinkState::Los;
        return ray_height_at_blocker(scenario, uav_altitude_m) <= scenario.blocker_height_m ? LinkState::Nlos
                                                                                            : LinkState::Los;
    }

    // UAV altitude whose ray grazes the blocker top. Below it the link is NLOS. May be negative
    // (never blocked) or exceed any practical altitude when the GS sits below the roof.
    inline double los_transition_altitude(const ScenarioGeometry &scenario)
    {
        scenario.validate();
        const double t = scenario.blocker_distance_m / scenario.horizontal_distance_m;
        return (scenario.blocker_height_m - scenario.gs_height_m * t) / (1.0 - t);
    }

    // Blocker distance that places the NLOS/LOS transition at the requested UAV altitude.
    // Requires transition altitude < blocker height < GS height.
    inline double calibrate_blocker_distance(double horizontal_distance_m, double gs_height_m,
                                             double blocker_height_m, double transition_altitude_m)
    {
        if (!(transition_altitude_m < blocker_height_m && blocker_height_m < gs_height_m))
            throw std::domain_error("calibrate_blocker_distance: need transition altitude < blocker height < GS height.");
        const double t = (blocker_height_m - transition_altitude_m) / (gs_height_m - transition_altitude_m);
        return t * horizontal_distance_m;
    }

    // Two-ray breakpoint 4 h_TX h_RX / lambda.
    inline double breakpoint_distance_m(double h_tx_m, double h_rx_m, Frequency f)
    {
        if (!(h_tx_m > 0.0) || !(h_rx_m > 0.0))
            throw std::domain_error("breakpoint_distance: antenna heights must be positive.");
        return 4.0 * h_tx_m * h_rx_m / f.wavelength_m();
    }

    inline LinkGeometry link_geometry(const ScenarioGeometry &scenario, double uav_altitude_m)
    {
        const auto d = link_distances(scenario, uav_altitude_m);
        return {d.d2d_m, d.d3d_m,
                elevation_angle_deg(uav_altitude_m, scenario.gs_height_m, scenario.horizontal_distance_m),
                los_state(scenario, uav_altitude_m), uav_altitude_m};
    }
}

#endif
