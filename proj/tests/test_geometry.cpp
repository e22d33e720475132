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

#include "uavchan/geometry.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace uavchan;
using Catch::Approx;

TEST_CASE("frequency and wavelength")
{
    const auto f = Frequency::from_ghz(4.0);
    CHECK(f.hz() == 4.0e9);
    CHECK(f.mhz() == 4000.0);
    CHECK(f.wavelength_m() == Approx(0.0749481145).epsilon(1e-12));
    CHECK(Frequency::from_mhz(1000.0).wavelength_m() == Approx(0.299792458).epsilon(1e-15));
    CHECK_THROWS_AS(Frequency::from_hz(0.0), std::domain_error);
    CHECK_THROWS_AS(Frequency::from_hz(-1.0), std::domain_error);
    CHECK_THROWS_AS(Frequency::from_hz(std::nan("")), std::domain_error);
}

TEST_CASE("dB conversions invert each other")
{
    for (double db : {-150.0, -3.0, 0.0, 10.0, 97.4})
        CHECK(linear_to_db(db_to_linear(db)) == Approx(db).margin(1e-12));
    CHECK(db_to_linear(10.0) == Approx(10.0));
    CHECK(rad_to_deg(deg_to_rad(37.0)) == Approx(37.0));
}

TEST_CASE("link distances")
{
    const ScenarioGeometry sc;
    SECTION("ground level")
    {
        const auto d = link_distances(sc, 0.0);
        CHECK(d.d2d_m == 350.0);
        CHECK(d.d3d_m == Approx(std::sqrt(350.0 * 350.0 + 25.0 * 25.0)).epsilon(1e-14));
        CHECK(d.d3d_m == Approx(350.89).margin(0.005));
    }
    SECTION("top of flight")
    {
        CHECK(link_distances(sc, 24.0).d3d_m == Approx(350.0014286).margin(1e-6));
    }
    SECTION("UAV at GS height reduces to the horizontal distance")
    {
        CHECK(link_distances(sc, 25.0).d3d_m == 350.0);
    }
    SECTION("invalid altitude")
    {
        CHECK_THROWS_AS(link_distances(sc, -0.1), std::domain_error);
        CHECK_THROWS_AS(link_distances(sc, INFINITY), std::domain_error);
    }
}

TEST_CASE("elevation angle endpoints of the flight")
{
    // atan(25/350) and atan(1/350), computed independently in degrees.
    const double lo = std::atan2(1.0, 350.0) * 180.0 / 3.14159265358979323846;
    const double hi = std::atan2(25.0, 350.0) * 180.0 / 3.14159265358979323846;
    CHECK(elevation_angle_deg(24.0, 25.0, 350.0) == Approx(lo).epsilon(1e-14));
    CHECK(elevation_angle_deg(0.0, 25.0, 350.0) == Approx(hi).epsilon(1e-14));
    CHECK(std::round(elevation_angle_deg(24.0, 25.0, 350.0) * 100.0) / 100.0 == Approx(0.16));
    CHECK(std::round(elevation_angle_deg(0.0, 25.0, 350.0) * 100.0) / 100.0 == Approx(4.09));
    CHECK(elevation_angle_deg(25.0, 25.0, 350.0) == 0.0);
    CHECK(elevation_angle_deg(30.0, 25.0, 350.0) < 0.0);
    CHECK_THROWS_AS(elevation_angle_deg(1.0, 25.0, 0.0), std::domain_error);
}

TEST_CASE("line of sight with the default blocker")
{
    const ScenarioGeometry sc;
    CHECK(los_transition_altitude(sc) == Approx(11.0).epsilon(1e-12));
    CHECK(los_state(sc, 0.0) == LinkState::Nlos);
    CHECK(los_state(sc, 10.99) == LinkState::Nlos);
    CHECK(los_state(sc, 11.0) == LinkState::Nlos); // grazing ray is obstructed
    CHECK(los_state(sc, 11.01) == LinkState::Los);
    CHECK(los_state(sc, 12.0) == LinkState::Los);
    CHECK(los_state(sc, 24.0) == LinkState::Los);

    // Exactly one NLOS->LOS transition over a dense sweep.
    int changes = 0;
    auto prev = los_state(sc, 0.0);
    for (int i = 1; i <= 2400; ++i)
    {
        const auto s = los_state(sc, i * 0.01);
        changes += s != prev;
        prev = s;
    }
    CHECK(changes == 1);
}

TEST_CASE("ray height at the blocker, hand computed")
{
    const ScenarioGeometry sc;
    // h + (25 - h) * 100 / 350
    CHECK(ray_height_at_blocker(sc, 0.0) == Approx(25.0 * 2.0 / 7.0));
    CHECK(ray_height_at_blocker(sc, 12.0) == Approx(12.0 + 13.0 * 2.0 / 7.0));
    CHECK(ray_height_at_blocker(sc, 25.0) == Approx(25.0));
}

TEST_CASE("blocker calibration")
{
    CHECK(calibrate_blocker_distance(350.0, 25.0, 15.0, 11.0) == Approx(100.0).epsilon(1e-14));
    ScenarioGeometry sc;
    sc.blocker_distance_m = calibrate_blocker_distance(350.0, 25.0, 15.0, 7.5);
    CHECK(los_transition_altitude(sc) == Approx(7.5).epsilon(1e-12));
    CHECK_THROWS_AS(calibrate_blocker_distance(350.0, 25.0, 30.0, 11.0), std::domain_error);
    CHECK_THROWS_AS(calibrate_blocker_distance(350.0, 25.0, 15.0, 16.0), std::domain_error);
}

TEST_CASE("scenario validation")
{
    ScenarioGeometry sc;
    CHECK_NOTHROW(sc.validate());
    sc.blocker_height_m = 0.0;
    CHECK_NOTHROW(sc.validate());
    CHECK(los_state(sc, 0.0) == LinkState::Los);
    sc = {};
    sc.blocker_distance_m = 400.0;
    CHECK_THROWS_AS(sc.validate(), std::domain_error);
    sc = {};
    sc.gs_height_m = 0.0;
    CHECK_THROWS_AS(sc.validate(), std::domain_error);
    sc = {};
    sc.blocker_height_m = -1.0;
    CHECK_THROWS_AS(sc.validate(), std::domain_error);
}

TEST_CASE("breakpoint distance")
{
    // 4 * 24 * 25 / lambda
    CHECK(breakpoint_distance_m(24.0, 25.0, Frequency::from_ghz(4.0)) == Approx(2400.0 / (299792458.0 / 4e9)));
    CHECK(breakpoint_distance_m(24.0, 25.0, Frequency::from_ghz(4.0)) == Approx(32022.15).margin(0.01));
    CHECK(breakpoint_distance_m(24.0, 25.0, Frequency::from_ghz(1.0)) == Approx(8005.54).margin(0.01));
    CHECK_THROWS_AS(breakpoint_distance_m(0.0, 25.0, Frequency::from_ghz(1.0)), std::domain_error);
}

TEST_CASE("link geometry bundles the pieces")
{
    const ScenarioGeometry sc;
    const auto g = link_geometry(sc, 5.0);
    CHECK(g.los == LinkState::Nlos);
    CHECK(g.uav_altitude_m == 5.0);
    CHECK(g.d3d_m == Approx(std::hypot(350.0, 20.0)));
    CHECK(g.elevation_deg == Approx(elevation_angle_deg(5.0, 25.0, 350.0)));
    CHECK(to_string(LinkState::Los) == "LOS");
    CHECK(to_string(LinkState::Nlos) == "NLOS");
}
