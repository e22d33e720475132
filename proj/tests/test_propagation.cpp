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

#include "uavchan/propagation.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace uavchan;
using Catch::Approx;

namespace
{
    // Free space from first principles: 20 log10(4 pi d / lambda).
    double friis_db(double d_m, double f_hz)
    {
        const double lambda = 299792458.0 / f_hz;
        return 20.0 * std::log10(4.0 * 3.14159265358979323846 * d_m / lambda);
    }
}

TEST_CASE("free-space loss")
{
    CHECK(fspl_db(0.35, Frequency::from_mhz(1000.0)) == Approx(83.33).margin(0.01));
    CHECK(fspl_db(0.35, Frequency::from_mhz(1000.0)) == Approx(83.3314).margin(1e-4));
    CHECK(fspl_db(0.3509, Frequency::from_mhz(4000.0)) == Approx(95.395).margin(0.001));
    CHECK(fspl_db(1.0, Frequency::from_mhz(1.0)) == Approx(32.45));

    // The 32.45 constant rounds 20 log10(4 pi 1e9 / c); agreement with Friis within 0.01 dB.
    for (double d : {10.0, 350.0, 5000.0})
        for (double f : {1e9, 2.4e9, 4e9})
            CHECK(fspl_db_m(d, Frequency::from_hz(f)) == Approx(friis_db(d, f)).margin(0.01));

    // +6.02 dB per doubling of either argument.
    const auto f = Frequency::from_ghz(1.0);
    CHECK(fspl_db(0.7, f) - fspl_db(0.35, f) == Approx(20.0 * std::log10(2.0)));
    CHECK_THROWS_AS(fspl_db(0.0, f), std::domain_error);
    CHECK_THROWS_AS(fspl_db(-1.0, f), std::domain_error);
}

TEST_CASE("3GPP UMa formulas")
{
    const auto f1 = Frequency::from_ghz(1.0);
    CHECK(pl_3gpp_uma_db(100.0, f1, 10.0, LinkState::Los) == Approx(72.0).margin(1e-6));
    // NLOS: 13.54 + 39.08*2 + 0 - 0.6*(10-0.5)
    CHECK(pl_3gpp_uma_db(100.0, f1, 10.0, LinkState::Nlos) == Approx(13.54 + 78.16 - 5.7).margin(1e-9));
    // Frequency term shared by both branches.
    const auto f4 = Frequency::from_ghz(4.0);
    CHECK(pl_3gpp_uma_db(350.0, f4, 5.0, LinkState::Los) - pl_3gpp_uma_db(350.0, f1, 5.0, LinkState::Los) ==
          Approx(20.0 * std::log10(4.0)));
    CHECK_THROWS_AS(pl_3gpp_uma_db(0.0, f1, 1.0, LinkState::Los), std::domain_error);
}

TEST_CASE("3GPP LOS applicability")
{
    const ScenarioGeometry sc;
    const auto f = Frequency::from_ghz(4.0);

    SECTION("default flight lies inside the breakpoint")
    {
        const auto g = link_geometry(sc, 24.0);
        ScopedWarningCapture cap;
        const auto ev = pl_3gpp_uma(g, sc.gs_height_m, f, ApplicabilityCheck::Strict);
        REQUIRE(ev.applicability);
        CHECK(ev.applicability->applicable);
        CHECK(ev.applicability->breakpoint_m == Approx(32022.15).margin(0.01));
        CHECK(cap.messages().empty());
    }
    SECTION("beyond the breakpoint: advisory warns, strict throws")
    {
        LinkGeometry g = link_geometry(sc, 12.0);
        g.d2d_m = 1.0e6;
        ScopedWarningCapture cap;
        const auto ev = pl_3gpp_uma(g, sc.gs_height_m, f, ApplicabilityCheck::Advisory);
        CHECK(std::isfinite(ev.loss_db));
        REQUIRE(cap.messages().size() == 1);
        CHECK(cap.messages()[0].find("applicability") != std::string::npos);
        try
        {
            pl_3gpp_uma(g, sc.gs_height_m, f, ApplicabilityCheck::Strict);
            FAIL("expected ApplicabilityError");
        }
        catch (const ApplicabilityError &e)
        {
            CHECK(e.d2d_m() == 1.0e6);
            CHECK(e.breakpoint_m() == Approx(4.0 * 12.0 * 25.0 / f.wavelength_m()));
        }
    }
    SECTION("below 10 m ground distance")
    {
        CHECK_FALSE(uma_los_applicability(5.0, 20.0, 25.0, f).applicable);
    }
    SECTION("NLOS and Off skip the check")
    {
        LinkGeometry g = link_geometry(sc, 5.0);
        g.d2d_m = 1.0e6;
        CHECK_FALSE(pl_3gpp_uma(g, sc.gs_height_m, f, ApplicabilityCheck::Strict).applicability);
        g.los = LinkState::Los;
        CHECK_FALSE(pl_3gpp_uma(g, sc.gs_height_m, f, ApplicabilityCheck::Off).applicability);
    }
}

TEST_CASE("altitude-dependent model, hand-derived values")
{
    const auto p4 = PathLossParams::paper_4ghz();
    const auto p1 = PathLossParams::paper_1ghz();
    const auto f4 = Frequency::from_ghz(4.0);
    const auto f1 = Frequency::from_ghz(1.0);

    // 40.55 + 20 log10(350) + 20 log10(4) - 0.25*24 = 40.55 + 50.8814 + 12.0412 - 6
    CHECK(pl_altitude_model_db(350.0, f4, 24.0, LinkState::Los, p4) == Approx(97.4726).margin(0.01));
    // 62.41 + 20 log10(350.89) + 0 - 0
    CHECK(pl_altitude_model_db(350.89, f1, 0.0, LinkState::Nlos, p1) == Approx(113.3134).margin(0.01));
    // independent evaluation with the same literal constants
    const double d = std::hypot(350.0, 25.0 - 8.0);
    CHECK(pl_altitude_model_db(d, f4, 8.0, LinkState::Nlos, p4) ==
          Approx(62.41 + 20.0 * std::log10(d) + 20.0 * std::log10(4.0) - 2.075 * 8.0).epsilon(1e-14));

    const ScenarioGeometry sc;
    const auto g = link_geometry(sc, 20.0);
    CHECK(pl_altitude_model_db(g, f4, p4) == pl_altitude_model_db(g.d3d_m, f4, 20.0, LinkState::Los, p4));
    CHECK_THROWS_AS(pl_altitude_model_db(350.0, f4, -1.0, LinkState::Los, p4), std::domain_error);
}

TEST_CASE("presets")
{
    const auto p1 = PathLossParams::paper_1ghz();
    const auto p4 = PathLossParams::paper_4ghz();
    CHECK(p1.n_los == 0.102);
    CHECK(p1.n_nlos == 1.190);
    CHECK(p4.n_los == 0.250);
    CHECK(p4.n_nlos == 2.075);
    CHECK(p1.intercept_los_db == 40.55);
    CHECK(p1.intercept_nlos_db == 62.41);
    CHECK(p1 == PathLossParams::paper_1ghz());
    CHECK_FALSE(p1 == p4);
    PathLossParams bad;
    bad.n_los = NAN;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("altitude model decreases with altitude along the flight")
{
    const ScenarioGeometry sc;
    for (const auto &[p, f] : {std::pair{PathLossParams::paper_1ghz(), Frequency::from_ghz(1.0)},
                               std::pair{PathLossParams::paper_4ghz(), Frequency::from_ghz(4.0)}})
    {
        double prev = INFINITY;
        for (int i = 0; i <= 2400; ++i)
        {
            const double h = i * 0.01;
            const double pl = pl_altitude_model_db(link_geometry(sc, h), f, p);
            CHECK(pl < prev);
            prev = pl;
        }
        CHECK(p.n_nlos > p.n_los);
    }
}
