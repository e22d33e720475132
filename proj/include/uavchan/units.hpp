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

#ifndef UAVCHAN_UNITS_HPP
#define UAVCHAN_UNITS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace uavchan
{
    inline constexpr double kSpeedOfLight = 299'792'458.0; // m/s
    inline constexpr double kPi = 3.14159265358979323846;

    // Carrier frequency. Stored in Hz; the path-loss formulas want MHz or GHz.
    class Frequency
    {
    public:
        static Frequency from_hz(double hz) { return Frequency(hz); }
        static Frequency from_mhz(double mhz) { return Frequency(mhz * 1.0e6); }
        static Frequency from_ghz(double ghz) { return Frequency(ghz * 1.0e9); }

        double hz() const { return hz_; }
        double mhz() const { return hz_ * 1.0e-6; }
        double ghz() const { return hz_ * 1.0e-9; }
        double wavelength_m() const { return kSpeedOfLight / hz_; }

        friend bool operator==(const Frequency &, const Frequency &) = default;

    private:
        explicit Frequency(double hz) : hz_(hz)
        {
            if (!(hz > 0.0) || !std::isfinite(hz))
                throw std::domain_error("Frequency must be positive and finite, got " + std::to_string(hz) + " Hz.");
        }
        double hz_;
    };

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

    inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
    inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }
}

#endif
