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

#ifndef UAVCHAN_DIAGNOSTICS_HPP
#define UAVCHAN_DIAGNOSTICS_HPP

#include <functional>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace uavchan
{
    // Estimation failed: rank-deficient regression, zero-variance data, optimizer did not converge.
    class FitError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Malformed or inconsistent configuration / input file.
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // A 3GPP UMa LOS evaluation outside d_2D in [10 m, d_break] under strict checking.
    class ApplicabilityError : public std::domain_error
    {
    public:
        ApplicabilityError(const std::string &what, double d2d_m, double breakpoint_m)
            : std::domain_error(what), d2d_m_(d2d_m), breakpoint_m_(breakpoint_m) {}
        double d2d_m() const { return d2d_m_; }
        double breakpoint_m() const { return breakpoint_m_; }

    private:
        double d2d_m_;
        double breakpoint_m_;
    };

    // Non-fatal conditions (degenerate windows, short samples, advisory applicability) are routed
    // through a process-wide handler. Default prints to std::clog.
    using WarningHandler = std::function<void(std::string_view)>;

    namespace detail
    {
        inline std::mutex &warning_mutex()
        {
            static std::mutex m;
            return m;
        }

        inline WarningHandler &warning_handler()
        {
            static WarningHandler handler = [](std::string_view msg)
            { std::clog << "warning: " << msg << '\n'; };
            return handler;
        }
    }

    // Returns the previous handler so callers can restore it.
    inline WarningHandler set_warning_handler(WarningHandler handler)
    {
        std::lock_guard lock(detail::warning_mutex());
        return std::exchange(detail::warning_handler(), std::move(handler));
    }

    inline void warn(std::string_view msg)
    {
        std::lock_guard lock(detail::warning_mutex());
        if (auto &h = detail::warning_handler())
            h(msg);
    }

    // RAII capture of warnings, used by tests and the CLI's quiet mode.
    class ScopedWarningCapture
    {
    public:
        ScopedWarningCapture()
            : previous_(set_warning_handler([this](std::string_view m)
                                            { messages_.emplace_back(m); })) {}
        ~ScopedWarningCapture() { set_warning_handler(std::move(previous_)); }
        ScopedWarningCapture(const ScopedWarningCapture &) = delete;
        ScopedWarningCapture &operator=(const ScopedWarningCapture &) = delete;

        const std::vector<std::string> &messages() const { return messages_; }

    private:
        std::vector<std::string> messages_;
        WarningHandler previous_;
    };
}

#endif
