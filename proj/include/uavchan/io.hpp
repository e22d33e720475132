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

// File formats: trace CSV, INI run configuration, JSON fit report.
// Needs nlohmann/json (json.hpp) and Boost.PropertyTree on the include path.

#ifndef UAVCHAN_IO_HPP
#define UAVCHAN_IO_HPP

#include "diagnostics.hpp"
#include "extraction.hpp"
#include "fitting.hpp"
#include "synthesis.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace uavchan
{
    inline constexpr std::string_view kVersion = "0.1.0";

    // ---- Trace CSV --------------------------------------------------------------------------------

    inline constexpr int kCsvDecimals = 6;
    inline constexpr std::string_view kTraceHeader = "altitude_m,loss_db";

    namespace detail
    {
        inline void append_fixed(std::string &out, double v, int decimals = kCsvDecimals)
        {
            char buf[64];
            auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
            out.append(buf, r.ptr);
        }

        inline double parse_double(std::string_view s, std::string_view what)
        {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
                s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
                s.remove_suffix(1);
            if (!s.empty() && s.front() == '+')
                s.remove_prefix(1);
            double v = 0.0;
            auto r = std::from_chars(s.data(), s.data() + s.size(), v);
            if (r.ec != std::errc() || r.ptr != s.data() + s.size())
                throw std::domain_error("Cannot parse " + std::string(what) + " from '" + std::string(s) + "'.");
            return v;
        }
    }

    inline void write_trace_csv(std::ostream &os, const Trace &trace)
    {
        std::string out;
        out.reserve(24 * (trace.size() + 1));
        out.append(kTraceHeader);
        out.push_back('\n');
        for (const auto &s : trace.samples)
        {
            detail::append_fixed(out, s.altitude_m);
            out.push_back(',');
            detail::append_fixed(out, s.loss_db);
            out.push_back('\n');
        }
        os << out;
    }

    // Frequency, resolution and scenario are not part of the CSV; the caller supplies them.
    inline Trace read_trace_csv(std::istream &is, Frequency freq, double samples_per_meter,
                                const ScenarioGeometry &scenario = {})
    {
        std::string line;
        if (!std::getline(is, line))
            throw std::domain_error("Trace CSV: empty input.");
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line != kTraceHeader)
            throw std::domain_error("Trace CSV: expected header '" + std::string(kTraceHeader) + "'.");

        std::vector<TraceSample> samples;
        std::size_t lineno = 1;
        while (std::getline(is, line))
        {
            ++lineno;
            if (line.empty() || line == "\r")
                continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
                throw std::domain_error("Trace CSV line " + std::to_string(lineno) + ": expected two columns.");
            const std::string_view sv(line);
            samples.push_back({detail::parse_double(sv.substr(0, comma), "altitude"),
                               detail::parse_double(sv.substr(comma + 1), "loss")});
        }
        Trace t(std::move(samples), freq, samples_per_meter, scenario);
        t.validate();
        return t;
    }

    // ---- Run configuration (INI) ------------------------------------------------------------------

    // [scenario]    horizontal_distance_m, gs_height_m, blocker_distance_m, blocker_height_m
    // [flight]      frequency_hz, altitude_min_m, altitude_max_m, samples_per_meter, averaging_factor,
    //               round_trips, seed, shadow_segment_wavelengths, ff_correlation_wavelengths, reading_noise_db
    // [channel]     preset = paper-1ghz | paper-4ghz | custom
    // [pathloss]    intercept_los_db, intercept_nlos_db, distance_coeff, frequency_coeff, n_los, n_nlos
    // [shadowing]   los_mean_db, los_sigma_db, nlos_mean_db, nlos_sigma_db
    // [fading]      los, nlos = "<family> <p1> [p2]" or "none"
    // [link_budget] tx_power_dbm, tx_gain_dbi, rx_gain_dbi, noise_floor_dbm
    // [extract]     mode = free|fixed, domain = linear|db, large_scale_wavelengths, small_scale_wavelengths,
    //               families = all | comma separated family names
    // Preset values are the base; explicit keys override them. The preset also supplies the
    // frequency when [flight] has no frequency_hz.
    struct RunConfig
    {
        std::string preset = "paper-4ghz";
        FlightConfig flight{};
        ChannelModel model = paper_4ghz_model();
        LinkBudget budget{};
        AnalysisOptions analysis{};
        std::string source_text; // raw bytes the config was parsed from, for provenance hashing
    };

    inline ChannelModel preset_model(const std::string &preset)
    {
        if (preset == "paper-1ghz")
            return paper_1ghz_model();
        if (preset == "paper-4ghz")
            return paper_4ghz_model();
        if (preset == "custom")
        {
            ChannelModel m;
            m.name = "custom";
            return m;
        }
        throw ConfigError("Unknown preset '" + preset + "' (paper-1ghz, paper-4ghz, custom).");
    }

    inline std::optional<FadingDistribution> parse_fading_spec(const std::string &text)
    {
        std::istringstream in(text);
        std::string name;
        if (!(in >> name))
            throw ConfigError("fading: empty specification.");
        if (name == "none")
            return std::nullopt;
        std::vector<double> p;
        std::string tok;
        while (in >> tok)
            p.push_back(detail::parse_double(tok, "fading parameter"));
        try
        {
            return make_distribution(parse_family(name), p);
        }
        catch (const std::exception &e)
        {
            throw ConfigError(std::string("fading: ") + e.what());
        }
    }

    inline std::string format_fading_spec(const std::optional<FadingDistribution> &d)
    {
        if (!d)
            return "none";
        std::ostringstream os;
        os.precision(17);
        os << to_string(family_of(*d));
        for (const auto &p : parameters(*d))
            os << ' ' << p.value;
        return os.str();
    }

    namespace detail
    {
        namespace pt = boost::property_tree;

        class IniReader
        {
          public:
            explicit IniReader(const pt::ptree &tree) : tree_(tree)
            {
                static const std::map<std::string, std::set<std::string>> known = {
                    {"scenario", {"horizontal_distance_m", "gs_height_m", "blocker_distance_m", "blocker_height_m"}},
                    {"flight",
                     {"frequency_hz", "altitude_min_m", "altitude_max_m", "samples_per_meter", "averaging_factor",
                      "round_trips", "seed", "shadow_segment_wavelengths", "ff_correlation_wavelengths",
                      "reading_noise_db"}},
                    {"channel", {"preset"}},
                    {"pathloss",
                     {"intercept_los_db", "intercept_nlos_db", "distance_coeff", "frequency_coeff", "n_los", "n_nlos"}},
                    {"shadowing", {"los_mean_db", "los_sigma_db", "nlos_mean_db", "nlos_sigma_db"}},
                    {"fading", {"los", "nlos"}},
                    {"link_budget", {"tx_power_dbm", "tx_gain_dbi", "rx_gain_dbi", "noise_floor_dbm"}},
                    {"extract", {"mode", "domain", "large_scale_wavelengths", "small_scale_wavelengths", "families"}},
                };
                for (const auto &[section, body] : tree)
                {
                    auto it = known.find(section);
                    if (it == known.end())
                        throw ConfigError("config: unknown section [" + section + "].");
                    for (const auto &[key, value] : body)
                        if (!it->second.contains(key))
                            throw ConfigError("config: unknown key '" + key + "' in [" + section + "].");
                }
            }

            std::optional<std::string> text(const std::string &section, const std::string &key) const
            {
                auto v = tree_.get_optional<std::string>(pt::ptree::path_type(section + "/" + key, '/'));
                if (v)
                {
                    auto s = *v;
                    if (auto hash = s.find_first_of("#;"); hash != std::string::npos)
                        s.erase(hash);
                    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
                        s.pop_back();
                    return s;
                }
                return std::nullopt;
            }

            void number(const std::string &section, const std::string &key, double &dst) const
            {
                if (auto s = text(section, key))
                {
                    try
                    {
                        dst = parse_double(*s, section + "." + key);
                    }
                    catch (const std::domain_error &e)
                    {
                        throw ConfigError(std::string("config: ") + e.what());
                    }
                }
            }

            template <typename Int>
            void integer(const std::string &section, const std::string &key, Int &dst) const
            {
                if (auto s = text(section, key))
                {
                    Int v{};
                    auto r = std::from_chars(s->data(), s->data() + s->size(), v);
                    if (r.ec != std::errc() || r.ptr != s->data() + s->size())
                        throw ConfigError("config: " + section + "." + key + " must be an integer, got '" + *s + "'.");
                    dst = v;
                }
            }

          private:
            const pt::ptree &tree_;
        };
    }

    inline RunConfig parse_run_config(const std::string &text, std::optional<std::string> preset_override = {})
    {
        namespace pt = boost::property_tree;
        pt::ptree tree;
        try
        {
            std::istringstream in(text);
            pt::read_ini(in, tree);
        }
        catch (const pt::ini_parser_error &e)
        {
            throw ConfigError(std::string("config: ") + e.what());
        }
        const detail::IniReader ini(tree);

        RunConfig rc;
        rc.source_text = text;
        rc.preset = preset_override.value_or(ini.text("channel", "preset").value_or("paper-4ghz"));
        rc.model = preset_model(rc.preset);

        auto &sc = rc.flight.scenario;
        ini.number("scenario", "horizontal_distance_m", sc.horizontal_distance_m);
        ini.number("scenario", "gs_height_m", sc.gs_height_m);
        ini.number("scenario", "blocker_distance_m", sc.blocker_distance_m);
        ini.number("scenario", "blocker_height_m", sc.blocker_height_m);

        auto &fl = rc.flight;
        double hz = rc.preset == "custom" ? fl.freq.hz() : paper_preset_frequency(rc.preset).hz();
        ini.number("flight", "frequency_hz", hz);
        try
        {
            fl.freq = Frequency::from_hz(hz);
        }
        catch (const std::domain_error &e)
        {
            throw ConfigError(std::string("config: ") + e.what());
        }
        ini.number("flight", "altitude_min_m", fl.altitude_min_m);
        ini.number("flight", "altitude_max_m", fl.altitude_max_m);
        ini.number("flight", "samples_per_meter", fl.samples_per_meter);
        ini.integer("flight", "averaging_factor", fl.averaging_factor);
        ini.integer("flight", "round_trips", fl.round_trips);
        ini.integer("flight", "seed", fl.seed);
        ini.number("flight", "shadow_segment_wavelengths", fl.shadow_segment_wavelengths);
        ini.number("flight", "ff_correlation_wavelengths", fl.ff_correlation_wavelengths);
        ini.number("flight", "reading_noise_db", fl.reading_noise_db);

        auto &pl = rc.model.pathloss;
        ini.number("pathloss", "intercept_los_db", pl.intercept_los_db);
        ini.number("pathloss", "intercept_nlos_db", pl.intercept_nlos_db);
        ini.number("pathloss", "distance_coeff", pl.dist_exponent_coeff);
        ini.number("pathloss", "frequency_coeff", pl.freq_coeff);
        ini.number("pathloss", "n_los", pl.n_los);
        ini.number("pathloss", "n_nlos", pl.n_nlos);

        ini.number("shadowing", "los_mean_db", rc.model.los.shadowing.mean_db);
        ini.number("shadowing", "los_sigma_db", rc.model.los.shadowing.sigma_db);
        ini.number("shadowing", "nlos_mean_db", rc.model.nlos.shadowing.mean_db);
        ini.number("shadowing", "nlos_sigma_db", rc.model.nlos.shadowing.sigma_db);

        if (auto s = ini.text("fading", "los"))
            rc.model.los.fading = parse_fading_spec(*s);
        if (auto s = ini.text("fading", "nlos"))
            rc.model.nlos.fading = parse_fading_spec(*s);

        ini.number("link_budget", "tx_power_dbm", rc.budget.tx_power_dbm);
        ini.number("link_budget", "tx_gain_dbi", rc.budget.tx_gain_dbi);
        ini.number("link_budget", "rx_gain_dbi", rc.budget.rx_gain_dbi);
        ini.number("link_budget", "noise_floor_dbm", rc.budget.noise_floor_dbm);

        auto &dec = rc.analysis.decompose;
        dec.base = rc.model.pathloss;
        if (auto s = ini.text("extract", "mode"))
        {
            if (*s == "free")
                dec.mode = InterceptMode::FreeIntercepts;
            else if (*s == "fixed")
                dec.mode = InterceptMode::FixedIntercepts;
            else
                throw ConfigError("config: extract.mode must be free or fixed.");
        }
        if (auto s = ini.text("extract", "domain"))
        {
            if (*s == "linear")
                dec.domain = AveragingDomain::LinearPower;
            else if (*s == "db")
                dec.domain = AveragingDomain::Decibel;
            else
                throw ConfigError("config: extract.domain must be linear or db.");
        }
        ini.number("extract", "large_scale_wavelengths", dec.large_scale_wavelengths);
        ini.number("extract", "small_scale_wavelengths", dec.small_scale_wavelengths);
        if (auto s = ini.text("extract", "families"); s && *s != "all")
        {
            rc.analysis.families.clear();
            std::istringstream in(*s);
            std::string name;
            while (std::getline(in, name, ','))
            {
                name.erase(0, name.find_first_not_of(" \t"));
                name.erase(name.find_last_not_of(" \t") + 1);
                try
                {
                    rc.analysis.families.push_back(parse_family(name));
                }
                catch (const std::invalid_argument &e)
                {
                    throw ConfigError(std::string("config: ") + e.what());
                }
            }
            if (rc.analysis.families.empty())
                throw ConfigError("config: extract.families is empty.");
        }
        if (!(dec.large_scale_wavelengths > 0.0) || !(dec.small_scale_wavelengths > 0.0))
            throw ConfigError("config: extraction windows must be positive.");

        rc.flight.validate();
        try
        {
            rc.model.pathloss.validate();
            rc.model.los.shadowing.validate();
            rc.model.nlos.shadowing.validate();
        }
        catch (const std::domain_error &e)
        {
            throw ConfigError(std::string("config: ") + e.what());
        }
        rc.budget.validate();
        return rc;
    }

    inline std::string read_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError("Cannot open '" + path + "'.");
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    inline RunConfig load_run_config(const std::string &path, std::optional<std::string> preset_override = {})
    {
        return parse_run_config(read_file(path), std::move(preset_override));
    }

    // ---- Report (JSON) ----------------------------------------------------------------------------

    struct Provenance
    {
        std::string tool_version{kVersion};
        std::string config_sha256;
        std::string trace_sha256;
        std::optional<std::uint64_t> seed;
        std::string preset;
    };

    inline nlohmann::json to_json(const FadingDistribution &d)
    {
        nlohmann::json j;
        j["family"] = std::string(to_string(family_of(d)));
        for (const auto &p : parameters(d))
            j["parameters"][std::string(p.name)] = p.value;
        return j;
    }

    inline FadingDistribution fading_from_json(const nlohmann::json &j)
    {
        const auto fam = parse_family(j.at("family").get<std::string>());
        std::vector<double> p;
        for (const auto &name : parameters(make_distribution(fam, std::vector<double>(parameter_count(fam), 1.0))))
            p.push_back(j.at("parameters").at(std::string(name.name)).get<double>());
        return make_distribution(fam, p);
    }

    inline nlohmann::json to_json(const PathLossParams &p)
    {
        return {{"intercept_los_db", p.intercept_los_db}, {"intercept_nlos_db", p.intercept_nlos_db},
                {"distance_coeff", p.dist_exponent_coeff}, {"frequency_coeff", p.freq_coeff},
                {"n_los", p.n_los},           {"n_nlos", p.n_nlos}};
    }

    inline PathLossParams pathloss_from_json(const nlohmann::json &j)
    {
        PathLossParams p;
        p.name = "fitted";
        p.intercept_los_db = j.at("intercept_los_db").get<double>();
        p.intercept_nlos_db = j.at("intercept_nlos_db").get<double>();
        p.dist_exponent_coeff = j.at("distance_coeff").get<double>();
        p.freq_coeff = j.at("frequency_coeff").get<double>();
        p.n_los = j.at("n_los").get<double>();
        p.n_nlos = j.at("n_nlos").get<double>();
        return p;
    }

    // The report carries the fitted parameters and the per-sample series needed to redraw every
    // curve (path-loss trend, SF/FF components, envelope PDFs and CDFs) without the trace.
    inline nlohmann::json report_to_json(const Analysis &a, const Provenance &prov)
    {
        using nlohmann::json;
        const auto &r = a.report;
        const auto &d = a.decomposition;

        json j;
        j["provenance"] = {{"tool", "uavchan"},
                           {"tool_version", prov.tool_version},
                           {"config_sha256", prov.config_sha256},
                           {"trace_sha256", prov.trace_sha256},
                           {"preset", prov.preset}};
        j["provenance"]["seed"] = prov.seed ? json(*prov.seed) : json(nullptr);
        j["frequency_hz"] = r.frequency_hz;
        j["sample_count"] = r.sample_count;
        j["pathloss"] = {{"parameters", to_json(r.pathloss.params)},
                         {"rms_los_db", r.pathloss.rms_los_db},
                         {"rms_nlos_db", r.pathloss.rms_nlos_db},
                         {"rms_db", r.pathloss.rms_db},
                         {"n_samples_los", r.pathloss.n_los},
                         {"n_samples_nlos", r.pathloss.n_nlos}};

        j["conditions"] = json::array();
        for (const auto &c : r.conditions)
        {
            std::vector<double> ff;
            for (std::size_t i = 0; i < d.state.size(); ++i)
                if (d.state[i] == c.state)
                    ff.push_back(d.ff_db[i]);
            auto env = envelope_from_ff(ff).samples;
            std::sort(env.begin(), env.end());

            json cj;
            cj["state"] = std::string(to_string(c.state));
            cj["sample_count"] = c.sample_count;
            cj["shadowing"] = {{"mean_db", c.shadowing.params.mean_db},
                               {"sigma_db", c.shadowing.params.sigma_db},
                               {"max_abs_db", c.shadowing.max_abs_db}};
            cj["fading_statistics"] = {{"p1_db", c.fading.p1_db},     {"p50_db", c.fading.p50_db},
                                       {"depth_db", c.fading.depth_db}, {"min_db", c.fading.min_db},
                                       {"max_db", c.fading.max_db},   {"max_abs_db", c.fading.max_abs_db},
                                       {"count", c.fading.count}};
            cj["envelope_median_scale"] = c.envelope_median_scale;
            cj["ranking"] = json::array();
            for (const auto &f : c.ranking)
            {
                auto fj = to_json(f.distribution);
                fj["log_likelihood"] = f.log_likelihood;
                fj["parameter_count"] = parameter_count(family_of(f.distribution));
                fj["iterations"] = f.iterations;
                cj["ranking"].push_back(std::move(fj));
            }
            cj["envelope_sorted"] = env;
            j["conditions"].push_back(std::move(cj));
        }

        std::vector<std::string> states;
        for (auto s : d.state)
            states.emplace_back(to_string(s));
        j["series"] = {{"altitude_m", d.altitude_m},         {"state", states},
                       {"loss_db", d.loss_db},               {"large_scale_db", d.large_scale_db},
                       {"small_scale_db", d.small_scale_db}, {"pl0_fit_db", d.pl0_fit_db},
                       {"sf_db", d.sf_db},                   {"ff_db", d.ff_db}};
        return j;
    }

    inline std::string dump_report(const nlohmann::json &j) { return j.dump(2) + "\n"; }
}

#endif
