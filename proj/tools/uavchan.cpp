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

// Command-line front end. Exit codes: 0 success, 1 usage/configuration error, 2 data or fit error.

#include "uavchan/io.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace uavchan;

namespace
{
    constexpr int kExitUsage = 1;
    constexpr int kExitData = 2;

    struct UsageError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    std::string sha256_hex(const std::string &bytes)
    {
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
            throw std::runtime_error("SHA-256 failed");
        static constexpr char hex[] = "0123456789abcdef";
        std::string out;
        for (unsigned int i = 0; i < len; ++i)
        {
            out.push_back(hex[md[i] >> 4]);
            out.push_back(hex[md[i] & 0xF]);
        }
        return out;
    }

    void write_text(const std::string &path, const std::string &text)
    {
        if (path == "-")
        {
            std::cout << text;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw UsageError("Cannot write '" + path + "'.");
        out << text;
        if (!out)
            throw UsageError("Write to '" + path + "' failed.");
    }

    RunConfig load_config(const std::string &path, const std::string &preset)
    {
        std::optional<std::string> override;
        if (!preset.empty())
            override = preset;
        return path.empty() ? parse_run_config("", override) : load_run_config(path, override);
    }

    std::string fmt(double v, int decimals = 2)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
        return buf;
    }

    std::string trace_csv(const Trace &t)
    {
        std::ostringstream os;
        write_trace_csv(os, t);
        return os.str();
    }

    // ---- simulate ----------------------------------------------------------------------------------

    struct SimulateArgs
    {
        std::string config, preset, out = "-", received;
        std::optional<std::uint64_t> seed;
    };

    int run_simulate(const SimulateArgs &a)
    {
        auto rc = load_config(a.config, a.preset);
        if (a.seed)
            rc.flight.seed = *a.seed;
        const auto trace = synthesize_flight(rc.flight, rc.model);
        write_text(a.out, trace_csv(trace));
        if (!a.received.empty())
        {
            std::string text = "altitude_m,rx_power_dbm,below_noise_floor\n";
            for (const auto &s : received_power(trace, rc.budget))
            {
                detail::append_fixed(text, s.altitude_m);
                text.push_back(',');
                detail::append_fixed(text, s.power_dbm);
                text += s.below_noise_floor ? ",1\n" : ",0\n";
            }
            write_text(a.received, text);
        }
        return 0;
    }

    // ---- extract -----------------------------------------------------------------------------------

    struct ExtractArgs
    {
        std::string trace, scenario, preset, mode, domain, report = "-";
    };

    void print_summary(std::ostream &os, const FitReport &r)
    {
        const auto &p = r.pathloss.params;
        os << "path loss: A_los " << fmt(p.intercept_los_db, 3) << " dB, A_nlos " << fmt(p.intercept_nlos_db, 3)
           << " dB, n_los " << fmt(p.n_los, 4) << " dB/m, n_nlos " << fmt(p.n_nlos, 4) << " dB/m, rms "
           << fmt(r.pathloss.rms_db, 3) << " dB\n";
        for (const auto &c : r.conditions)
        {
            os << to_string(c.state) << ": samples " << c.sample_count << ", SF mean " << fmt(c.shadowing.params.mean_db)
               << " dB sigma " << fmt(c.shadowing.params.sigma_db) << " dB max|SF| " << fmt(c.shadowing.max_abs_db)
               << " dB, fading depth " << fmt(c.fading.depth_db) << " dB\n";
            for (const auto &f : c.ranking)
            {
                os << "  " << to_string(family_of(f.distribution)) << " ll " << fmt(f.log_likelihood, 3);
                for (const auto &np : parameters(f.distribution))
                    os << ' ' << np.name << ' ' << fmt(np.value, 4);
                os << '\n';
            }
        }
    }

    int run_extract(const ExtractArgs &a)
    {
        auto rc = load_config(a.scenario, a.preset);
        auto &dec = rc.analysis.decompose;
        if (a.mode == "fixed")
            dec.mode = InterceptMode::FixedIntercepts;
        else if (a.mode == "free")
            dec.mode = InterceptMode::FreeIntercepts;
        else if (!a.mode.empty())
            throw UsageError("--mode must be free or fixed.");
        if (a.domain == "db")
            dec.domain = AveragingDomain::Decibel;
        else if (a.domain == "linear")
            dec.domain = AveragingDomain::LinearPower;
        else if (!a.domain.empty())
            throw UsageError("--domain must be linear or db.");

        std::string csv;
        try
        {
            csv = read_file(a.trace);
        }
        catch (const ConfigError &e)
        {
            throw std::domain_error(e.what());
        }
        std::istringstream in(csv);
        const auto trace = read_trace_csv(in, rc.flight.freq, rc.flight.samples_per_meter, rc.flight.scenario);
        const auto analysis = analyze(trace, rc.analysis);

        Provenance prov;
        prov.config_sha256 = sha256_hex(rc.source_text);
        prov.trace_sha256 = sha256_hex(csv);
        prov.preset = rc.preset;
        write_text(a.report, dump_report(report_to_json(analysis, prov)));
        if (a.report != "-")
            print_summary(std::cout, analysis.report);
        return 0;
    }

    // ---- evaluate ----------------------------------------------------------------------------------

    struct EvaluateArgs
    {
        std::string model, scenario, state, check = "advisory", preset;
        std::optional<double> d_km, f_mhz, freq_hz, altitude, d3d_m;
    };

    int run_evaluate(const EvaluateArgs &a)
    {
        std::optional<Frequency> freq;
        if (a.freq_hz)
            freq = Frequency::from_hz(*a.freq_hz);
        else if (a.f_mhz)
            freq = Frequency::from_mhz(*a.f_mhz);

        // The altitude model needs a coefficient set; without one, pick the preset matching the carrier.
        std::string preset = a.preset;
        if (preset.empty() && a.model == "paper" && freq)
        {
            if (freq->hz() == 1.0e9)
                preset = "paper-1ghz";
            else if (freq->hz() == 4.0e9)
                preset = "paper-4ghz";
        }
        if (preset.empty() && a.model == "paper" && a.scenario.empty())
            throw UsageError("--model paper needs --preset (or a 1 GHz / 4 GHz carrier).");
        if (preset.empty() && a.scenario.empty())
            preset = "custom";
        const auto rc = load_config(a.scenario, preset);
        if (!freq && (!a.scenario.empty() || preset != "custom"))
            freq = rc.flight.freq;
        if (!freq)
            throw UsageError("Give the carrier with --freq (Hz) or --f-mhz.");

        std::optional<LinkGeometry> geom;
        if (a.altitude)
            geom = link_geometry(rc.flight.scenario, *a.altitude);

        auto distance_m = [&]() -> double
        {
            if (a.d_km)
                return *a.d_km * 1.0e3;
            if (a.d3d_m)
                return *a.d3d_m;
            if (geom)
                return geom->d3d_m;
            throw UsageError("Give a distance (--d-km / --d3d-m) or --altitude.");
        };
        auto state = [&]() -> LinkState
        {
            if (a.state == "los")
                return LinkState::Los;
            if (a.state == "nlos")
                return LinkState::Nlos;
            if (!a.state.empty())
                throw UsageError("--state must be los or nlos.");
            if (geom)
                return geom->los;
            throw UsageError("Give --state or --altitude.");
        };

        double loss = 0.0;
        if (a.model == "fspl")
            loss = fspl_db_m(distance_m(), *freq);
        else if (a.model == "3gpp")
        {
            ApplicabilityCheck check = ApplicabilityCheck::Advisory;
            if (a.check == "off")
                check = ApplicabilityCheck::Off;
            else if (a.check == "strict")
                check = ApplicabilityCheck::Strict;
            else if (a.check != "advisory")
                throw UsageError("--check must be off, advisory or strict.");
            const double h = a.altitude.value_or(0.0);
            const auto s = state();
            if (geom && !a.d3d_m && !a.d_km)
            {
                LinkGeometry g = *geom;
                g.los = s;
                loss = pl_3gpp_uma(g, rc.flight.scenario.gs_height_m, *freq, check).loss_db;
            }
            else
            {
                const double d = distance_m();
                if (check != ApplicabilityCheck::Off && s == LinkState::Los && a.altitude)
                {
                    const double gs = rc.flight.scenario.gs_height_m;
                    const double d2d = std::sqrt(std::max(0.0, d * d - (h - gs) * (h - gs)));
                    LinkGeometry g{d2d, d, elevation_angle_deg(h, gs, std::max(d2d, 1e-9)), s, h};
                    loss = pl_3gpp_uma(g, gs, *freq, check).loss_db;
                }
                else
                    loss = pl_3gpp_uma_db(d, *freq, h, s);
            }
        }
        else if (a.model == "paper")
        {
            if (!a.altitude)
                throw UsageError("--model paper needs --altitude.");
            loss = pl_altitude_model_db(distance_m(), *freq, *a.altitude, state(), rc.model.pathloss);
        }
        else
            throw UsageError("--model must be fspl, 3gpp or paper.");
        std::cout << fmt(loss) << '\n';
        return 0;
    }

    // ---- roundtrip ---------------------------------------------------------------------------------

    struct RoundtripArgs
    {
        std::string config, preset;
        std::uint64_t seed = 1;
        int repeats = 1;
        int threads = 0;
    };

    struct RecoveryRow
    {
        std::string name;
        double generator;
        double recovered;
    };

    std::optional<double> beta_of(const std::optional<FadingDistribution> &d)
    {
        if (d && std::holds_alternative<LogLogistic>(*d))
            return std::get<LogLogistic>(*d).beta();
        return std::nullopt;
    }

    std::vector<RecoveryRow> roundtrip_once(const RunConfig &rc, std::uint64_t seed, std::string &top_families)
    {
        FlightConfig cfg = rc.flight;
        cfg.seed = seed;
        const auto trace = synthesize_flight(cfg, rc.model);
        const auto an = analyze(trace, rc.analysis);
        const auto &gen = rc.model.pathloss;
        const auto &fit = an.report.pathloss.params;

        std::vector<RecoveryRow> rows;
        if (an.report.pathloss.n_los > 0)
        {
            rows.push_back({"intercept_los_db", gen.intercept_los_db, fit.intercept_los_db});
            rows.push_back({"n_los", gen.n_los, fit.n_los});
        }
        if (an.report.pathloss.n_nlos > 0)
        {
            rows.push_back({"intercept_nlos_db", gen.intercept_nlos_db, fit.intercept_nlos_db});
            rows.push_back({"n_nlos", gen.n_nlos, fit.n_nlos});
        }
        for (const auto &c : an.report.conditions)
        {
            const auto &m = rc.model.condition(c.state);
            const std::string tag = c.state == LinkState::Los ? "los" : "nlos";
            rows.push_back({"sigma_" + tag + "_db", m.shadowing.sigma_db, c.shadowing.params.sigma_db});
            if (c.ranking.empty())
                continue;
            top_families += (top_families.empty() ? "" : ",") + tag + ":" +
                            std::string(to_string(family_of(c.ranking.front().distribution)));
            if (auto b = beta_of(m.fading))
                for (const auto &f : c.ranking)
                    if (auto fb = beta_of(f.distribution))
                        rows.push_back({"beta_" + tag, *b, *fb});
        }
        return rows;
    }

    int run_roundtrip(const RoundtripArgs &a)
    {
        if (a.repeats < 1)
            throw UsageError("--repeats must be >= 1.");
        const auto rc = load_config(a.config, a.preset);

        const auto n = static_cast<std::size_t>(a.repeats);
        std::vector<std::vector<RecoveryRow>> results(n);
        std::vector<std::string> tops(n);
        std::vector<std::string> errors(n);
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const std::size_t workers = std::min<std::size_t>(n, a.threads > 0 ? static_cast<unsigned>(a.threads) : hw);

        // Each worker owns a disjoint set of seeds; results land in seed order.
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w]
                              {
                for (std::size_t i = w; i < n; i += workers)
                {
                    try
                    {
                        results[i] = roundtrip_once(rc, a.seed + i, tops[i]);
                    }
                    catch (const std::exception &e)
                    {
                        errors[i] = e.what();
                    }
                } });
        for (auto &t : pool)
            t.join();
        for (std::size_t i = 0; i < n; ++i)
            if (!errors[i].empty())
                throw FitError("seed " + std::to_string(a.seed + i) + ": " + errors[i]);

        std::printf("%-8s %-20s %14s %14s %12s %12s\n", "seed", "parameter", "generator", "recovered", "abs_error",
                    "rel_error");
        auto rel = [](double g, double r)
        { return g != 0.0 ? std::abs(r - g) / std::abs(g) : std::abs(r - g); };
        for (std::size_t i = 0; i < n; ++i)
        {
            for (const auto &row : results[i])
                std::printf("%-8llu %-20s %14.6f %14.6f %12.3e %12.3e\n",
                            static_cast<unsigned long long>(a.seed + i), row.name.c_str(), row.generator,
                            row.recovered, std::abs(row.recovered - row.generator), rel(row.generator, row.recovered));
            std::printf("%-8llu %-20s %s\n", static_cast<unsigned long long>(a.seed + i), "top_family",
                        tops[i].empty() ? "none" : tops[i].c_str());
        }
        if (n > 1)
        {
            std::printf("\n%-29s %14s %14s %12s\n", "parameter (mean over seeds)", "generator", "recovered",
                        "rel_error");
            for (std::size_t k = 0; k < results.front().size(); ++k)
            {
                double acc = 0.0;
                for (const auto &r : results)
                    acc += r[k].recovered;
                const auto &row = results.front()[k];
                const double mean = acc / static_cast<double>(n);
                std::printf("%-29s %14.6f %14.6f %12.3e\n", row.name.c_str(), row.generator, mean,
                            rel(row.generator, mean));
            }
        }
        return 0;
    }

    // ---- plotdata ----------------------------------------------------------------------------------

    struct PlotArgs
    {
        std::string report, what, out = "-", condition;
        int bins = 60;
    };

    int run_plotdata(const PlotArgs &a)
    {
        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(read_file(a.report));
        }
        catch (const nlohmann::json::exception &e)
        {
            throw std::domain_error(std::string("report: ") + e.what());
        }
        catch (const ConfigError &e)
        {
            throw std::domain_error(e.what());
        }

        std::string text;
        auto cell = [&](double v)
        {
            text.push_back(',');
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.9g", v);
            text += buf;
        };

        if (a.what == "pathloss")
        {
            const auto &s = j.at("series");
            text = "altitude_m,state,loss_db,large_scale_db,pl0_fit_db,sf_db,ff_db\n";
            const auto &alt = s.at("altitude_m");
            for (std::size_t i = 0; i < alt.size(); ++i)
            {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.9g", alt[i].get<double>());
                text += buf;
                text += "," + s.at("state")[i].get<std::string>();
                cell(s.at("loss_db")[i].get<double>());
                cell(s.at("large_scale_db")[i].get<double>());
                cell(s.at("pl0_fit_db")[i].get<double>());
                cell(s.at("sf_db")[i].get<double>());
                cell(s.at("ff_db")[i].get<double>());
                text.push_back('\n');
            }
        }
        else if (a.what == "pdf" || a.what == "cdf")
        {
            if (a.bins < 2)
                throw UsageError("--bins must be >= 2.");
            bool any = false;
            for (const auto &c : j.at("conditions"))
            {
                const auto state = c.at("state").get<std::string>();
                if (!a.condition.empty() && state != a.condition)
                    continue;
                const auto env = c.at("envelope_sorted").get<std::vector<double>>();
                if (env.empty())
                    continue;
                std::vector<FadingDistribution> fitted;
                for (const auto &f : c.at("ranking"))
                    fitted.push_back(fading_from_json(f));
                if (!any)
                {
                    text = "condition,x,empirical";
                    for (const auto &f : fitted)
                        text += "," + std::string(to_string(family_of(f)));
                    text.push_back('\n');
                    any = true;
                }
                const double n = static_cast<double>(env.size());
                if (a.what == "cdf")
                {
                    for (std::size_t i = 0; i < env.size(); ++i)
                    {
                        text += state;
                        cell(env[i]);
                        cell(static_cast<double>(i + 1) / n);
                        for (const auto &f : fitted)
                            cell(cdf(f, env[i]));
                        text.push_back('\n');
                    }
                }
                else
                {
                    // Histogram density over [0, p99.5] to keep the heavy tail from flattening the plot.
                    const double hi = empirical_quantile(env, 0.995);
                    const double width = hi / a.bins;
                    std::vector<double> counts(static_cast<std::size_t>(a.bins), 0.0);
                    for (double x : env)
                        if (x < hi)
                            counts[static_cast<std::size_t>(x / width)] += 1.0;
                    for (int b = 0; b < a.bins; ++b)
                    {
                        const double x = (b + 0.5) * width;
                        text += state;
                        cell(x);
                        cell(counts[static_cast<std::size_t>(b)] / (n * width));
                        for (const auto &f : fitted)
                            cell(pdf(f, x));
                        text.push_back('\n');
                    }
                }
            }
            if (!any)
                throw std::domain_error("report has no envelope samples for the requested condition.");
        }
        else
            throw UsageError("--what must be pdf, cdf or pathloss.");
        write_text(a.out, text);
        return 0;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"uavchan: air-ground channel synthesis and analysis for vertical UAV flights"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    SimulateArgs sim;
    auto *s = app.add_subcommand("simulate", "Synthesize a vertical-flight loss trace.");
    s->add_option("--config", sim.config, "INI run configuration")->check(CLI::ExistingFile);
    s->add_option("--preset", sim.preset, "paper-1ghz | paper-4ghz | custom (overrides the config)");
    s->add_option("--seed", sim.seed, "RNG seed (overrides the config)");
    s->add_option("--out", sim.out, "trace CSV, - for stdout");
    s->add_option("--received", sim.received, "optional received-power CSV");

    ExtractArgs ex;
    auto *e = app.add_subcommand("extract", "Decompose a trace and fit path loss, shadowing and fading.");
    e->add_option("--trace", ex.trace, "trace CSV")->required();
    e->add_option("--scenario", ex.scenario, "INI configuration with scenario, frequency and resolution")
        ->check(CLI::ExistingFile);
    e->add_option("--preset", ex.preset, "preset supplying frequency and base intercepts");
    e->add_option("--mode", ex.mode, "free | fixed intercepts");
    e->add_option("--domain", ex.domain, "linear | db local-mean averaging");
    e->add_option("--report", ex.report, "JSON report, - for stdout");

    EvaluateArgs ev;
    auto *v = app.add_subcommand("evaluate", "Evaluate one path-loss model.");
    v->add_option("--model", ev.model, "fspl | 3gpp | paper")->required();
    v->add_option("--d-km", ev.d_km, "link distance, km");
    v->add_option("--d3d-m", ev.d3d_m, "3-D link distance, m");
    v->add_option("--f-mhz", ev.f_mhz, "carrier, MHz");
    v->add_option("--freq", ev.freq_hz, "carrier, Hz");
    v->add_option("--altitude", ev.altitude, "UAV altitude, m (derives distance and link state from the scenario)");
    v->add_option("--state", ev.state, "los | nlos (overrides the geometric state)");
    v->add_option("--scenario", ev.scenario, "INI configuration")->check(CLI::ExistingFile);
    v->add_option("--preset", ev.preset, "paper-1ghz | paper-4ghz (for --model paper)");
    v->add_option("--check", ev.check, "3GPP applicability check: off | advisory | strict");

    RoundtripArgs rt;
    auto *r = app.add_subcommand("roundtrip", "Synthesize then extract and tabulate parameter recovery.");
    r->add_option("--seed", rt.seed, "first seed");
    r->add_option("--config", rt.config, "INI run configuration")->check(CLI::ExistingFile);
    r->add_option("--preset", rt.preset, "preset override");
    r->add_option("--repeats", rt.repeats, "number of consecutive seeds");
    r->add_option("--threads", rt.threads, "worker threads, 0 = hardware concurrency");

    PlotArgs pa;
    auto *p = app.add_subcommand("plotdata", "Emit plottable columns from a report.");
    p->add_option("--report", pa.report, "JSON report")->required();
    p->add_option("--what", pa.what, "pdf | cdf | pathloss")->required();
    p->add_option("--out", pa.out, "CSV output, - for stdout");
    p->add_option("--condition", pa.condition, "LOS | NLOS (default both)");
    p->add_option("--bins", pa.bins, "histogram bins for pdf");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &err)
    {
        const int code = app.exit(err);
        return code == 0 ? 0 : kExitUsage;
    }

    try
    {
        if (*s)
            return run_simulate(sim);
        if (*e)
            return run_extract(ex);
        if (*v)
            return run_evaluate(ev);
        if (*r)
            return run_roundtrip(rt);
        if (*p)
            return run_plotdata(pa);
    }
    catch (const UsageError &err)
    {
        std::cerr << "error: " << err.what() << '\n';
        return kExitUsage;
    }
    catch (const ConfigError &err)
    {
        std::cerr << "error: " << err.what() << '\n';
        return kExitUsage;
    }
    catch (const std::invalid_argument &err)
    {
        std::cerr << "error: " << err.what() << '\n';
        return kExitUsage;
    }
    catch (const std::exception &err)
    {
        std::cerr << "error: " << err.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
