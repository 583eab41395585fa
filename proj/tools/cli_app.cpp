/*
   Copyright 2026 The qbeat Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "cli_app.hpp"

#include <qbeat/direct_detection.hpp>
#include <qbeat/errors.hpp>
#include <qbeat/estimation.hpp>
#include <qbeat/fisher.hpp>
#include <qbeat/report_io.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace qbeat::cli {

namespace {

using nlohmann::json;

// Config files are JSON objects whose keys are long flag names without the
// leading dashes. Arrays feed repeatable options. Keys apply to `section`,
// the subcommand being run.
class JsonConfig : public CLI::Config {
public:
    std::string section;

    std::string to_config(CLI::App const* app, bool default_also, bool, std::string) const override
    {
        json j = json::object();
        for (CLI::Option const* opt : app->get_options()) {
            if (opt->get_lnames().empty() || !opt->get_configurable())
                continue;
            std::string const& name = opt->get_lnames().front();
            if (opt->count() > 0)
                j[name] = opt->as<std::vector<std::string>>();
            else if (default_also && !opt->get_default_str().empty())
                j[name] = opt->get_default_str();
        }
        return j.dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override
    {
        json j;
        try {
            j = json::parse(input);
        }
        catch (json::exception const& e) {
            throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object())
            throw CLI::ConversionError("config must be a JSON object");
        std::vector<CLI::ConfigItem> items;
        for (auto const& [key, value] : j.items()) {
            CLI::ConfigItem item;
            if (!section.empty())
                item.parents = {section};
            item.name = key;
            if (value.is_array())
                for (auto const& v : value)
                    item.inputs.push_back(scalar(v));
            else
                item.inputs.push_back(scalar(value));
            items.push_back(std::move(item));
        }
        return items;
    }

private:
    static std::string scalar(json const& v)
    {
        if (v.is_string())
            return v.get<std::string>();
        if (v.is_boolean())
            return v.get<bool>() ? "true" : "false";
        if (v.is_number_float())
            return format_number(v.get<double>());
        if (v.is_number())
            return v.dump();
        throw CLI::ConversionError("config values must be scalars or arrays of scalars");
    }
};

enum class Format { csv, json };

struct Common {
    std::string out = "-";
    Format format = Format::csv;
    std::optional<double> sigma_t_fs;
};

struct PhysicsArgs {
    double delta_t = 0.0;
    double nu = 1.0;
    double eta = 1.0;
    double tau_r = 0.0;
};

void add_common(CLI::App& sub, Common& c, Format default_format)
{
    c.format = default_format;
    sub.add_option("--out", c.out, "Output path, - for standard output")->capture_default_str();
    std::map<std::string, Format> const formats{{"csv", Format::csv}, {"json", Format::json}};
    sub.add_option("--format", c.format, "Output format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
        ->capture_default_str();
    sub.add_option("--sigma-t-fs", c.sigma_t_fs,
                   "Wavepacket width in femtoseconds; time inputs are then read in femtoseconds")
        ->check(CLI::PositiveNumber);
}

void add_physics(CLI::App& sub, PhysicsArgs& p, bool delay_required)
{
    auto* dt = sub.add_option("--delta-t", p.delta_t, "Signal delay, in sigma_t unless --sigma-t-fs is given");
    if (delay_required)
        dt->required();
    sub.add_option("--nu", p.nu, "Indistinguishability in [0, 1]")->capture_default_str();
    sub.add_option("--eta", p.eta, "Detection efficiency in (0, 1]")->capture_default_str();
    sub.add_option("--tau-r", p.tau_r, "Reference offset, same units as --delta-t")->capture_default_str();
}

// Time inputs in femtoseconds become sigma_t units.
double to_sigma_units(double t, Common const& c) { return c.sigma_t_fs ? t / *c.sigma_t_fs : t; }

ExperimentConfig make_config(PhysicsArgs const& p, Common const& c)
{
    return ExperimentConfig(SpectralProfile(1.0), to_sigma_units(p.delta_t, c), p.nu, p.eta,
                            to_sigma_units(p.tau_r, c));
}

// Writes through `out` or a file, flushing and checking the stream.
void emit(Common const& c, std::ostream& out, std::function<void(std::ostream&)> const& body)
{
    if (c.out == "-") {
        body(out);
        out.flush();
        return;
    }
    std::ofstream file(c.out, std::ios::binary);
    if (!file)
        throw InvalidArgument("cannot open output file " + c.out);
    body(file);
    file.flush();
    if (!file)
        throw NumericalFailure("failed writing " + c.out);
}

// Rows of named columns, written as CSV or as a JSON array of objects.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;

    void write(std::ostream& os, Format f, json meta) const
    {
        if (f == Format::csv) {
            for (std::size_t i = 0; i < columns.size(); ++i)
                os << (i ? "," : "") << columns[i];
            os << '\n';
            for (auto const& r : rows) {
                for (std::size_t i = 0; i < r.size(); ++i) {
                    if (i)
                        os << ',';
                    if (r[i].is_number_float())
                        os << format_number(r[i].get<double>());
                    else if (r[i].is_string())
                        os << r[i].get<std::string>();
                    else
                        os << r[i].dump();
                }
                os << '\n';
            }
            return;
        }
        json arr = json::array();
        for (auto const& r : rows) {
            json obj = json::object();
            for (std::size_t i = 0; i < r.size(); ++i)
                obj[columns[i]] = r[i];
            arr.push_back(std::move(obj));
        }
        meta["rows"] = std::move(arr);
        os << meta.dump(2) << '\n';
    }
};

std::string trim_number(double v)
{
    // Short labels such as nu=0.95 or T=5.
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace

int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Frequency-resolved two-photon interference: delay estimation toolkit", "qbeat"};
    auto config = std::make_shared<JsonConfig>();
    app.config_formatter(config);
    app.set_config("--config", "", "JSON file with the same keys as the long flags; flags override it");
    app.fallthrough();
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    std::function<void()> action;

    // beat-curve
    Common bc_common;
    PhysicsArgs bc_phys;
    std::size_t bc_points = 1201;
    double bc_range = 6.0;
    auto* bc = app.add_subcommand("beat-curve", "Outcome densities over a frequency-difference grid");
    add_common(*bc, bc_common, Format::csv);
    add_physics(*bc, bc_phys, true);
    bc->add_option("--points", bc_points, "Grid points")->check(CLI::Range(2, 10000000))->capture_default_str();
    bc->add_option("--range", bc_range, "Grid half-width in sigma_omega")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bc->callback([&] {
        action = [&] {
            auto const cfg = make_config(bc_phys, bc_common);
            double const sw = cfg.profile().sigma_omega();
            Table t{{"delta_omega_over_sigma_omega", "p_coincidence", "p_bunching"}, {}};
            t.rows.reserve(bc_points);
            double const span = 2.0 * bc_range;
            double const last = static_cast<double>(bc_points - 1);
            for (std::size_t k = 0; k < bc_points; ++k) {
                double const x = -bc_range + span * static_cast<double>(k) / last;
                double const dw = x * sw;
                t.rows.push_back({x, joint_probability(cfg, {dw, PortPattern::A}),
                                  joint_probability(cfg, {dw, PortPattern::B})});
            }
            emit(bc_common, out, [&](std::ostream& os) {
                t.write(os, bc_common.format, json{{"cfg", to_json(cfg)}});
            });
        };
    });

    // fisher-scan
    Common fs_common;
    std::vector<double> fs_nu{1.0, 0.95};
    std::vector<double> fs_resolution{5.0, 10.0};
    double fs_eta = 1.0;
    double fs_dt_max = 10.0;
    std::size_t fs_points = 201;
    bool fs_bucket = false;
    auto* fs = app.add_subcommand("fisher-scan", "Fisher information over delay, relative to the quantum limit");
    add_common(*fs, fs_common, Format::csv);
    fs->add_option("--nu", fs_nu, "Indistinguishability values to scan")->capture_default_str();
    fs->add_option("--resolution", fs_resolution, "Direct-detection bin widths, same units as delays")
        ->capture_default_str();
    fs->add_option("--eta", fs_eta, "Detection efficiency in (0, 1]")->capture_default_str();
    fs->add_option("--delta-t-max", fs_dt_max, "Largest delay")->check(CLI::PositiveNumber)->capture_default_str();
    fs->add_option("--points", fs_points, "Delay grid points")->check(CLI::Range(2, 1000000))->capture_default_str();
    fs->add_flag("--bucket", fs_bucket, "Also emit bucket-detector series");
    fs->callback([&] {
        action = [&] {
            SpectralProfile const profile(1.0);
            double const q = quantum_limit(profile).value;
            double const dt_max = to_sigma_units(fs_dt_max, fs_common);
            std::vector<double> resolutions;
            for (double r : fs_resolution) {
                if (!(r > 0.0))
                    throw InvalidArgument("resolutions must be positive");
                resolutions.push_back(to_sigma_units(r, fs_common));
            }
            // Configs validate nu and eta before any quadrature starts.
            for (double nu : fs_nu)
                ExperimentConfig(profile, 0.0, nu, fs_eta);

            Table t{{"delta_t_over_sigma_t", "series", "label", "f_over_q"}, {}};
            double const last = static_cast<double>(fs_points - 1);
            for (std::size_t k = 0; k < fs_points; ++k) {
                double const dt = dt_max * static_cast<double>(k) / last;
                for (double nu : fs_nu) {
                    ExperimentConfig const cfg(profile, dt, nu, fs_eta);
                    std::string const label = "nu=" + trim_number(nu);
                    t.rows.push_back({dt, "nu", label, fisher_partial(cfg).value / q});
                    if (fs_bucket)
                        t.rows.push_back({dt, "bucket", label, bucket_fisher(cfg).value / q});
                }
                for (std::size_t i = 0; i < resolutions.size(); ++i) {
                    auto const grid = DetectionGrid::covering(profile, resolutions[i], dt);
                    t.rows.push_back({dt, "trd", "T=" + trim_number(fs_resolution[i]),
                                      trd_fisher_binned(profile, dt, grid).value / q});
                }
                t.rows.push_back({dt, "trd", "unbinned", trd_fisher_unbinned(profile, dt).value / q});
            }
            emit(fs_common, out, [&](std::ostream& os) {
                t.write(os, fs_common.format, json{{"eta", fs_eta}});
            });
        };
    });

    // simulate
    Common sim_common;
    PhysicsArgs sim_phys;
    std::vector<std::size_t> sim_n{1000, 2000, 5000, 10000};
    StudyOptions sim_opts;
    std::uint64_t sim_seed = 1;
    std::string sim_variance = "control";
    auto* sim = app.add_subcommand("simulate", "Monte Carlo study of the maximum-likelihood delay estimator");
    add_common(*sim, sim_common, Format::json);
    add_physics(*sim, sim_phys, true);
    sim->add_option("--n", sim_n, "Detected pairs per trial; repeat for several sizes")->capture_default_str();
    sim->add_option("--trials", sim_opts.trials, "Trials per size")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 32))
        ->capture_default_str();
    sim->add_option("--seed", sim_seed, "Master seed")->capture_default_str();
    sim->add_option("--workers", sim_opts.workers, "Worker threads, 0 for all cores")->capture_default_str();
    sim->add_option("--variance", sim_variance, "Variance estimator")
        ->check(CLI::IsMember({"control", "sample"}))
        ->capture_default_str();
    sim->add_option("--search-max", sim_opts.mle.search_max, "Upper end of the delay search, in sigma_t")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sim->callback([&] {
        action = [&] {
            auto const cfg = make_config(sim_phys, sim_common);
            if (sim_opts.workers == 0)
                sim_opts.workers = std::max(1u, std::thread::hardware_concurrency());
            sim_opts.variance =
                sim_variance == "sample" ? VarianceEstimator::sample : VarianceEstimator::score_control_variate;
            auto report = monte_carlo_study(cfg, sim_n, sim_seed, sim_opts);
            bool distinct = false;
            for (auto const& r : report.per_n)
                distinct |= r.n != report.per_n.front().n;
            if (distinct)
                report.fit = fit_inverse_n(report);
            emit(sim_common, out, [&](std::ostream& os) {
                if (sim_common.format == Format::json) {
                    os << to_json(report).dump(2) << '\n';
                    return;
                }
                CsvWriter w(os, {"n", "trials", "non_identifiable", "mean_estimate", "variance", "variance_over_crb",
                                 "mean_over_truth", "ci_halfwidth"});
                for (auto const& r : report.per_n) {
                    w.cell(static_cast<double>(r.n))
                        .cell(static_cast<double>(r.trials))
                        .cell(static_cast<double>(r.non_identifiable))
                        .cell(r.mean_estimate)
                        .cell(r.variance)
                        .cell(r.variance_over_crb)
                        .cell(r.mean_over_truth)
                        .cell(r.ci_halfwidth);
                    w.end_row();
                }
            });
        };
    });

    // budget
    Common bu_common;
    double bu_rate = 0.0, bu_duration = 0.0, bu_eta = 1.0, bu_nu = 1.0;
    auto* bu = app.add_subcommand("budget", "Cramer-Rao timing precision for a pair rate and run time");
    add_common(*bu, bu_common, Format::csv);
    bu->add_option("--rate", bu_rate, "Pairs per second")->required()->check(CLI::PositiveNumber);
    bu->add_option("--duration", bu_duration, "Run time in seconds")->required()->check(CLI::PositiveNumber);
    bu->add_option("--eta", bu_eta, "Detection efficiency in (0, 1]")->capture_default_str();
    bu->add_option("--nu", bu_nu, "Indistinguishability in (0, 1]")->capture_default_str();
    bu->callback([&] {
        action = [&] {
            if (!bu_common.sigma_t_fs)
                throw InvalidArgument("budget needs --sigma-t-fs");
            double const sigma_t = *bu_common.sigma_t_fs / 1e15;
            auto const b = precision_budget(bu_rate, bu_duration, sigma_t, bu_eta, bu_nu);
            Table t{{"rate_hz", "duration_s", "sigma_t_s", "eta", "nu", "pairs", "fisher_per_pair_s2",
                     "timing_std_s", "timing_std_as"},
                    {}};
            t.rows.push_back({bu_rate, bu_duration, sigma_t, bu_eta, bu_nu, b.pairs, b.fisher_per_pair, b.timing_std,
                              b.timing_std * 1e18});
            emit(bu_common, out, [&](std::ostream& os) { t.write(os, bu_common.format, json::object()); });
        };
    });

    for (int i = 1; i < argc && config->section.empty(); ++i)
        for (auto const* sub : app.get_subcommands({}))
            if (sub->get_name() == argv[i])
                config->section = argv[i];

    try {
        app.parse(argc, argv);
    }
    catch (CLI::CallForHelp const& e) {
        out << app.help();
        (void)e;
        return kSuccess;
    }
    catch (CLI::CallForAllHelp const& e) {
        out << app.help("", CLI::AppFormatMode::All);
        (void)e;
        return kSuccess;
    }
    catch (CLI::ParseError const& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidArguments;
    }

    try {
        if (action)
            action();
        return kSuccess;
    }
    catch (InvalidArgument const& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidArguments;
    }
    catch (std::exception const& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalFailure;
    }
}

} // namespace qbeat::cli
