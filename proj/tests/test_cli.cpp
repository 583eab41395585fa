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

#include <qbeat/report_io.hpp>
#include <qbeat/spectral.hpp>

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "qbeat");
    std::vector<char const*> argv;
    for (auto const& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    int const code = qbeat::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(std::string const& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::filesystem::path temp_path(std::string const& name)
{
    return std::filesystem::temp_directory_path() / ("qbeat_test_cli_" + name);
}

} // namespace

TEST_CASE("beat curve columns, grid and values")
{
    auto const r = run({"beat-curve", "--delta-t", "8", "--nu", "1"});
    REQUIRE(r.code == 0);
    auto const rows = parse_csv(r.out);
    REQUIRE(rows.size() == 1202);
    CHECK(rows[0] == std::vector<std::string>{"delta_omega_over_sigma_omega", "p_coincidence", "p_bunching"});
    CHECK(std::stod(rows[1][0]) == -6.0);
    CHECK(std::stod(rows[1201][0]) == 6.0);
    CHECK(std::stod(rows[601][0]) == 0.0);
    CHECK(std::stod(rows[601][1]) == 0.0);
    CHECK(r.out.find('\r') == std::string::npos);

    auto const partial = parse_csv(run({"beat-curve", "--delta-t", "8", "--nu", "0.9"}).out);
    double const c0 = 1.0 / std::sqrt(std::numbers::pi); // C(0) with sigma_w = 1/2
    CHECK(std::stod(partial[601][1]) == doctest::Approx(0.05 * c0).epsilon(1e-14));
    CHECK(std::stod(partial[601][2]) == doctest::Approx(0.95 * c0).epsilon(1e-14));

    auto const small = parse_csv(run({"beat-curve", "--delta-t", "2", "--nu", "1", "--points", "11"}).out);
    CHECK(small.size() == 12);
}

TEST_CASE("beat curve in femtosecond units")
{
    auto const a = run({"beat-curve", "--delta-t", "2", "--nu", "0.9", "--points", "5"});
    auto const b = run({"beat-curve", "--delta-t", "120", "--nu", "0.9", "--points", "5", "--sigma-t-fs", "60"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("fisher scan series")
{
    auto const r = run({"fisher-scan", "--delta-t-max", "5", "--points", "11"});
    REQUIRE(r.code == 0);
    auto const rows = parse_csv(r.out);
    CHECK(rows[0] == std::vector<std::string>{"delta_t_over_sigma_t", "series", "label", "f_over_q"});
    int nu1 = 0;
    bool saw_asymptote = false, saw_trd_zero = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        double const dt = std::stod(rows[i][0]);
        double const f = std::stod(rows[i][3]);
        if (rows[i][1] == "nu" && rows[i][2] == "nu=1") {
            CHECK(f == 0.5);
            ++nu1;
        }
        if (rows[i][1] == "nu" && rows[i][2] == "nu=0.95" && dt == 5.0) {
            CHECK(f == doctest::Approx(0.3438).epsilon(0.02));
            saw_asymptote = true;
        }
        if (rows[i][1] == "trd" && dt == 0.0) {
            CHECK(f == 0.0);
            saw_trd_zero = true;
        }
        if (rows[i][1] == "trd" && rows[i][2] == "T=10")
            CHECK(f < 0.05);
    }
    CHECK(nu1 == 11);
    CHECK(saw_asymptote);
    CHECK(saw_trd_zero);
    // 11 delays x (2 nu + 2 binned + 1 unbinned)
    CHECK(rows.size() == 1 + 11 * 5);
}

TEST_CASE("fisher scan JSON output")
{
    auto const r = run({"fisher-scan", "--points", "3", "--nu", "0.5", "--resolution", "5", "--format", "json"});
    REQUIRE(r.code == 0);
    auto const j = nlohmann::json::parse(r.out);
    CHECK(j.at("rows").size() == 3 * 3);
    CHECK(j.at("rows")[0].at("series") == "nu");
    CHECK(j.at("rows")[0].at("label") == "nu=0.5");
}

TEST_CASE("simulate is deterministic and writes a versioned report")
{
    std::vector<std::string> const args{"simulate", "--delta-t", "0.8", "--nu", "1", "--n", "300", "--n", "600",
                                        "--trials", "60", "--seed", "9"};
    auto const a = run(args);
    auto const b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto with_workers = args;
    with_workers.insert(with_workers.end(), {"--workers", "3"});
    CHECK(run(with_workers).out == a.out);

    auto const j = nlohmann::json::parse(a.out);
    CHECK(j.at("schema_version") == qbeat::kReportSchemaVersion);
    CHECK(j.at("seed") == 9);
    CHECK(j.at("per_n").size() == 2);
    CHECK(j.contains("fit"));
    auto const report = qbeat::report_from_json(j);
    CHECK(report.per_n[1].n == 600);
    CHECK(report.per_n[0].trials == 60);

    auto csv = args;
    csv.insert(csv.end(), {"--format", "csv"});
    auto const rows = parse_csv(run(csv).out);
    CHECK(rows.size() == 3);
    CHECK(rows[0][0] == "n");
}

TEST_CASE("budget")
{
    auto const r = run({"budget", "--rate", "1e6", "--duration", "14400", "--sigma-t-fs", "60"});
    REQUIRE(r.code == 0);
    auto const rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].back() == "timing_std_as");
    CHECK(std::stod(rows[1].back()) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    auto const slow = parse_csv(run({"budget", "--rate", "1e6", "--duration", "480", "--sigma-t-fs", "10"}).out);
    double const as = std::stod(slow[1].back());
    CHECK(as > 0.5);
    CHECK(as < 5.0);

    auto const fast = parse_csv(run({"budget", "--rate", "4e6", "--duration", "14400", "--sigma-t-fs", "60"}).out);
    CHECK(std::stod(fast[1].back()) == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-12));
}

TEST_CASE("exit codes")
{
    CHECK(run({}).code == 2);
    CHECK(run({"no-such-command"}).code == 2);
    CHECK(run({"beat-curve", "--nu", "1"}).code == 2);
    CHECK(run({"beat-curve", "--delta-t", "1", "--nu", "1.5"}).code == 2);
    CHECK(run({"beat-curve", "--delta-t", "-1", "--nu", "1"}).code == 2);
    CHECK(run({"beat-curve", "--delta-t", "1", "--points", "1"}).code == 2);
    CHECK(run({"beat-curve", "--delta-t", "1", "--format", "xml"}).code == 2);
    CHECK(run({"budget", "--rate", "1", "--duration", "1"}).code == 2);
    CHECK(run({"budget", "--rate", "-1", "--duration", "1", "--sigma-t-fs", "1"}).code == 2);
    CHECK(run({"simulate", "--delta-t", "1", "--nu", "1", "--trials", "1"}).code == 2);
    CHECK(run({"simulate", "--delta-t", "1", "--nu", "0", "--n", "10", "--trials", "3"}).code == 1);
    CHECK(run({"fisher-scan", "--nu", "2"}).code == 2);
    auto const help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("simulate") != std::string::npos);
    CHECK(run({"beat-curve", "--delta-t", "1", "--out", "/nonexistent-dir/x.csv"}).code == 2);
}

TEST_CASE("config file supplies flags and flags override it")
{
    auto const path = temp_path("config.json");
    {
        std::ofstream f(path);
        f << R"({"delta-t": 8, "nu": 0.9, "points": 5})";
    }
    auto const from_file = run({"beat-curve", "--config", path.string()});
    auto const from_flags = run({"beat-curve", "--delta-t", "8", "--nu", "0.9", "--points", "5"});
    REQUIRE(from_file.code == 0);
    CHECK(from_file.out == from_flags.out);

    auto const overridden = run({"beat-curve", "--config", path.string(), "--nu", "1"});
    CHECK(overridden.out == run({"beat-curve", "--delta-t", "8", "--nu", "1", "--points", "5"}).out);

    {
        std::ofstream f(path);
        f << R"({"delta-t": 0.8, "nu": 1, "n": [200, 400], "trials": 20})";
    }
    auto const sim = run({"simulate", "--config", path.string()});
    REQUIRE(sim.code == 0);
    CHECK(nlohmann::json::parse(sim.out).at("per_n").size() == 2);

    {
        std::ofstream f(path);
        f << R"({"delta-t": 1, "unknown-key": 3})";
    }
    CHECK(run({"beat-curve", "--config", path.string()}).code == 2);
    {
        std::ofstream f(path);
        f << "{not json";
    }
    CHECK(run({"beat-curve", "--config", path.string()}).code == 2);
    CHECK(run({"beat-curve", "--config", temp_path("missing.json").string()}).code == 2);
    std::filesystem::remove(path);
}

TEST_CASE("output file")
{
    auto const path = temp_path("curve.csv");
    auto const r = run({"beat-curve", "--delta-t", "3", "--nu", "0.7", "--points", "7", "--out", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == run({"beat-curve", "--delta-t", "3", "--nu", "0.7", "--points", "7"}).out);
    std::filesystem::remove(path);
}
