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

#include <qbeat/report_io.hpp>

#include <qbeat/errors.hpp>

#include <cstdio>
#include <ostream>

namespace qbeat {

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json to_json(ExperimentConfig const& cfg)
{
    return {{"sigma_t", cfg.profile().sigma_t()}, {"delta_t", cfg.delta_t()}, {"nu", cfg.nu()},
            {"eta", cfg.eta()},                   {"tau_r", cfg.tau_r()}};
}

ExperimentConfig config_from_json(nlohmann::json const& j)
{
    try {
        return ExperimentConfig(SpectralProfile(j.value("sigma_t", 1.0)), j.at("delta_t").get<double>(),
                                j.at("nu").get<double>(), j.value("eta", 1.0), j.value("tau_r", 0.0));
    }
    catch (nlohmann::json::exception const& e) {
        throw InvalidArgument(std::string("bad experiment config: ") + e.what());
    }
}

nlohmann::json to_json(FitResult const& fit)
{
    return {{"a", fit.a},     {"a_min", fit.a_min},         {"a_max", fit.a_max},
            {"sse", fit.sse}, {"r_squared", fit.r_squared}, {"points", fit.points}};
}

nlohmann::json to_json(MonteCarloReport const& report)
{
    nlohmann::json per_n = nlohmann::json::array();
    for (auto const& r : report.per_n) {
        per_n.push_back({{"n", r.n},
                         {"trials", r.trials},
                         {"non_identifiable", r.non_identifiable},
                         {"mean_estimate", r.mean_estimate},
                         {"variance", r.variance},
                         {"sample_variance", r.sample_variance},
                         {"variance_over_crb", r.variance_over_crb},
                         {"mean_over_truth", r.mean_over_truth},
                         {"ci_halfwidth", r.ci_halfwidth},
                         {"mean_ci_halfwidth", r.mean_ci_halfwidth}});
    }
    nlohmann::json j{{"schema_version", kReportSchemaVersion},
                     {"cfg", to_json(report.cfg)},
                     {"truth", report.truth},
                     {"seed", report.seed},
                     {"fisher_per_pair", report.fisher_per_pair},
                     {"variance_estimator", std::string(to_string(report.estimator))},
                     {"per_n", per_n}};
    if (report.fit)
        j["fit"] = to_json(*report.fit);
    return j;
}

MonteCarloReport report_from_json(nlohmann::json const& j)
{
    try {
        if (j.at("schema_version").get<int>() != kReportSchemaVersion)
            throw InvalidArgument("unsupported report schema_version");
        MonteCarloReport report{config_from_json(j.at("cfg")),
                                j.at("truth").get<double>(),
                                j.at("seed").get<std::uint64_t>(),
                                j.at("fisher_per_pair").get<double>(),
                                j.at("variance_estimator").get<std::string>() == "sample"
                                    ? VarianceEstimator::sample
                                    : VarianceEstimator::score_control_variate,
                                {},
                                std::nullopt};
        for (auto const& r : j.at("per_n")) {
            MonteCarloRecord rec;
            rec.n = r.at("n").get<std::size_t>();
            rec.trials = r.at("trials").get<std::size_t>();
            rec.non_identifiable = r.at("non_identifiable").get<std::size_t>();
            rec.mean_estimate = r.at("mean_estimate").get<double>();
            rec.variance = r.at("variance").get<double>();
            rec.sample_variance = r.at("sample_variance").get<double>();
            rec.variance_over_crb = r.at("variance_over_crb").get<double>();
            rec.mean_over_truth = r.at("mean_over_truth").get<double>();
            rec.ci_halfwidth = r.at("ci_halfwidth").get<double>();
            rec.mean_ci_halfwidth = r.at("mean_ci_halfwidth").get<double>();
            report.per_n.push_back(rec);
        }
        if (j.contains("fit")) {
            auto const& f = j.at("fit");
            report.fit = FitResult{f.at("a").get<double>(),   f.at("a_min").get<double>(),
                                   f.at("a_max").get<double>(), f.at("sse").get<double>(),
                                   f.at("r_squared").get<double>(), f.at("points").get<std::size_t>()};
        }
        return report;
    }
    catch (nlohmann::json::exception const& e) {
        throw InvalidArgument(std::string("bad Monte Carlo report: ") + e.what());
    }
}

CsvWriter::CsvWriter(std::ostream& os, std::initializer_list<std::string_view> header)
    : os_(os), columns_(header.size())
{
    bool first = true;
    for (auto h : header) {
        if (!first)
            os_ << ',';
        os_ << h;
        first = false;
    }
    os_ << '\n';
}

CsvWriter& CsvWriter::cell(double v) { return cell(std::string_view(format_number(v))); }

CsvWriter& CsvWriter::cell(std::string_view v)
{
    if (filled_ == columns_)
        throw InvalidArgument("CSV row has more cells than the header");
    if (filled_ > 0)
        os_ << ',';
    os_ << v;
    ++filled_;
    return *this;
}

void CsvWriter::end_row()
{
    if (filled_ != columns_)
        throw InvalidArgument("CSV row has fewer cells than the header");
    os_ << '\n';
    filled_ = 0;
}

} // namespace qbeat
