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

#pragma once

#include <qbeat/estimation.hpp>
#include <qbeat/interference.hpp>

#include <json.hpp>

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qbeat {

inline constexpr int kReportSchemaVersion = 1;

/// 17 significant digits, enough for a lossless round trip.
std::string format_number(double v);

nlohmann::json to_json(ExperimentConfig const& cfg);
ExperimentConfig config_from_json(nlohmann::json const& j);

nlohmann::json to_json(FitResult const& fit);
nlohmann::json to_json(MonteCarloReport const& report);
MonteCarloReport report_from_json(nlohmann::json const& j);

/// Comma-separated rows with a header line and LF endings.
class CsvWriter {
public:
    CsvWriter(std::ostream& os, std::initializer_list<std::string_view> header);

    CsvWriter& cell(double v);
    CsvWriter& cell(std::string_view v);
    void end_row();

private:
    std::ostream& os_;
    std::size_t columns_;
    std::size_t filled_ = 0;
};

} // namespace qbeat
