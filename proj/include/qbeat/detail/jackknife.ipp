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

#include <qbeat/errors.hpp>

#include <cmath>
#include <vector>

namespace qbeat {

template <class Stat>
std::pair<double, double> jackknife(std::span<std::vector<double> const> columns, Stat&& stat)
{
    if (columns.empty())
        throw InvalidArgument("jackknife needs at least one column");
    std::size_t const n = columns.front().size();
    if (n < 2)
        throw InvalidArgument("jackknife needs at least two rows");

    std::size_t const k = columns.size();
    std::vector<double> sums(k, 0.0);
    for (std::size_t c = 0; c < k; ++c) {
        if (columns[c].size() != n)
            throw InvalidArgument("jackknife columns differ in length");
        for (double v : columns[c])
            sums[c] += v;
    }

    std::vector<double> means(k);
    for (std::size_t c = 0; c < k; ++c)
        means[c] = sums[c] / static_cast<double>(n);
    double const full = stat(std::span<double const>(means));

    std::vector<double> loo(n);
    double loo_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < k; ++c)
            means[c] = (sums[c] - columns[c][i]) / static_cast<double>(n - 1);
        loo[i] = stat(std::span<double const>(means));
        loo_mean += loo[i];
    }
    loo_mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : loo)
        ss += (v - loo_mean) * (v - loo_mean);
    double const se = std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n) * ss);
    return {full, se};
}

} // namespace qbeat
