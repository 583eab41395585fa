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

// Test-only numerical oracles. Nothing here calls into the library's own
// quadrature or sampling code.

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <cstddef>
#include <span>

namespace qbeat::testing {

/// Composite Simpson rule with `intervals` (even) subintervals.
template <class F>
double simpson(F&& f, double a, double b, std::size_t intervals)
{
    if (intervals % 2 == 1)
        ++intervals;
    double const h = (b - a) / static_cast<double>(intervals);
    double sum = f(a) + f(b);
    for (std::size_t i = 1; i < intervals; ++i)
        sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
    return sum * h / 3.0;
}

/// Upper-tail p-value of a chi-square statistic.
inline double chi_square_p_value(double statistic, double dof)
{
    return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

/// Pearson statistic of observed counts against expected probabilities.
inline double pearson_statistic(std::span<double const> observed, std::span<double const> probability, double total)
{
    double chi2 = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        double const e = probability[i] * total;
        chi2 += (observed[i] - e) * (observed[i] - e) / e;
    }
    return chi2;
}

} // namespace qbeat::testing
