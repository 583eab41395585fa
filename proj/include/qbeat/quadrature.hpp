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

// Adaptive Gauss-Kronrod integration over a sequence of panels. Each panel
// is handed to Boost.Math's adaptive G7/K15 rule; panel widths are bounded
// by the caller so oscillatory integrands are resolved before refinement.

#include <qbeat/errors.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>
#include <vector>

namespace qbeat {

struct QuadratureOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
    /// Upper bound on panel width; <= 0 means a single panel.
    double max_panel_width = 0.0;
    unsigned max_depth = 15;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t panels = 0;
};

namespace detail {
inline std::string format_g(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}
} // namespace detail

template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, QuadratureOptions const& opts = {})
{
    using boost::math::quadrature::gauss_kronrod;
    QuadratureResult out;
    if (!(hi > lo))
        return out;

    std::size_t panels = 1;
    if (opts.max_panel_width > 0.0)
        panels = static_cast<std::size_t>(std::ceil((hi - lo) / opts.max_panel_width));
    panels = std::max<std::size_t>(panels, 1);
    double const width = (hi - lo) / static_cast<double>(panels);
    auto edge = [&](std::size_t k) { return k == panels ? hi : lo + width * static_cast<double>(k); };

    // A single-rule pass estimates each panel's L1 norm so the global
    // budget max(abs_tol, rel_tol * L1) can be shared out. Without the
    // share, a panel whose integral is zero or cancels chases rounding
    // noise to max_depth.
    std::vector<double> rough(panels);
    double rough_l1 = 0.0;
    for (std::size_t k = 0; k < panels; ++k) {
        double norm = 0.0;
        gauss_kronrod<double, 15>::integrate(f, edge(k), edge(k + 1), 0, 0.0, nullptr, &norm);
        rough[k] = norm;
        rough_l1 += norm;
    }
    double const share = std::max(opts.abs_tol, opts.rel_tol * rough_l1) / static_cast<double>(panels);

    double l1 = 0.0;
    for (std::size_t k = 0; k < panels; ++k) {
        double const tol = rough[k] > 0.0 ? std::max(opts.rel_tol, share / rough[k]) : opts.rel_tol;
        double err = 0.0;
        double norm = 0.0;
        double v = gauss_kronrod<double, 15>::integrate(f, edge(k), edge(k + 1), opts.max_depth, tol, &err, &norm);
        out.value += v;
        out.abs_error += err;
        l1 += norm;
    }
    out.panels = panels;

    if (!std::isfinite(out.value))
        throw NumericalFailure("quadrature produced a non-finite value");
    double const budget = std::max(opts.abs_tol, opts.rel_tol * l1);
    if (out.abs_error > budget)
        throw NumericalFailure("quadrature did not converge: error estimate " + detail::format_g(out.abs_error) +
                               " exceeds tolerance " + detail::format_g(budget));
    return out;
}

} // namespace qbeat
