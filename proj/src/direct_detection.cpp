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

#include <qbeat/direct_detection.hpp>

#include <qbeat/errors.hpp>
#include <qbeat/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qbeat {

namespace {

double gauss(double x, double sigma)
{
    double const z = x / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

// Mass of N(mu, sigma) inside [a, b], accurate in both tails.
double normal_mass(double a, double b, double mu, double sigma)
{
    double const za = (a - mu) / (sigma * std::numbers::sqrt2);
    double const zb = (b - mu) / (sigma * std::numbers::sqrt2);
    if (za >= 0.0)
        return 0.5 * (std::erfc(za) - std::erfc(zb));
    if (zb <= 0.0)
        return 0.5 * (std::erfc(-zb) - std::erfc(-za));
    return 1.0 - 0.5 * (std::erfc(-za) + std::erfc(zb));
}

} // namespace

DetectionGrid DetectionGrid::covering(SpectralProfile const& profile, double resolution, double delta_t)
{
    return {resolution, std::max(12.0 * profile.sigma_t(), 5.0 * delta_t), 0.0};
}

void validate(DetectionGrid const& grid, SpectralProfile const& profile, double delta_t)
{
    if (!(std::isfinite(grid.resolution) && grid.resolution > 0.0))
        throw InvalidArgument("detector resolution must be positive");
    if (!std::isfinite(grid.offset))
        throw InvalidArgument("bin offset must be finite");
    if (!(grid.extent >= 5.0 * std::max(profile.sigma_t(), delta_t)))
        throw InvalidArgument("detection window must extend at least 5 max(sigma_t, delta_t)");
}

double arrival_density(SpectralProfile const& profile, double delta_t, double t)
{
    double const h = 0.5 * delta_t;
    double const s = profile.sigma_t();
    return 0.5 * (gauss(t + h, s) + gauss(t - h, s));
}

double arrival_density_derivative(SpectralProfile const& profile, double delta_t, double t)
{
    // G'(x) = -x / s^2 G(x); each centre moves by 1/2 per unit dt.
    double const h = 0.5 * delta_t;
    double const s = profile.sigma_t();
    double const left = -(t + h) / (s * s) * gauss(t + h, s);
    double const right = -(t - h) / (s * s) * gauss(t - h, s);
    return 0.25 * (left - right);
}

FisherReport trd_fisher_unbinned(SpectralProfile const& profile, double delta_t, FisherOptions const& opts)
{
    if (!(delta_t >= 0.0))
        throw InvalidArgument("delta_t must be non-negative");
    FisherReport report{0.0, FisherMethod::quadrature, 0.0, FisherConvention::per_detected_pair, 0};
    if (delta_t == 0.0)
        return report;

    auto integrand = [&](double t) {
        double const p = arrival_density(profile, delta_t, t);
        if (p < std::numeric_limits<double>::min())
            return 0.0;
        double const dp = arrival_density_derivative(profile, delta_t, t);
        return dp * dp / p;
    };
    double const s = profile.sigma_t();
    double const hi = 0.5 * delta_t + 14.0 * s;
    QuadratureOptions q;
    q.abs_tol = 0.0;
    q.rel_tol = opts.rel_tol;
    q.max_panel_width = s;
    // Even in t.
    auto const res = integrate(integrand, 0.0, hi, q);
    report.value = 2.0 * res.value;
    report.quadrature_error = 2.0 * res.abs_error;
    return report;
}

std::vector<double> bin_probabilities(SpectralProfile const& profile, double delta_t, DetectionGrid const& grid)
{
    double const T = grid.resolution;
    auto const k_lo = static_cast<long>(std::floor((-grid.extent - grid.offset) / T));
    auto const k_hi = static_cast<long>(std::ceil((grid.extent - grid.offset) / T));
    double const h = 0.5 * std::abs(delta_t);
    double const s = profile.sigma_t();
    double const inf = std::numeric_limits<double>::infinity();

    std::vector<double> q;
    q.reserve(static_cast<std::size_t>(k_hi - k_lo));
    for (long k = k_lo; k < k_hi; ++k) {
        double const a = k == k_lo ? -inf : grid.offset + static_cast<double>(k) * T;
        double const b = k + 1 == k_hi ? inf : grid.offset + static_cast<double>(k + 1) * T;
        q.push_back(0.5 * (normal_mass(a, b, -h, s) + normal_mass(a, b, h, s)));
    }
    return q;
}

FisherReport trd_fisher_binned(SpectralProfile const& profile, double delta_t, DetectionGrid const& grid)
{
    validate(grid, profile, delta_t);
    if (!(delta_t >= 0.0))
        throw InvalidArgument("delta_t must be non-negative");

    double const step = 1e-4 * profile.sigma_t();
    auto const q = bin_probabilities(profile, delta_t, grid);
    auto const q_up = bin_probabilities(profile, delta_t + step, grid);
    auto const q_dn = bin_probabilities(profile, delta_t - step, grid);

    FisherReport report{0.0, FisherMethod::quadrature, 0.0, FisherConvention::per_detected_pair, 0};
    for (std::size_t k = 0; k < q.size(); ++k) {
        if (q[k] < 1e-300) {
            ++report.excluded_terms;
            continue;
        }
        double const dq = (q_up[k] - q_dn[k]) / (2.0 * step);
        report.value += dq * dq / q[k];
    }
    return report;
}

} // namespace qbeat
