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

#include <qbeat/spectral.hpp>

#include <qbeat/errors.hpp>

#include <cmath>
#include <numbers>

namespace qbeat {

SpectralProfile::SpectralProfile(double sigma_t)
    : sigma_t_(sigma_t), sigma_omega_(0.5 / sigma_t)
{
    if (!(std::isfinite(sigma_t) && sigma_t > 0.0))
        throw InvalidArgument("sigma_t must be finite and positive");
}

double spectral_intensity(SpectralProfile const& profile, double omega)
{
    double const s = profile.sigma_omega();
    double const z = omega / s;
    return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * std::numbers::pi));
}

double envelope_density(SpectralProfile const& profile, double delta_omega)
{
    double const s = profile.sigma_omega();
    return std::exp(-delta_omega * delta_omega / (4.0 * s * s)) / std::sqrt(4.0 * std::numbers::pi * s * s);
}

double temporal_overlap(SpectralProfile const& profile, double delta_t)
{
    double const s = profile.sigma_omega();
    return std::exp(-0.25 * s * s * delta_t * delta_t);
}

double temporal_overlap_derivative(SpectralProfile const& profile, double delta_t)
{
    double const s = profile.sigma_omega();
    return -0.5 * s * s * delta_t * temporal_overlap(profile, delta_t);
}

} // namespace qbeat
