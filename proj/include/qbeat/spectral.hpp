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

namespace qbeat {

/// Gaussian single-photon wavepacket. Time is measured in units chosen by
/// the caller; the library works throughout in units where sigma_t = 1
/// unless a different width is given explicitly.
class SpectralProfile {
public:
    /// Throws InvalidArgument unless sigma_t is finite and positive.
    explicit SpectralProfile(double sigma_t = 1.0);

    double sigma_t() const noexcept { return sigma_t_; }
    /// Spectral standard deviation, 1 / (2 sigma_t).
    double sigma_omega() const noexcept { return sigma_omega_; }

    friend bool operator==(SpectralProfile const&, SpectralProfile const&) = default;

private:
    double sigma_t_;
    double sigma_omega_;
};

/// Single-photon spectral intensity |xi(omega)|^2 about a zero carrier.
double spectral_intensity(SpectralProfile const& profile, double omega);

/// Density C of the frequency difference of two photons drawn from the
/// profile: exp(-dw^2 / 4 sigma_w^2) / sqrt(4 pi sigma_w^2).
double envelope_density(SpectralProfile const& profile, double delta_omega);

/// Characteristic function g(dt) = int C(dw) cos(dw dt / 2) ddw.
/// For the Gaussian profile g(dt) = exp(-sigma_w^2 dt^2 / 4).
double temporal_overlap(SpectralProfile const& profile, double delta_t);

/// dg/d(dt).
double temporal_overlap_derivative(SpectralProfile const& profile, double delta_t);

} // namespace qbeat
