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

// Classical time-resolved direct detection of the two incoherent signals:
// a photon arrives at t ~ 1/2 [G(t + dt/2) + G(t - dt/2)] with G Gaussian
// of width sigma_t, and the detector reports either the exact arrival
// time or the bin of width T it falls in.

#include <qbeat/fisher.hpp>
#include <qbeat/spectral.hpp>

#include <vector>

namespace qbeat {

/// Rectangular timing bins of width `resolution` with edges at
/// offset + k * resolution. Bins are enumerated over [-extent, extent];
/// the two outermost bins are open-ended so no probability is lost.
struct DetectionGrid {
    double resolution = 1.0;
    double extent = 12.0;
    double offset = 0.0;

    /// Grid of bin width `resolution` whose window covers max(12 sigma_t, 5 dt).
    static DetectionGrid covering(SpectralProfile const& profile, double resolution, double delta_t);
};

/// Throws InvalidArgument for a non-positive resolution or an extent below
/// 5 max(sigma_t, delta_t).
void validate(DetectionGrid const& grid, SpectralProfile const& profile, double delta_t);

/// Arrival-time density with the signal pair centred at t = 0.
double arrival_density(SpectralProfile const& profile, double delta_t, double t);

/// d/d(dt) of arrival_density.
double arrival_density_derivative(SpectralProfile const& profile, double delta_t, double t);

/// Fisher information of an exact arrival time about dt.
FisherReport trd_fisher_unbinned(SpectralProfile const& profile, double delta_t, FisherOptions const& opts = {});

/// Probability of each bin in the grid, outermost bins included.
std::vector<double> bin_probabilities(SpectralProfile const& profile, double delta_t, DetectionGrid const& grid);

/// Multinomial Fisher information sum_k (dq_k/d dt)^2 / q_k over the bins,
/// with dq_k/d dt from a central difference of step 1e-4 sigma_t. Bins with
/// q_k < 1e-300 are skipped and counted in `excluded_terms`.
FisherReport trd_fisher_binned(SpectralProfile const& profile, double delta_t, DetectionGrid const& grid);

} // namespace qbeat
