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

#include <qbeat/interference.hpp>
#include <qbeat/spectral.hpp>

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace qbeat {

enum class FisherMethod { analytic, quadrature, asymptote, bucket, quantum_limit };

std::string_view to_string(FisherMethod m) noexcept;

/// Which pair count the Fisher value is normalized to. Detector losses
/// thin the pair stream, so per emitted pair F carries a factor eta while
/// per detected pair it does not.
enum class FisherConvention { per_emitted_pair, per_detected_pair };

std::string_view to_string(FisherConvention c) noexcept;

struct FisherReport {
    double value = 0.0; ///< 1 / time^2
    FisherMethod method = FisherMethod::analytic;
    double quadrature_error = 0.0; ///< 0 for closed forms
    FisherConvention convention = FisherConvention::per_emitted_pair;
    /// Terms dropped from a sum because their probability underflowed.
    std::size_t excluded_terms = 0;
};

struct FisherOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    FisherConvention convention = FisherConvention::per_emitted_pair;
};

/// Quantum Fisher information sigma_w^2 = 1 / (4 sigma_t^2).
FisherReport quantum_limit(SpectralProfile const& profile);

/// Frequency-resolved Fisher information for nu = 1: eta sigma_w^2 / 2.
FisherReport fisher_indistinguishable(SpectralProfile const& profile, double eta,
                                      FisherConvention convention = FisherConvention::per_emitted_pair);

/// Frequency-resolved Fisher information for general nu:
///   eta/4 int C(dw) dw^2 nu^2 sin^2(dw dt/2) / (1 - nu^2 cos^2(dw dt/2)) ddw.
/// nu == 1 dispatches to fisher_indistinguishable. Throws NumericalFailure
/// if the quadrature misses its tolerance.
FisherReport fisher_partial(ExperimentConfig const& cfg, FisherOptions const& opts = {});

/// Large-delay limit (1 - sqrt(1 - nu^2)) eta sigma_w^2 / 2.
FisherReport fisher_asymptote(SpectralProfile const& profile, double nu, double eta,
                              FisherConvention convention = FisherConvention::per_emitted_pair);

/// Fisher information of the port pattern alone (bucket detectors).
FisherReport bucket_fisher(ExperimentConfig const& cfg,
                           FisherConvention convention = FisherConvention::per_emitted_pair);

/// Cramer-Rao variance bound 1 / (N F). Throws UnboundedVariance when F == 0
/// and InvalidArgument when n_pairs == 0.
double crb(FisherReport const& fisher, std::uint64_t n_pairs);

struct PrecisionBudget {
    double pairs = 0.0;           ///< rate * duration
    double fisher_per_pair = 0.0; ///< 1 / s^2, includes eta
    double timing_std = 0.0;      ///< seconds
};

/// CRB-limited timing precision for a pair stream of `rate` pairs per
/// second incident on the interferometer, observed for `duration` seconds.
/// Uses the nu = 1 value, or the large-delay value for nu < 1.
PrecisionBudget precision_budget(double rate, double duration, double sigma_t, double eta, double nu);

} // namespace qbeat
