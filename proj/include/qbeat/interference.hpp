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

#include <qbeat/spectral.hpp>

#include <string_view>

namespace qbeat {

/// Output-port pattern of a detected photon pair.
enum class PortPattern : unsigned char {
    A, ///< antibunching: one photon on each camera (coincidence)
    B, ///< bunching: both photons on the same camera
};

/// +1 for bunching, -1 for antibunching.
constexpr double alpha(PortPattern x) noexcept { return x == PortPattern::B ? 1.0 : -1.0; }

constexpr char to_char(PortPattern x) noexcept { return x == PortPattern::B ? 'B' : 'A'; }

/// One measurement record: frequency difference and port pattern.
struct Outcome {
    double delta_omega = 0.0;
    PortPattern pattern = PortPattern::B;

    friend bool operator==(Outcome const&, Outcome const&) = default;
};

/// Physical scenario of one interferometer run. Validated on construction.
class ExperimentConfig {
public:
    /// delta_t >= 0, nu in [0, 1], eta in (0, 1], tau_r finite; otherwise
    /// throws InvalidArgument.
    ExperimentConfig(SpectralProfile profile, double delta_t, double nu, double eta = 1.0, double tau_r = 0.0);

    SpectralProfile const& profile() const noexcept { return profile_; }
    double delta_t() const noexcept { return delta_t_; }
    double nu() const noexcept { return nu_; }
    double eta() const noexcept { return eta_; }
    /// Reference arrival offset t_r - t_s.
    double tau_r() const noexcept { return tau_r_; }

    ExperimentConfig with_delta_t(double delta_t) const;
    ExperimentConfig with_nu(double nu) const;
    ExperimentConfig with_eta(double eta) const;
    ExperimentConfig with_tau_r(double tau_r) const;

    friend bool operator==(ExperimentConfig const&, ExperimentConfig const&) = default;

private:
    SpectralProfile profile_;
    double delta_t_;
    double nu_;
    double eta_;
    double tau_r_;
};

/// Joint density of (delta_omega, X) including the reference offset:
///   1/2 eta C(dw) {1 + alpha(X) nu cos(dw dt / 2) cos(dw tau_r)}.
/// Summed over X and integrated over dw it gives eta.
double joint_probability(ExperimentConfig const& cfg, Outcome const& outcome);

/// joint_probability with the reference centred on the signal pair (tau_r = 0).
double delay_probability(ExperimentConfig const& cfg, Outcome const& outcome);

/// P(X = B | dw, detected) = 1/2 (1 + nu cos(dw dt / 2) cos(dw tau_r)).
double conditional_bunching_probability(ExperimentConfig const& cfg, double delta_omega);

struct OracleOptions {
    /// Carrier frequency of all three photons; drops out of every outcome
    /// probability, so a nonzero value exercises the phase bookkeeping.
    double carrier = 0.0;
    double abs_tol = 1e-14;
};

/// Outcome density computed from two-photon amplitudes: each incoherent
/// signal branch is interfered with the reference on a balanced beam
/// splitter, the reference is split into a mode shared with the signal
/// (weight sqrt(nu)) and an orthogonal one, and the sum frequency is
/// integrated out numerically. Independent of joint_probability.
/// Throws NumericalFailure if the marginalization does not converge.
double amplitude_oracle(ExperimentConfig const& cfg, Outcome const& outcome, OracleOptions const& opts = {});

} // namespace qbeat
