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

#include <qbeat/interference.hpp>

#include <qbeat/errors.hpp>
#include <qbeat/quadrature.hpp>

#include <cmath>
#include <complex>

namespace qbeat {

ExperimentConfig::ExperimentConfig(SpectralProfile profile, double delta_t, double nu, double eta, double tau_r)
    : profile_(profile), delta_t_(delta_t), nu_(nu), eta_(eta), tau_r_(tau_r)
{
    if (!(std::isfinite(delta_t) && delta_t >= 0.0))
        throw InvalidArgument("delta_t must be finite and non-negative");
    if (!(nu >= 0.0 && nu <= 1.0))
        throw InvalidArgument("nu must lie in [0, 1]");
    if (!(eta > 0.0 && eta <= 1.0))
        throw InvalidArgument("eta must lie in (0, 1]");
    if (!std::isfinite(tau_r))
        throw InvalidArgument("tau_r must be finite");
}

ExperimentConfig ExperimentConfig::with_delta_t(double delta_t) const
{
    return {profile_, delta_t, nu_, eta_, tau_r_};
}

ExperimentConfig ExperimentConfig::with_nu(double nu) const { return {profile_, delta_t_, nu, eta_, tau_r_}; }

ExperimentConfig ExperimentConfig::with_eta(double eta) const { return {profile_, delta_t_, nu_, eta, tau_r_}; }

ExperimentConfig ExperimentConfig::with_tau_r(double tau_r) const
{
    return {profile_, delta_t_, nu_, eta_, tau_r};
}

double conditional_bunching_probability(ExperimentConfig const& cfg, double delta_omega)
{
    double const beat = std::cos(0.5 * delta_omega * cfg.delta_t()) * std::cos(delta_omega * cfg.tau_r());
    return 0.5 * (1.0 + cfg.nu() * beat);
}

double joint_probability(ExperimentConfig const& cfg, Outcome const& outcome)
{
    double const p_b = conditional_bunching_probability(cfg, outcome.delta_omega);
    double const p_x = outcome.pattern == PortPattern::B ? p_b : 1.0 - p_b;
    return cfg.eta() * envelope_density(cfg.profile(), outcome.delta_omega) * p_x;
}

double delay_probability(ExperimentConfig const& cfg, Outcome const& outcome)
{
    if (cfg.tau_r() == 0.0)
        return joint_probability(cfg, outcome);
    return joint_probability(cfg.with_tau_r(0.0), outcome);
}

namespace {

using cplx = std::complex<double>;

// Frequency amplitude of a photon centred at time t: sqrt(|xi|^2) e^{-i w t}.
cplx wavepacket(SpectralProfile const& profile, double carrier, double omega, double t)
{
    double const mag = std::sqrt(spectral_intensity(profile, omega - carrier));
    return std::polar(mag, -omega * t);
}

// Density over the ordered frequency plane (w1, w2) for one signal branch
// emitted at time t_sig. For X = A, w1 is seen by camera c and w2 by
// camera e; for X = B both photons share a camera and both cameras are
// summed.
double branch_density(ExperimentConfig const& cfg, double carrier, double t_sig, double w1, double w2, PortPattern x)
{
    auto const& prof = cfg.profile();
    double const t_ref = cfg.tau_r();
    // Beam splitter: input 0 (reference) -> (c + e)/sqrt2, input 1
    // (signal) -> (c - e)/sqrt2. The product of creation operators
    // ref(w) sig(w') then carries the pair amplitude r(w) s(w').
    cplx const r1s2 = wavepacket(prof, carrier, w1, t_ref) * wavepacket(prof, carrier, w2, t_sig);
    cplx const r2s1 = wavepacket(prof, carrier, w2, t_ref) * wavepacket(prof, carrier, w1, t_sig);

    double const shared = cfg.nu();
    double const orthogonal = 1.0 - cfg.nu();

    if (x == PortPattern::A) {
        // c(w1) e(w2): -1/2 r(w1)s(w2) from ref->c, sig->e; +1/2 r(w2)s(w1)
        // from ref->e, sig->c. Indistinguishable paths add in amplitude.
        cplx const amp = 0.5 * (r2s1 - r1s2);
        double const coherent = std::norm(amp);
        double const incoherent = 0.25 * (std::norm(r1s2) + std::norm(r2s1));
        return shared * coherent + orthogonal * incoherent;
    }
    // Same camera: c(w1) c(w2) with amplitude 1/2 [r(w1)s(w2) + r(w2)s(w1)];
    // identical bosons in one mode carry a factor 1/2 over the ordered plane.
    cplx const amp = 0.5 * (r1s2 + r2s1);
    double const coherent = 0.5 * std::norm(amp);
    double const incoherent = 0.5 * 0.25 * (std::norm(r1s2) + std::norm(r2s1));
    double const per_camera = shared * coherent + orthogonal * incoherent;
    return 2.0 * per_camera;
}

} // namespace

double amplitude_oracle(ExperimentConfig const& cfg, Outcome const& outcome, OracleOptions const& opts)
{
    double const dw = outcome.delta_omega;
    double const t1 = -0.5 * cfg.delta_t();
    double const t2 = 0.5 * cfg.delta_t();
    double const s = cfg.profile().sigma_omega();

    auto integrand = [&](double sum_half) {
        double const w1 = sum_half + 0.5 * dw;
        double const w2 = sum_half - 0.5 * dw;
        // Equal-weight incoherent mixture of the two emission times.
        return 0.5 * (branch_density(cfg, opts.carrier, t1, w1, w2, outcome.pattern) +
                      branch_density(cfg, opts.carrier, t2, w1, w2, outcome.pattern));
    };

    QuadratureOptions q;
    q.abs_tol = opts.abs_tol;
    q.rel_tol = 1e-13;
    q.max_panel_width = s;
    double const half_width = 14.0 * s;
    auto const res = integrate(integrand, opts.carrier - half_width, opts.carrier + half_width, q);
    return cfg.eta() * res.value;
}

} // namespace qbeat
