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

#include <qbeat/fisher.hpp>

#include <qbeat/errors.hpp>
#include <qbeat/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qbeat {

std::string_view to_string(FisherMethod m) noexcept
{
    switch (m) {
    case FisherMethod::analytic:
        return "analytic";
    case FisherMethod::quadrature:
        return "quadrature";
    case FisherMethod::asymptote:
        return "asymptote";
    case FisherMethod::bucket:
        return "bucket";
    case FisherMethod::quantum_limit:
        return "quantum_limit";
    }
    return "unknown";
}

std::string_view to_string(FisherConvention c) noexcept
{
    return c == FisherConvention::per_emitted_pair ? "per_emitted_pair" : "per_detected_pair";
}

namespace {

double efficiency_factor(double eta, FisherConvention convention)
{
    if (!(eta > 0.0 && eta <= 1.0))
        throw InvalidArgument("eta must lie in (0, 1]");
    return convention == FisherConvention::per_emitted_pair ? eta : 1.0;
}

} // namespace

FisherReport quantum_limit(SpectralProfile const& profile)
{
    double const s = profile.sigma_omega();
    return {s * s, FisherMethod::quantum_limit, 0.0, FisherConvention::per_emitted_pair, 0};
}

FisherReport fisher_indistinguishable(SpectralProfile const& profile, double eta, FisherConvention convention)
{
    double const s = profile.sigma_omega();
    return {efficiency_factor(eta, convention) * s * s / 2.0, FisherMethod::analytic, 0.0, convention, 0};
}

FisherReport fisher_asymptote(SpectralProfile const& profile, double nu, double eta, FisherConvention convention)
{
    if (!(nu >= 0.0 && nu <= 1.0))
        throw InvalidArgument("nu must lie in [0, 1]");
    auto report = fisher_indistinguishable(profile, eta, convention);
    report.value *= 1.0 - std::sqrt((1.0 - nu) * (1.0 + nu));
    report.method = FisherMethod::asymptote;
    return report;
}

FisherReport fisher_partial(ExperimentConfig const& cfg, FisherOptions const& opts)
{
    double const nu = cfg.nu();
    double const dt = cfg.delta_t();
    if (nu == 1.0)
        return fisher_indistinguishable(cfg.profile(), cfg.eta(), opts.convention);

    FisherReport report{0.0, FisherMethod::quadrature, 0.0, opts.convention, 0};
    if (nu == 0.0 || dt == 0.0)
        return report;

    auto const& prof = cfg.profile();
    double const s = prof.sigma_omega();
    auto integrand = [&](double dw) {
        double const x = 0.5 * dw * dt;
        double const sn = std::sin(x);
        double const cs = std::cos(x);
        double const ratio = nu * nu * sn * sn / ((1.0 - nu * cs) * (1.0 + nu * cs));
        return envelope_density(prof, dw) * dw * dw * ratio;
    };

    // The integrand is even; the Gaussian tail beyond 14 sigma_w is below
    // 1e-20 of the peak. Panels resolve the beat period 4 pi / dt.
    QuadratureOptions q;
    q.abs_tol = opts.abs_tol;
    q.rel_tol = opts.rel_tol;
    q.max_panel_width = std::min(s, (4.0 * std::numbers::pi / dt) / 8.0);
    q.max_depth = 20;
    auto const res = integrate(integrand, 0.0, 14.0 * s, q);

    double const scale = 0.25 * efficiency_factor(cfg.eta(), opts.convention) * 2.0;
    report.value = scale * res.value;
    report.quadrature_error = scale * res.abs_error;
    return report;
}

FisherReport bucket_fisher(ExperimentConfig const& cfg, FisherConvention convention)
{
    auto const& prof = cfg.profile();
    double const nu = cfg.nu();
    double const dt = cfg.delta_t();
    double const s = prof.sigma_omega();
    double const eff = efficiency_factor(cfg.eta(), convention);
    FisherReport report{0.0, FisherMethod::bucket, 0.0, convention, 0};

    if (nu == 0.0)
        return report;
    if (dt == 0.0) {
        // p_B -> 1 only for nu = 1; the 0/0 there has the limit sigma_w^2/2.
        report.value = nu == 1.0 ? eff * s * s / 2.0 : 0.0;
        return report;
    }

    // p_B = (1 + nu g)/2 with g = exp(-x), x = sigma_w^2 dt^2 / 4.
    double const x = 0.25 * s * s * dt * dt;
    double const g = std::exp(-x);
    double const p_b = 0.5 * (1.0 + nu * g);
    double const p_a = 0.5 * ((1.0 - nu) - nu * std::expm1(-x));
    double const dp = 0.5 * nu * temporal_overlap_derivative(prof, dt);
    if (p_a <= 0.0 || p_b <= 0.0)
        return report;
    report.value = eff * dp * dp * (1.0 / p_b + 1.0 / p_a);
    return report;
}

double crb(FisherReport const& fisher, std::uint64_t n_pairs)
{
    if (n_pairs == 0)
        throw InvalidArgument("crb needs at least one pair");
    if (!(fisher.value > 0.0))
        throw UnboundedVariance("zero Fisher information: variance is unbounded");
    return 1.0 / (static_cast<double>(n_pairs) * fisher.value);
}

PrecisionBudget precision_budget(double rate, double duration, double sigma_t, double eta, double nu)
{
    if (!(rate > 0.0 && duration > 0.0))
        throw InvalidArgument("rate and duration must be positive");
    if (!(nu > 0.0 && nu <= 1.0))
        throw InvalidArgument("nu must lie in (0, 1]");
    // Work in units of sigma_t and convert back at the end.
    SpectralProfile const unit(1.0);
    double const f_unit = nu == 1.0 ? fisher_indistinguishable(unit, eta).value : fisher_asymptote(unit, nu, eta).value;
    double const pairs = rate * duration;
    double const std_unit = 1.0 / std::sqrt(pairs * f_unit);
    SpectralProfile const physical(sigma_t);
    return {pairs, f_unit / (sigma_t * sigma_t), std_unit * physical.sigma_t()};
}

} // namespace qbeat
