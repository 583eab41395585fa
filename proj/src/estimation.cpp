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

#include <qbeat/estimation.hpp>

#include <qbeat/errors.hpp>
#include <qbeat/quadrature.hpp>

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

namespace qbeat {

std::string_view to_string(VarianceEstimator v) noexcept
{
    return v == VarianceEstimator::sample ? "sample" : "score_control_variate";
}

double log_likelihood(std::span<Outcome const> outcomes, double nu, double delta_t_candidate,
                      LikelihoodOptions const& opts, LikelihoodDiagnostics* diag)
{
    if (outcomes.empty())
        throw InvalidArgument("log_likelihood needs a nonempty sample");
    if (!(delta_t_candidate >= 0.0))
        throw InvalidArgument("candidate delay must be non-negative");

    double const half = 0.5 * delta_t_candidate;
    double sum = 0.0;
    std::size_t floored = 0;
    for (auto const& o : outcomes) {
        double bracket = 1.0 + alpha(o.pattern) * nu * std::cos(o.delta_omega * half);
        if (bracket < opts.floor) {
            bracket = opts.floor;
            ++floored;
        }
        sum += std::log(bracket);
    }
    if (diag)
        diag->floored_terms += floored;
    return sum;
}

double log_likelihood(SampleSet const& samples, double delta_t_candidate)
{
    return log_likelihood(samples.outcomes, samples.cfg.nu(), delta_t_candidate);
}

double score_term(Outcome const& o, double nu, double delta_t)
{
    double const a = alpha(o.pattern) * nu;
    double const x = 0.5 * o.delta_omega * delta_t;
    return -a * std::sin(x) * 0.5 * o.delta_omega / (1.0 + a * std::cos(x));
}

double score(std::span<Outcome const> outcomes, double nu, double delta_t)
{
    double sum = 0.0;
    for (auto const& o : outcomes)
        sum += score_term(o, nu, delta_t);
    return sum;
}

namespace {

// log g, where g = psi(l) / l = (1 + (l / c)^8)^(-1/8).
double log_clip_shrink(double score, double bound) noexcept
{
    double const r = std::abs(score / bound);
    if (r > 1e30)
        return -std::log(r);
    double const r2 = r * r;
    double const r4 = r2 * r2;
    return -0.125 * std::log1p(r4 * r4);
}

} // namespace

double soft_clip(double score, double bound) noexcept
{
    if (std::isnan(score))
        return 0.0;
    if (std::isinf(score))
        return std::copysign(bound, score);
    return score * std::exp(log_clip_shrink(score, bound));
}

ClippedScoreMoments clipped_score_moments(ExperimentConfig const& cfg, double bound)
{
    if (!(bound > 0.0))
        throw InvalidArgument("clip bound must be positive");
    if (cfg.tau_r() != 0.0)
        throw InvalidArgument("clipped score moments need tau_r = 0");
    double const nu = cfg.nu();
    double const dt = cfg.delta_t();
    auto moment = [&](int power) {
        // p l = -C a sin(x) dw / 4 has no pole where the bracket vanishes,
        // so every term is written as (p l) times a bounded factor.
        auto integrand = [&](double dw) {
            double const envelope = envelope_density(cfg.profile(), dw);
            double const x = 0.5 * dw * dt;
            double total = 0.0;
            for (auto pattern : {PortPattern::A, PortPattern::B}) {
                double const a = alpha(pattern) * nu;
                double const pl = -0.25 * envelope * a * std::sin(x) * dw;
                if (pl == 0.0)
                    continue;
                double const l = score_term(Outcome{dw, pattern}, nu, dt);
                double const log_g = log_clip_shrink(l, bound);
                // sum_X p l vanishes pointwise, so the first moment is the
                // clipping deficit alone.
                if (power == 1)
                    total += pl * std::expm1(log_g);
                else
                    total += pl * soft_clip(l, bound) * std::exp(log_g);
            }
            return total;
        };
        double const s = cfg.profile().sigma_omega();
        QuadratureOptions q;
        q.abs_tol = 1e-10 * s * s;
        q.rel_tol = 1e-10;
        q.max_depth = 16;
        // The integrand is even in dw. Panel edges fall on multiples of
        // 2 pi / dt, where brackets vanish at nu = 1.
        double width = s;
        if (dt > 0.0) {
            double const period = 2.0 * std::numbers::pi / dt;
            width = period / std::max(4.0, std::ceil(period / s));
        }
        double const hi = width * std::ceil(14.0 * s / width);
        q.max_panel_width = width;
        return 2.0 * integrate(integrand, 0.0, hi, q).value;
    };
    return {moment(1), moment(2)};
}

namespace {

constexpr double kBracketFloor = 1e-300;
// Coarse-grid brackets are multiplied in blocks before one log; this floor
// keeps a block of kBlock factors above the double range limit.
constexpr double kCoarseFloor = 1e-30;
constexpr std::size_t kBlock = 8;

// Log-likelihood on the uniform grid t_k = k * step, k = 0..points-1, with
// cos(dw t_k / 2) advanced by the Chebyshev recurrence
// cos((k+1)x) = 2 cos(x) cos(kx) - cos((k-1)x).
std::vector<double> coarse_profile(std::span<Outcome const> outcomes, double nu, double step, std::size_t points)
{
    std::size_t const n = outcomes.size();
    std::vector<double> weight(n), two_cos(n), prev(n), cur(n);
    for (std::size_t i = 0; i < n; ++i) {
        weight[i] = alpha(outcomes[i].pattern) * nu;
        double const c1 = std::cos(0.5 * outcomes[i].delta_omega * step);
        two_cos[i] = 2.0 * c1;
        prev[i] = c1; // cos(-x)
        cur[i] = 1.0;
    }

    std::vector<double> ll(points, 0.0);
    for (std::size_t k = 0; k < points; ++k) {
        if (k > 0) {
            for (std::size_t i = 0; i < n; ++i) {
                double const next = two_cos[i] * cur[i] - prev[i];
                prev[i] = cur[i];
                cur[i] = next;
            }
        }
        double sum = 0.0;
        std::size_t i = 0;
        for (; i + kBlock <= n; i += kBlock) {
            double prod = 1.0;
            for (std::size_t j = 0; j < kBlock; ++j)
                prod *= std::max(1.0 + weight[i + j] * cur[i + j], kCoarseFloor);
            sum += std::log(prod);
        }
        for (; i < n; ++i)
            sum += std::log(std::max(1.0 + weight[i] * cur[i], kCoarseFloor));
        ll[k] = sum;
    }
    return ll;
}

} // namespace

MleResult mle_estimate(std::span<Outcome const> outcomes, double nu, MleOptions const& opts)
{
    if (outcomes.empty())
        throw InvalidArgument("mle_estimate needs a nonempty sample");
    if (!(opts.search_max > 0.0 && opts.tolerance > 0.0 && opts.max_grid_step > 0.0))
        throw InvalidArgument("search_max, tolerance and grid step must be positive");
    if (nu == 0.0)
        throw NonIdentifiable("nu = 0: the likelihood does not depend on the delay");

    double max_dw = 0.0;
    for (auto const& o : outcomes)
        max_dw = std::max(max_dw, std::abs(o.delta_omega));
    if (max_dw == 0.0)
        throw NonIdentifiable("all frequency differences are zero: the likelihood is flat");

    double const step_cap = std::min(opts.max_grid_step, std::numbers::pi / (2.0 * max_dw));
    auto const intervals = static_cast<std::size_t>(std::ceil(opts.search_max / step_cap));
    double const step = opts.search_max / static_cast<double>(intervals);
    std::size_t const points = intervals + 1;

    auto const profile = coarse_profile(outcomes, nu, step, points);
    auto const best_it = std::max_element(profile.begin(), profile.end());
    auto const [lo_it, hi_it] = std::minmax_element(profile.begin(), profile.end());
    if (*hi_it - *lo_it == 0.0)
        throw NonIdentifiable("likelihood is flat over the search interval");
    auto const best = static_cast<std::size_t>(best_it - profile.begin());

    LikelihoodOptions const lopts{kBracketFloor};
    LikelihoodDiagnostics diag;
    auto f = [&](double t) { return log_likelihood(outcomes, nu, t, lopts, &diag); };

    // Golden-section maximization on the two cells around the grid maximum.
    double a = best == 0 ? 0.0 : step * static_cast<double>(best - 1);
    double b = best + 1 >= points ? opts.search_max : step * static_cast<double>(best + 1);
    double const inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > opts.tolerance) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
        else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }

    MleResult result;
    result.estimate = f1 >= f2 ? x1 : x2;
    result.log_likelihood = std::max(f1, f2);
    // The maximum may sit on the boundary of the search interval.
    for (double edge : {0.0, opts.search_max}) {
        if (std::abs(edge - result.estimate) <= step) {
            double const fe = f(edge);
            if (fe >= result.log_likelihood) {
                result.estimate = edge;
                result.log_likelihood = fe;
            }
        }
    }
    result.n_samples = outcomes.size();
    result.converged = std::isfinite(result.log_likelihood);
    result.grid_points_used = points;
    result.floored_terms = diag.floored_terms;
    return result;
}

MleResult mle_estimate(SampleSet const& samples, MleOptions const& opts)
{
    return mle_estimate(samples.outcomes, samples.cfg.nu(), opts);
}

namespace {

struct TrialResult {
    double estimate = 0.0;
    double first_order = 0.0; ///< clipped score sum / (N F) at the true delay
    bool identifiable = false;
};

// Known moments of the per-trial control variate u.
struct ControlMoments {
    double mean = 0.0;
    double second = 0.0;
};

MonteCarloRecord summarize(std::size_t n, std::vector<TrialResult> const& results, double truth, double fisher,
                           VarianceEstimator estimator, ControlMoments const& control)
{
    MonteCarloRecord rec;
    rec.n = n;
    std::vector<double> err, err2, cv, cv2;
    for (auto const& r : results) {
        if (!r.identifiable) {
            ++rec.non_identifiable;
            continue;
        }
        double const d = r.estimate - truth;
        err.push_back(d);
        err2.push_back(d * d);
        cv.push_back(d - r.first_order);
        cv2.push_back(d * d - r.first_order * r.first_order);
    }
    rec.trials = err.size();
    if (rec.trials < 2)
        throw NonIdentifiable("fewer than two identifiable trials at N = " + std::to_string(n));

    double const m = static_cast<double>(rec.trials);
    double const nf = static_cast<double>(n) * fisher;
    double const z = 1.959963984540054;

    double mean_err = 0.0;
    for (double d : err)
        mean_err += d;
    mean_err /= m;
    double ss = 0.0;
    for (double d : err)
        ss += (d - mean_err) * (d - mean_err);
    rec.sample_variance = ss / (m - 1.0);
    rec.mean_estimate = truth + mean_err;
    rec.mean_over_truth = truth > 0.0 ? rec.mean_estimate / truth : std::numeric_limits<double>::quiet_NaN();
    if (truth > 0.0)
        rec.mean_ci_halfwidth = z * std::sqrt(rec.sample_variance / m) / truth;

    auto pop_variance = [](std::span<double const> mu) { return mu[1] - mu[0] * mu[0]; };
    if (estimator == VarianceEstimator::sample) {
        std::vector<double> const cols[] = {err, err2};
        auto const [v, se] = jackknife(std::span<std::vector<double> const>(cols), pop_variance);
        (void)v;
        rec.variance = rec.sample_variance;
        rec.ci_halfwidth = z * se * nf;
    }
    else {
        std::vector<double> const cols[] = {cv, cv2};
        auto stat = [&control](std::span<double const> mu) {
            double const mean = mu[0] + control.mean;
            return mu[1] + control.second - mean * mean;
        };
        auto const [v, se] = jackknife(std::span<std::vector<double> const>(cols), stat);
        rec.variance = v;
        rec.ci_halfwidth = z * se * nf;
    }
    rec.variance_over_crb = rec.variance * nf;
    return rec;
}

} // namespace

MonteCarloReport monte_carlo_study(ExperimentConfig const& cfg, std::span<std::size_t const> n_list,
                                   std::uint64_t seed, StudyOptions const& opts)
{
    if (opts.trials < 2)
        throw InvalidArgument("monte_carlo_study needs at least two trials per N");
    if (n_list.empty())
        throw InvalidArgument("monte_carlo_study needs at least one N");
    for (auto n : n_list)
        if (n == 0)
            throw InvalidArgument("sample sizes must be positive");
    if (cfg.nu() == 0.0)
        throw NonIdentifiable("nu = 0: the delay cannot be estimated");

    FisherOptions fopts;
    fopts.convention = FisherConvention::per_detected_pair;
    double const fisher = fisher_partial(cfg, fopts).value;
    double const truth = cfg.delta_t();
    double const nu = cfg.nu();

    MonteCarloReport report{cfg, truth, seed, fisher, opts.variance, {}, std::nullopt};
    unsigned const workers = std::max(1u, opts.workers);

    double const bound = opts.clip_sigmas * std::sqrt(fisher);
    ClippedScoreMoments per_pair;
    if (opts.variance == VarianceEstimator::score_control_variate)
        per_pair = clipped_score_moments(cfg, bound);

    for (std::size_t n : n_list) {
        double const nd = static_cast<double>(n);
        double const scale = nd * fisher;
        // u is centred on its known mean, so E[u] = 0 exactly.
        ControlMoments const control{
            0.0, nd * (per_pair.second - per_pair.mean * per_pair.mean) / (scale * scale)};

        std::vector<TrialResult> results(opts.trials);
        std::atomic<std::size_t> next{0};

        auto work = [&]() {
            std::vector<Outcome> buffer(n);
            for (;;) {
                std::size_t const t = next.fetch_add(1, std::memory_order_relaxed);
                if (t >= opts.trials)
                    break;
                RandomStream rng(seed, trial_stream_id(n, t));
                sample_into(buffer, cfg, rng);
                TrialResult r;
                try {
                    r.estimate = mle_estimate(buffer, nu, opts.mle).estimate;
                    r.identifiable = true;
                }
                catch (NonIdentifiable const&) {
                    r.identifiable = false;
                }
                double clipped = 0.0;
                for (auto const& o : buffer)
                    clipped += soft_clip(score_term(o, nu, truth), bound);
                r.first_order = (clipped - nd * per_pair.mean) / scale;
                results[t] = r;
            }
        };

        if (workers == 1) {
            work();
        }
        else {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back(work);
        }
        report.per_n.push_back(summarize(n, results, truth, fisher, opts.variance, control));
    }
    return report;
}

FitResult fit_inverse_n(std::span<double const> n, std::span<double const> y, std::span<double const> sigma)
{
    if (n.size() != y.size() || n.size() != sigma.size())
        throw InvalidArgument("fit inputs differ in length");
    std::vector<double> distinct(n.begin(), n.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 2)
        throw InvalidArgument("fit_inverse_n needs at least two distinct N");

    // y - 1 = a x with x = 1/N, weights w = 1/sigma^2.
    double sxx = 0.0, sxy = 0.0, sw = 0.0, swy = 0.0;
    std::vector<double> w(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (!(n[i] > 0.0 && sigma[i] > 0.0))
            throw InvalidArgument("fit needs positive N and uncertainties");
        w[i] = 1.0 / (sigma[i] * sigma[i]);
        double const x = 1.0 / n[i];
        sxx += w[i] * x * x;
        sxy += w[i] * x * (y[i] - 1.0);
        sw += w[i];
        swy += w[i] * y[i];
    }
    FitResult fit;
    fit.points = n.size();
    fit.a = sxy / sxx;

    double const ybar = swy / sw;
    double sst = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        double const r = y[i] - (1.0 + fit.a / n[i]);
        fit.sse += w[i] * r * r;
        sst += w[i] * (y[i] - ybar) * (y[i] - ybar);
    }
    fit.r_squared = sst > 0.0 ? 1.0 - fit.sse / sst : 1.0;

    auto const dof = static_cast<double>(n.size() - 1);
    boost::math::students_t dist(dof);
    double const t = boost::math::quantile(boost::math::complement(dist, 0.025));
    double const se = std::sqrt(fit.sse / dof / sxx);
    fit.a_min = fit.a - t * se;
    fit.a_max = fit.a + t * se;
    return fit;
}

FitResult fit_inverse_n(MonteCarloReport const& report)
{
    std::vector<double> n, y, s;
    for (auto const& rec : report.per_n) {
        n.push_back(static_cast<double>(rec.n));
        y.push_back(rec.variance_over_crb);
        s.push_back(rec.ci_halfwidth);
    }
    return fit_inverse_n(n, y, s);
}

} // namespace qbeat
