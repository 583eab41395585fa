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

#include <qbeat/fisher.hpp>
#include <qbeat/interference.hpp>
#include <qbeat/sampling.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace qbeat {

struct LikelihoodOptions {
    /// Brackets below this value are raised to it before the log. Zero
    /// disables flooring, so an exact zero bracket gives -infinity.
    double floor = 0.0;
};

struct LikelihoodDiagnostics {
    std::size_t floored_terms = 0;
};

/// Delay-dependent part of the log-likelihood,
///   sum_i log(1 + alpha(X_i) nu cos(dw_i dt / 2)).
/// The envelope factor does not depend on dt and is dropped. Throws
/// InvalidArgument for an empty sample or a negative candidate.
double log_likelihood(std::span<Outcome const> outcomes, double nu, double delta_t_candidate,
                      LikelihoodOptions const& opts = {}, LikelihoodDiagnostics* diag = nullptr);

double log_likelihood(SampleSet const& samples, double delta_t_candidate);

/// d/d(dt) of log(1 + alpha(X) nu cos(dw dt / 2)) for one outcome.
double score_term(Outcome const& outcome, double nu, double delta_t);

/// score_term summed over the sample.
double score(std::span<Outcome const> outcomes, double nu, double delta_t);

struct MleOptions {
    double search_max = 10.0;
    double tolerance = 1e-6;
    /// Coarse-grid spacing cap.
    double max_grid_step = 0.05;
};

struct MleResult {
    double estimate = 0.0;
    double log_likelihood = 0.0;
    std::size_t n_samples = 0;
    bool converged = false;
    std::size_t grid_points_used = 0;
    std::size_t floored_terms = 0;
};

/// Maximum-likelihood delay on [0, search_max]: coarse grid with spacing
/// min(max_grid_step, pi / (2 max|dw|)), then golden-section refinement
/// around the best grid point. Throws NonIdentifiable when nu == 0 or the
/// likelihood is flat over the grid.
MleResult mle_estimate(std::span<Outcome const> outcomes, double nu, MleOptions const& opts = {});

MleResult mle_estimate(SampleSet const& samples, MleOptions const& opts = {});

/// How the per-N estimator variance is computed from the trials.
enum class VarianceEstimator {
    /// Plain unbiased sample variance.
    sample,
    /// Sample variance with the soft-clipped score at the true delay as a
    /// control variate. u = sum_i (psi(l'_i) - E psi) / (N F) follows the
    /// estimator error to first order; its first two moments are known by
    /// quadrature, so the correction adds no bias. The bound c =
    /// clip_sigmas sqrt(F) keeps u^2 square-integrable at nu = 1, where the
    /// raw score has no fourth moment.
    score_control_variate,
};

std::string_view to_string(VarianceEstimator v) noexcept;

struct StudyOptions {
    std::size_t trials = 4000;
    unsigned workers = 1;
    MleOptions mle;
    VarianceEstimator variance = VarianceEstimator::score_control_variate;
    double clip_sigmas = 8.0;
};

/// Smooth clip psi(l) = l / (1 + (l / c)^8)^(1/8) applied to score terms;
/// psi(l) ~ l for |l| << c and psi -> +-c. NaN maps to 0.
double soft_clip(double score, double bound) noexcept;

/// Moments E[psi] and E[psi^2] of psi = soft_clip(l', bound) for one
/// detected outcome.
struct ClippedScoreMoments {
    double mean = 0.0;
    double second = 0.0;
};

ClippedScoreMoments clipped_score_moments(ExperimentConfig const& cfg, double bound);

struct MonteCarloRecord {
    std::size_t n = 0;
    std::size_t trials = 0; ///< identifiable trials used in the statistics
    std::size_t non_identifiable = 0;
    double mean_estimate = 0.0;
    double variance = 0.0; ///< per `estimator`
    double sample_variance = 0.0;
    double variance_over_crb = 0.0;
    double mean_over_truth = 0.0;
    /// 95% half-width of variance_over_crb from a delete-one jackknife.
    double ci_halfwidth = 0.0;
    double mean_ci_halfwidth = 0.0; ///< 95% half-width of mean_over_truth
};

struct FitResult {
    double a = 0.0;
    double a_min = 0.0;
    double a_max = 0.0;
    double sse = 0.0;
    double r_squared = 0.0;
    std::size_t points = 0;
};

struct MonteCarloReport {
    ExperimentConfig cfg;
    double truth = 0.0;
    std::uint64_t seed = 0;
    double fisher_per_pair = 0.0;
    VarianceEstimator estimator = VarianceEstimator::sample;
    std::vector<MonteCarloRecord> per_n;
    std::optional<FitResult> fit;
};

/// Stream id of trial `trial` at sample size `n`.
constexpr std::uint64_t trial_stream_id(std::uint64_t n, std::uint64_t trial) noexcept
{
    return (n << 32) | (trial & 0xFFFFFFFFu);
}

/// For each N, `trials` independent sample sets of N detected pairs are
/// drawn and estimated. Output is identical for any worker count. Throws
/// InvalidArgument for trials < 2, an empty n_list or N == 0.
MonteCarloReport monte_carlo_study(ExperimentConfig const& cfg, std::span<std::size_t const> n_list,
                                   std::uint64_t seed, StudyOptions const& opts = {});

/// Weighted one-parameter fit of variance_over_crb = 1 + a / N with
/// weights 1 / ci_halfwidth^2. Throws InvalidArgument with fewer than two
/// distinct N values.
FitResult fit_inverse_n(MonteCarloReport const& report);

/// Same fit on raw points (N, y, sigma).
FitResult fit_inverse_n(std::span<double const> n, std::span<double const> y, std::span<double const> sigma);

/// Delete-one jackknife of a smooth statistic of column means. `columns`
/// holds k equally long columns; `stat` maps k means to the statistic.
/// Returns (statistic on all rows, jackknife standard error).
template <class Stat>
std::pair<double, double> jackknife(std::span<std::vector<double> const> columns, Stat&& stat);

} // namespace qbeat

#include <qbeat/detail/jackknife.ipp>
