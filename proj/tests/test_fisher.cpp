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

#include <qbeat/errors.hpp>
#include <qbeat/fisher.hpp>

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace qbeat;

namespace {

ExperimentConfig make(double dt, double nu, double eta = 1.0, double st = 1.0)
{
    return ExperimentConfig(SpectralProfile(st), dt, nu, eta);
}

// Reference values from an independent 30-digit quadrature with the
// integration range split at every eighth of the beat period.
struct Reference {
    double nu, dt, fisher;
};
constexpr Reference kReference[] = {
    {0.95, 0.5, 0.049205388049501231}, {0.95, 0.6, 0.0584259043243765},   {0.95, 0.8, 0.072763557248049961},
    {0.95, 2.0, 0.10379234244472311},  {0.95, 5.0, 0.086877029992305845}, {0.95, 20.0, 0.085968762510010011},
    {0.98, 0.5, 0.074504631331184192}, {0.98, 2.0, 0.11522983502078446},  {0.98, 5.0, 0.10086315126692889},
    {0.98, 20.0, 0.1001253140723345},  {0.5, 0.7, 0.0063847124591685386}, {0.5, 5.0, 0.017091914924407237},
};

} // namespace

TEST_CASE("quantum limit")
{
    CHECK(quantum_limit(SpectralProfile(1.0)).value == 0.25);
    CHECK(quantum_limit(SpectralProfile(2.0)).value == 0.0625);
    CHECK(quantum_limit(SpectralProfile(0.5)).value == 1.0);
    CHECK(quantum_limit(SpectralProfile(1.0)).method == FisherMethod::quantum_limit);
}

TEST_CASE("indistinguishable Fisher information")
{
    SpectralProfile const p(1.0);
    CHECK(fisher_indistinguishable(p, 1.0).value == 0.125);
    CHECK(fisher_indistinguishable(p, 0.5).value == 0.0625);
    CHECK(fisher_indistinguishable(p, 0.5, FisherConvention::per_detected_pair).value == 0.125);
    for (double eta : {0.3, 0.77, 1.0})
        for (double st : {0.1, 1.0, 3.0}) {
            SpectralProfile const q(st);
            CHECK(fisher_indistinguishable(q, eta).value / quantum_limit(q).value == doctest::Approx(eta / 2).epsilon(1e-15));
        }
    CHECK_THROWS_AS(fisher_indistinguishable(p, 0.0), InvalidArgument);
}

TEST_CASE("partial-distinguishability Fisher information against reference values")
{
    for (auto const& r : kReference) {
        auto const rep = fisher_partial(make(r.dt, r.nu));
        CHECK(rep.method == FisherMethod::quadrature);
        CHECK(rep.value == doctest::Approx(r.fisher).epsilon(1e-9));
        CHECK(rep.quadrature_error < 1e-9);
    }
}

TEST_CASE("partial Fisher special cases")
{
    for (double dt : {0.0, 0.4, 7.0}) {
        auto const one = fisher_partial(make(dt, 1.0));
        CHECK(one.value == 0.125);
        CHECK(one.method == FisherMethod::analytic);
        CHECK(fisher_partial(make(dt, 0.0)).value == 0.0);
    }
    CHECK(fisher_partial(make(0.0, 0.9)).value == 0.0);
    // eta scales linearly; the detected-pair convention drops it.
    auto const cfg = make(1.3, 0.9, 0.4);
    FisherOptions detected;
    detected.convention = FisherConvention::per_detected_pair;
    CHECK(fisher_partial(cfg).value == doctest::Approx(0.4 * fisher_partial(cfg, detected).value).epsilon(1e-12));
    // nu -> 1 is continuous with the analytic branch.
    CHECK(fisher_partial(make(1.3, 1.0 - 1e-9)).value == doctest::Approx(0.125).epsilon(1e-3));
}

TEST_CASE("partial Fisher equals the outcome-sum Fisher integral")
{
    // Direct sum_X int (dP/ddt)^2 / P with an analytic derivative of the
    // delay probability, integrated by Simpson.
    for (double nu : {0.5, 0.95}) {
        for (double dt : {0.7, 3.0}) {
            auto integrand = [&](double dw) {
                double const c = std::exp(-dw * dw) / std::sqrt(std::acos(-1.0));
                double total = 0.0;
                for (double a : {1.0, -1.0}) {
                    double const p = 0.5 * c * (1.0 + a * nu * std::cos(0.5 * dw * dt));
                    double const dp = -0.5 * c * a * nu * std::sin(0.5 * dw * dt) * 0.5 * dw;
                    if (p > 0)
                        total += dp * dp / p;
                }
                return total;
            };
            double const expected = qbeat::testing::simpson(integrand, -8.0, 8.0, 40000);
            CHECK(fisher_partial(make(dt, nu)).value == doctest::Approx(expected).epsilon(1e-8));
        }
    }
}

TEST_CASE("partial Fisher bounded by nu = 1 and monotone in nu")
{
    int points = 0;
    for (int i = 0; i <= 20; ++i) {
        double const dt = 0.3 * i;
        double prev = -1.0;
        for (int j = 0; j <= 10; ++j) {
            double const nu = 0.1 * j;
            double const f = fisher_partial(make(dt, nu)).value;
            CHECK(f <= 0.125 * (1 + 1e-12));
            CHECK(f >= prev - 1e-13);
            prev = f;
            ++points;
        }
    }
    CHECK(points >= 200);
}

TEST_CASE("large-delay asymptote")
{
    SpectralProfile const p(1.0);
    CHECK(fisher_asymptote(p, 1.0, 1.0).value == 0.125);
    CHECK(fisher_asymptote(p, 0.0, 1.0).value == 0.0);
    CHECK(fisher_asymptote(p, 0.95, 1.0).value == doctest::Approx(0.085968762510010011).epsilon(1e-14));
    for (double nu : {0.95, 0.98}) {
        double const asym = fisher_asymptote(p, nu, 1.0).value;
        CHECK(std::abs(fisher_partial(make(20.0, nu)).value / asym - 1.0) < 0.01);
        CHECK(std::abs(fisher_partial(make(5.0, nu)).value / asym - 1.0) < 0.03);
    }
}

TEST_CASE("bucket-detector Fisher information")
{
    CHECK(bucket_fisher(make(0.01, 1.0)).value == doctest::Approx(0.1249992187516276).epsilon(1e-10));
    CHECK(std::abs(bucket_fisher(make(0.01, 1.0)).value / 0.125 - 1.0) < 1e-3);
    CHECK(bucket_fisher(make(0.0, 1.0)).value == 0.125);
    CHECK(bucket_fisher(make(0.0, 0.9)).value == 0.0);
    CHECK(bucket_fisher(make(2.0, 1.0)).value == doctest::Approx(0.096343380158549893).epsilon(1e-12));
    CHECK(bucket_fisher(make(2.0, 0.95)).value == doctest::Approx(0.075589174705617666).epsilon(1e-12));
    CHECK(bucket_fisher(make(10.0, 1.0)).value == doctest::Approx(5.8229172813660808e-6).epsilon(1e-10));
    CHECK(bucket_fisher(make(20.0, 1.0)).value < 1e-18);
    for (double dt : {0.5, 3.0})
        CHECK(bucket_fisher(make(dt, 0.0)).value == 0.0);

    // Discarding the frequency cannot add information.
    for (double nu : {0.5, 0.9, 0.95, 1.0})
        for (double dt : {0.05, 0.5, 1.0, 2.0, 4.0, 8.0})
            CHECK(bucket_fisher(make(dt, nu)).value <= fisher_partial(make(dt, nu)).value * (1 + 1e-10));
}

TEST_CASE("Cramer-Rao bound")
{
    FisherReport f;
    f.value = 0.125;
    CHECK(crb(f, 5000) == doctest::Approx(0.0016).epsilon(1e-14));
    CHECK(std::sqrt(crb(f, 5000)) == doctest::Approx(0.04).epsilon(1e-14));
    f.value = 0.25;
    CHECK(crb(f, 1) == 4.0);
    f.value = 0.0;
    CHECK_THROWS_AS(crb(f, 10), UnboundedVariance);
    f.value = 1.0;
    CHECK_THROWS_AS(crb(f, 0), InvalidArgument);
}

TEST_CASE("precision budget")
{
    auto const four_hours = precision_budget(1e6, 4 * 3600.0, 60e-15, 1.0, 1.0);
    CHECK(four_hours.timing_std == doctest::Approx(1.414213562373095e-18).epsilon(1e-12));
    CHECK(four_hours.pairs == doctest::Approx(1.44e10));
    auto const eight_min = precision_budget(1e6, 8 * 60.0, 10e-15, 1.0, 1.0);
    CHECK(eight_min.timing_std == doctest::Approx(1.2909944487358056e-18).epsilon(1e-12));
    auto const faster = precision_budget(4e6, 4 * 3600.0, 60e-15, 1.0, 1.0);
    CHECK(faster.timing_std == doctest::Approx(0.5 * four_hours.timing_std).epsilon(1e-14));
    // Losses and distinguishability lower the per-pair information.
    CHECK(precision_budget(1e6, 3600.0, 60e-15, 0.5, 1.0).timing_std >
          precision_budget(1e6, 3600.0, 60e-15, 1.0, 1.0).timing_std);
    CHECK(precision_budget(1e6, 3600.0, 60e-15, 1.0, 0.95).timing_std >
          precision_budget(1e6, 3600.0, 60e-15, 1.0, 1.0).timing_std);
    CHECK_THROWS_AS(precision_budget(0.0, 1.0, 1e-15, 1.0, 1.0), InvalidArgument);
}
