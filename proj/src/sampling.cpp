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

#include <qbeat/sampling.hpp>

#include <qbeat/errors.hpp>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace qbeat {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept
{
    std::uint64_t const p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

} // namespace

Philox4x32::counter_type Philox4x32::bijection(counter_type ctr, key_type key) noexcept
{
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_id_(stream_id)
{
}

void RandomStream::refill() noexcept
{
    Philox4x32::counter_type const ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                       static_cast<std::uint32_t>(stream_id_),
                                       static_cast<std::uint32_t>(stream_id_ >> 32)};
    auto const out = Philox4x32::bijection(ctr, key_);
    buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    ++block_;
    used_ = 0;
}

RandomStream::result_type RandomStream::operator()() noexcept
{
    if (used_ == 2)
        refill();
    return buffer_[used_++];
}

double RandomStream::uniform() noexcept
{
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
}

double RandomStream::normal() noexcept
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    double const r = std::sqrt(-2.0 * std::log(uniform()));
    double const phi = 2.0 * std::numbers::pi * uniform();
    spare_normal_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
}

Outcome sample_outcome(ExperimentConfig const& cfg, RandomStream& rng)
{
    double const sd = std::numbers::sqrt2 * cfg.profile().sigma_omega();
    double const dw = sd * rng.normal();
    double const p_b = conditional_bunching_probability(cfg, dw);
    // uniform() is in (0, 1]; p_b == 1 always yields B and p_b == 0 never does.
    PortPattern const x = rng.uniform() <= p_b ? PortPattern::B : PortPattern::A;
    return {dw, x};
}

void sample_into(std::span<Outcome> out, ExperimentConfig const& cfg, RandomStream& rng)
{
    for (auto& o : out)
        o = sample_outcome(cfg, rng);
}

SampleSet sample_batch(ExperimentConfig const& cfg, std::size_t n, std::uint64_t seed, std::uint64_t stream_id)
{
    if (n == 0)
        throw InvalidArgument("sample_batch needs n >= 1");
    SampleSet set{std::vector<Outcome>(n), cfg, seed, stream_id};
    RandomStream rng(seed, stream_id);
    sample_into(set.outcomes, cfg, rng);
    return set;
}

void write_samples_csv(std::ostream& os, std::span<SampleSet const> sets)
{
    os << "trial,index,delta_omega,pattern\n";
    char buf[64];
    for (auto const& set : sets) {
        double const s = set.cfg.profile().sigma_omega();
        for (std::size_t i = 0; i < set.outcomes.size(); ++i) {
            auto const& o = set.outcomes[i];
            std::snprintf(buf, sizeof buf, "%.17g", o.delta_omega / s);
            os << set.stream_id << ',' << i << ',' << buf << ',' << to_char(o.pattern) << '\n';
        }
    }
}

} // namespace qbeat
