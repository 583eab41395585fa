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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace qbeat {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Output is
/// a pure function of (key, counter), so any trial's stream can be
/// regenerated without replaying the others.
class Philox4x32 {
public:
    using counter_type = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    static counter_type bijection(counter_type ctr, key_type key) noexcept;
};

/// Stream of random variates for one (seed, stream_id) pair. The seed is
/// the Philox key; the stream id fills the upper half of the counter and
/// the block index the lower half.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }
    result_type operator()() noexcept;

    /// Uniform on (0, 1], 53-bit resolution.
    double uniform() noexcept;
    /// Standard normal by Box-Muller; pairs are consumed in order.
    double normal() noexcept;

private:
    void refill() noexcept;

    Philox4x32::key_type key_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    unsigned used_ = 2;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// Detected outcomes of one simulated trial.
struct SampleSet {
    std::vector<Outcome> outcomes;
    ExperimentConfig cfg;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

/// Draws one detected pair: dw from C (normal, sd sqrt2 sigma_w), then X
/// with P(B) = conditional_bunching_probability(cfg, dw).
Outcome sample_outcome(ExperimentConfig const& cfg, RandomStream& rng);

/// n detected pairs from stream (seed, stream_id). Throws InvalidArgument
/// for n == 0.
SampleSet sample_batch(ExperimentConfig const& cfg, std::size_t n, std::uint64_t seed, std::uint64_t stream_id);

/// Fills `out` in place; used by the Monte Carlo loop to recycle buffers.
void sample_into(std::span<Outcome> out, ExperimentConfig const& cfg, RandomStream& rng);

/// CSV dump: header `trial,index,delta_omega,pattern`, dw in units of
/// sigma_w, 17 significant digits. `trial` is the stream id.
void write_samples_csv(std::ostream& os, std::span<SampleSet const> sets);

} // namespace qbeat
