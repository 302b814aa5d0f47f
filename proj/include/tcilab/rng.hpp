// Copyright 2026 The tcilab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <limits>

namespace tcilab {

/**
 * Counter-based generator: the k-th output of stream s under seed m is
 * splitmix64(key(m, s) + (k + 1) * golden), so (seed, stream, counter) fully
 * determines every draw. Streams derived from a master seed never share state,
 * which keeps parallel sweeps reproducible regardless of scheduling.
 *
 * Uniform doubles are produced from the top 53 bits, so results do not depend
 * on the standard library's distribution implementations.
 */
class CounterRng {
  public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream), key_(mix(seed ^ mix(stream + kGolden))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return at(counter_++); }

    /// Output at an absolute counter position; does not advance the generator.
    [[nodiscard]] result_type at(std::uint64_t counter) const {
        return mix(key_ + (counter + 1) * kGolden);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Independent generator for a sub-task.
    [[nodiscard]] CounterRng derive(std::uint64_t stream) const {
        return CounterRng(mix(key_ ^ 0xD1B54A32D192ED03ULL), stream);
    }

    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::uint64_t stream() const { return stream_; }
    [[nodiscard]] std::uint64_t counter() const { return counter_; }

  private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace tcilab
