// Copyright (c) 2026 the ulrn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace ulrn {

/// xoshiro256++ seeded through splitmix64.
///
/// Same seed gives the same stream on every platform; normal deviates come
/// from Box-Muller so no platform normal_distribution is involved.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    /// Uniform in [0, 1), 53-bit resolution.
    double next_unit();
    /// Standard normal via Box-Muller; the paired deviate is cached.
    double next_normal();
    /// Uniform in [lo, hi).
    double next_uniform(double lo, double hi);
    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n);

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::array<std::uint64_t, 4> s_{};
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Deterministically derives an independent stream seed, e.g. for shadow
/// model k or sweep worker k.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

} // namespace ulrn
