#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "monocrn/types.hpp"

namespace monocrn {

using Rng = std::mt19937_64;

/// Axis-aligned box around `center` intersected with an acceptance predicate.
/// Points are drawn uniformly in the box, passed through `transform` when
/// set, and rejection-sampled.
struct SamplingRegion {
    Vec center;
    double half_width = 1.0;
    std::function<bool(const Vec&)> accept;
    std::function<Vec(const Vec&)> transform;
    std::size_t max_attempts = 200000;

    /// Throws NumericalError when no point is accepted within max_attempts.
    Vec draw(Rng& rng) const;
    bool contains(const Vec& x) const { return !accept || accept(x); }
};

/// Ordered pair xi1 >= xi2 (when `ordered`) drawn for a flow comparison.
struct PairSample {
    Vec xi1;
    Vec xi2;
    bool ordered = false;
    std::uint64_t seed = 0;
    std::size_t index = 0;
};

/// Options for drawing pairs. With an order, xi1 = xi2 + delta where delta is
/// a random nonnegative vector (in the cone's sign pattern) of size up to
/// `delta_scale`, with each coordinate zeroed with probability `zero_prob`
/// (at least one kept); rejection-sampled until both points are accepted.
struct PairSamplerOptions {
    double delta_scale = 0.2;
    double zero_prob = 0.25;
    /// Fraction of pairs generated as xi1 = xi2 + lambda v (lambda in [-1, 1]).
    double translate_fraction = 0.0;
};

std::vector<PairSample> draw_ordered_pairs(const SamplingRegion& region, const std::vector<int>& signs,
                                           std::size_t count, std::uint64_t seed,
                                           const PairSamplerOptions& opts = {});

/// Independent pairs; `translate_fraction` of them are xi1 = xi2 + lambda v.
std::vector<PairSample> draw_free_pairs(const SamplingRegion& region, const Vec& v, std::size_t count,
                                        std::uint64_t seed, const PairSamplerOptions& opts = {});

}  // namespace monocrn
