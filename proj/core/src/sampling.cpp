#include "monocrn/sampling.hpp"

#include <cmath>

namespace monocrn {

namespace {

// Uniform in [0, 1) from the top 53 bits; identical on every platform.
double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

}  // namespace

Vec SamplingRegion::draw(Rng& rng) const {
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        Vec x(center.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = center(i) + uniform(rng, -half_width, half_width);
        if (transform) x = transform(x);
        if (contains(x)) return x;
    }
    throw NumericalError("SamplingRegion: no admissible point found in " + std::to_string(max_attempts) +
                         " attempts");
}

std::vector<PairSample> draw_ordered_pairs(const SamplingRegion& region, const std::vector<int>& signs,
                                           std::size_t count, std::uint64_t seed,
                                           const PairSamplerOptions& opts) {
    require_size(static_cast<Eigen::Index>(signs.size()), region.center.size(), "draw_ordered_pairs");
    Rng rng(seed);
    std::vector<PairSample> out;
    out.reserve(count);
    const auto d = region.center.size();
    for (std::size_t k = 0; k < count; ++k) {
        bool done = false;
        for (std::size_t attempt = 0; attempt < region.max_attempts && !done; ++attempt) {
            const Vec xi2 = region.draw(rng);
            Vec delta(d);
            bool any = false;
            for (Eigen::Index i = 0; i < d; ++i) {
                const bool zero = uniform01(rng) < opts.zero_prob;
                delta(i) = zero ? 0.0 : uniform(rng, 0.1, 1.0);
                any = any || !zero;
            }
            if (!any) delta(static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(d))) = uniform(rng, 0.1, 1.0);
            const double scale = uniform(rng, 0.1, 1.0) * opts.delta_scale;
            for (Eigen::Index i = 0; i < d; ++i) delta(i) *= scale * signs[static_cast<std::size_t>(i)];
            const Vec xi1 = xi2 + delta;
            if (!region.contains(xi1)) continue;
            out.push_back({xi1, xi2, true, seed, k});
            done = true;
        }
        if (!done) throw NumericalError("draw_ordered_pairs: could not place an ordered pair in the region");
    }
    return out;
}

std::vector<PairSample> draw_free_pairs(const SamplingRegion& region, const Vec& v, std::size_t count,
                                        std::uint64_t seed, const PairSamplerOptions& opts) {
    require_size(v.size(), region.center.size(), "draw_free_pairs");
    Rng rng(seed);
    const auto n_translate = static_cast<std::size_t>(std::llround(opts.translate_fraction * static_cast<double>(count)));
    std::vector<PairSample> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        if (k + n_translate >= count) {
            const Vec xi2 = region.draw(rng);
            double lambda = uniform(rng, 0.1, 1.0);
            if (uniform01(rng) < 0.5) lambda = -lambda;
            const Vec xi1 = xi2 + lambda * v.normalized();
            out.push_back({xi1, xi2, false, seed, k});
        } else {
            const Vec xi1 = region.draw(rng);
            const Vec xi2 = region.draw(rng);
            out.push_back({xi1, xi2, false, seed, k});
        }
    }
    return out;
}

}  // namespace monocrn
