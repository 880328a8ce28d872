#pragma once

#include <cstdint>
#include <random>

#include "monocrn/types.hpp"

namespace testutil {

inline monocrn::Vec vec(std::initializer_list<double> xs) {
    monocrn::Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline monocrn::Vec random_vec(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
    monocrn::Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(rng, lo, hi);
    return v;
}

}  // namespace testutil
