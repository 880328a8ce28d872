#pragma once

#include <vector>

#include "monocrn/types.hpp"

namespace monocrn {

/// Slack for the weak relation and margin for the interior relation.
inline constexpr double kOrderSlack = 1e-9;
inline constexpr double kOrderMargin = 1e-9;

/// Partial order induced by an orthant cone K = {x : signs_i * x_i >= 0},
/// together with a direction v in int(K), renormalized to unit length.
class OrthantOrder {
public:
    OrthantOrder(std::vector<int> signs, const Vec& v);

    /// The main orthant (all signs +1).
    static OrthantOrder standard(const Vec& v);

    Eigen::Index dimension() const noexcept { return v_.size(); }
    const std::vector<int>& signs() const noexcept { return signs_; }
    const Vec& v() const noexcept { return v_; }

    /// x <= y: y - x in K, up to kOrderSlack.
    bool leq(const Vec& x, const Vec& y) const;
    /// x < y: x <= y and x != y (exact inequality).
    bool lt(const Vec& x, const Vec& y) const;
    /// x << y: y - x in int(K), with margin kOrderMargin.
    bool ll(const Vec& x, const Vec& y) const;

    /// min_i signs_i * (y_i - x_i); nonnegative iff y - x in K.
    double min_signed_gap(const Vec& x, const Vec& y) const;

    /// V(x) = inf{a : x <= a v} = max_i signs_i x_i / (signs_i v_i).
    double gauge(const Vec& x) const;

    /// k = 1 / min_i signs_i v_i, so |V(x) - V(y)| <= k |x - y|.
    double lipschitz_bound() const;

private:
    std::vector<int> signs_;
    Vec v_;
};

inline double v_gauge(const OrthantOrder& o, const Vec& x) { return o.gauge(x); }
inline double lipschitz_bound(const OrthantOrder& o) { return o.lipschitz_bound(); }

}  // namespace monocrn
