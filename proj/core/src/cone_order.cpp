#include "monocrn/cone_order.hpp"

#include <cmath>
#include <limits>

namespace monocrn {

OrthantOrder::OrthantOrder(std::vector<int> signs, const Vec& v) : signs_(std::move(signs)) {
    require_size(v.size(), static_cast<Eigen::Index>(signs_.size()), "OrthantOrder");
    if (signs_.empty()) throw PreconditionError("OrthantOrder: dimension must be positive");
    for (std::size_t i = 0; i < signs_.size(); ++i) {
        if (signs_[i] != 1 && signs_[i] != -1) throw PreconditionError("OrthantOrder: signs must be +1 or -1");
        if (!(signs_[i] * v(static_cast<Eigen::Index>(i)) > 0.0))
            throw PreconditionError("OrthantOrder: v must lie in the interior of the cone");
    }
    v_ = v / v.norm();
}

OrthantOrder OrthantOrder::standard(const Vec& v) {
    return OrthantOrder(std::vector<int>(static_cast<std::size_t>(v.size()), 1), v);
}

double OrthantOrder::min_signed_gap(const Vec& x, const Vec& y) const {
    require_size(x.size(), dimension(), "OrthantOrder: x");
    require_size(y.size(), dimension(), "OrthantOrder: y");
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < dimension(); ++i)
        gap = std::min(gap, signs_[static_cast<std::size_t>(i)] * (y(i) - x(i)));
    return gap;
}

bool OrthantOrder::leq(const Vec& x, const Vec& y) const { return min_signed_gap(x, y) >= -kOrderSlack; }

bool OrthantOrder::lt(const Vec& x, const Vec& y) const { return leq(x, y) && x != y; }

bool OrthantOrder::ll(const Vec& x, const Vec& y) const { return min_signed_gap(x, y) > kOrderMargin; }

double OrthantOrder::gauge(const Vec& x) const {
    require_size(x.size(), dimension(), "OrthantOrder::gauge");
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < dimension(); ++i) {
        const double s = signs_[static_cast<std::size_t>(i)];
        best = std::max(best, (s * x(i)) / (s * v_(i)));
    }
    return best;
}

double OrthantOrder::lipschitz_bound() const {
    double smallest = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < dimension(); ++i)
        smallest = std::min(smallest, signs_[static_cast<std::size_t>(i)] * v_(i));
    return 1.0 / smallest;
}

}  // namespace monocrn
