#pragma once

#include <functional>

#include "monocrn/types.hpp"

namespace monocrn {

/// An autonomous vector field x' = f(x) on a closed state space X.
///
/// `jac` is optional; when absent, derivative-based checks fall back to
/// central differences. `domain_test` defaults to "everywhere". `clamp`, if
/// set, is applied to accepted integrator states (used to snap rounding-level
/// negatives onto the orthant boundary).
struct VectorField {
    Eigen::Index dimension = 0;
    std::function<Vec(const Vec&)> eval;
    std::function<Mat(const Vec&)> jac;
    std::function<bool(const Vec&)> domain_test;
    std::function<void(Vec&)> clamp;

    Vec operator()(const Vec& x) const { return eval(x); }
    bool in_domain(const Vec& x) const { return !domain_test || domain_test(x); }
    bool has_jacobian() const { return static_cast<bool>(jac); }

    /// Analytic Jacobian when available, else central differences.
    Mat jacobian(const Vec& x) const;

    /// J(x) d, analytic when available, else a central directional difference.
    Vec directional_derivative(const Vec& x, const Vec& d) const;

    /// The time-reversed field x' = -f(x) on the same domain.
    VectorField negated() const;
};

/// Central-difference Jacobian with per-coordinate step h * max(1, |x_i|).
Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h = 1e-6);

/// Projected field x' = (I - vv')f(x), for f translation-invariant along v.
/// The domain is inherited unchanged: when f and X are invariant under
/// translation along v, x + lambda v in X does not depend on lambda.
VectorField projected_field(const VectorField& field, const Vec& v);

/// Synthetic fields used as positive and negative controls.
namespace fields {
VectorField linear(const Mat& a);
VectorField constant(const Vec& c);
/// x' = (-x2, x1): not monotone for any orthant order.
VectorField rotation();
/// Translation-invariant along v = (1,1)/sqrt(2); the coordinate w = u'x,
/// u = (1,-1)/sqrt(2), obeys w' = w - w^3 (two stable projected equilibria
/// at w = +-1), plus a constant drift `drift` along v.
VectorField bistable_plane(double drift = 0.5);
}  // namespace fields

}  // namespace monocrn
