#include "monocrn/vector_field.hpp"

#include <cmath>

#include "monocrn/linalg.hpp"

namespace monocrn {

Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h) {
    const Vec f0 = f(x);
    Mat jac(f0.size(), x.size());
    Vec xp = x;
    Vec xm = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double step = h * std::max(1.0, std::abs(x(i)));
        xp(i) = x(i) + step;
        xm(i) = x(i) - step;
        jac.col(i) = (f(xp) - f(xm)) / (2.0 * step);
        xp(i) = x(i);
        xm(i) = x(i);
    }
    return jac;
}

Mat VectorField::jacobian(const Vec& x) const {
    if (jac) return jac(x);
    return finite_difference_jacobian(eval, x);
}

Vec VectorField::directional_derivative(const Vec& x, const Vec& d) const {
    if (jac) return jac(x) * d;
    const double h = 1e-6 * std::max(1.0, x.lpNorm<Eigen::Infinity>());
    return (eval(x + h * d) - eval(x - h * d)) / (2.0 * h);
}

VectorField VectorField::negated() const {
    VectorField out = *this;
    out.eval = [f = eval](const Vec& x) -> Vec { return -f(x); };
    if (jac) out.jac = [j = jac](const Vec& x) -> Mat { return -j(x); };
    return out;
}

VectorField projected_field(const VectorField& field, const Vec& v) {
    require_size(v.size(), field.dimension, "projected_field");
    const Projector p(v);
    VectorField out = field;
    out.eval = [f = field.eval, p](const Vec& x) -> Vec { return p.apply(f(x)); };
    if (field.jac) {
        out.jac = [j = field.jac, p](const Vec& x) -> Mat { return p.matrix() * j(x); };
    }
    return out;
}

namespace fields {

VectorField linear(const Mat& a) {
    if (a.rows() != a.cols()) throw PreconditionError("fields::linear: matrix must be square");
    VectorField f;
    f.dimension = a.rows();
    f.eval = [a](const Vec& x) -> Vec { return a * x; };
    f.jac = [a](const Vec&) -> Mat { return a; };
    return f;
}

VectorField constant(const Vec& c) {
    VectorField f;
    f.dimension = c.size();
    f.eval = [c](const Vec&) -> Vec { return c; };
    f.jac = [n = c.size()](const Vec&) -> Mat { return Mat::Zero(n, n); };
    return f;
}

VectorField rotation() {
    Mat a(2, 2);
    a << 0.0, -1.0, 1.0, 0.0;
    return linear(a);
}

VectorField bistable_plane(double drift) {
    const double s = 1.0 / std::sqrt(2.0);
    Vec u(2), v(2);
    u << s, -s;
    v << s, s;
    VectorField f;
    f.dimension = 2;
    f.eval = [u, v, drift](const Vec& x) -> Vec {
        const double w = u.dot(x);
        return (w - w * w * w) * u + drift * v;
    };
    f.jac = [u](const Vec& x) -> Mat {
        const double w = u.dot(x);
        return (1.0 - 3.0 * w * w) * u * u.transpose();
    };
    return f;
}

}  // namespace fields

}  // namespace monocrn
