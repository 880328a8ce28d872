#include "monocrn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace monocrn {

namespace {

BigInt lcm_big(const BigInt& a, const BigInt& b) {
    if (a == 0 || b == 0) return 0;
    return boost::multiprecision::abs(a / boost::multiprecision::gcd(a, b) * b);
}

// Row-reduces in place; returns pivot column of each pivot row.
std::vector<std::size_t> reduce_row_echelon(std::vector<RationalVector>& a, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
        std::size_t p = r;
        while (p < a.size() && a[p][c] == 0) ++p;
        if (p == a.size()) continue;
        std::swap(a[r], a[p]);
        const Rational inv = 1 / a[r][c];
        for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == r || a[i][c] == 0) continue;
            const Rational factor = a[i][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= factor * a[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) throw PreconditionError("RationalMatrix: dimensions must be positive");
}

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<long long>> rows)
    : RationalMatrix(rows.size(), rows.size() ? rows.begin()->size() : 0) {
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != cols_) throw PreconditionError("RationalMatrix: ragged initializer");
        std::size_t c = 0;
        for (long long x : row) (*this)(r, c++) = x;
        ++r;
    }
}

RationalMatrix RationalMatrix::from_integers(const Eigen::MatrixXi& m) {
    RationalMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = m(r, c);
    return out;
}

RationalMatrix RationalMatrix::transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

RationalVector RationalMatrix::multiply(const RationalVector& x) const {
    require_size(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(cols_),
                 "RationalMatrix::multiply");
    RationalVector y(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) y[r] += (*this)(r, c) * x[c];
    return y;
}

Mat RationalMatrix::to_double() const {
    Mat out(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                static_cast<double>((*this)(r, c));
    return out;
}

std::size_t rank(const RationalMatrix& m) {
    // Clear denominators row by row, then Bareiss on integers.
    std::vector<std::vector<BigInt>> a(m.rows(), std::vector<BigInt>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        BigInt scale = 1;
        for (std::size_t c = 0; c < m.cols(); ++c)
            scale = lcm_big(scale, boost::multiprecision::denominator(m(r, c)));
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const Rational x = m(r, c) * scale;
            a[r][c] = boost::multiprecision::numerator(x);
        }
    }

    BigInt prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && a[p][c] == 0) ++p;
        if (p == m.rows()) continue;
        std::swap(a[r], a[p]);
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            for (std::size_t j = c + 1; j < m.cols(); ++j)
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return r;
}

std::vector<RationalVector> right_kernel_basis(const RationalMatrix& m) {
    std::vector<RationalVector> a(m.rows(), RationalVector(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) a[r][c] = m(r, c);
    const auto pivots = reduce_row_echelon(a, m.cols());

    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;

    std::vector<RationalVector> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        RationalVector x(m.cols());
        x[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = -a[i][free];
        basis.push_back(std::move(x));
    }
    return basis;
}

std::vector<RationalVector> left_kernel_basis(const RationalMatrix& m) {
    return right_kernel_basis(m.transpose());
}

RationalVector primitive_integer(const RationalVector& v) {
    BigInt den = 1;
    for (const auto& x : v) den = lcm_big(den, boost::multiprecision::denominator(x));
    std::vector<BigInt> ints;
    ints.reserve(v.size());
    BigInt g = 0;
    for (const auto& x : v) {
        ints.push_back(boost::multiprecision::numerator(Rational(x * den)));
        g = boost::multiprecision::gcd(g, ints.back());
    }
    RationalVector out(v.size());
    if (g == 0) return out;
    g = boost::multiprecision::abs(g);
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rational(ints[i] / g);
    return out;
}

Vec to_double(const RationalVector& v) {
    Vec out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = static_cast<double>(v[i]);
    return out;
}

bool in_span(const std::vector<RationalVector>& basis, const RationalVector& target) {
    if (basis.empty()) {
        return std::all_of(target.begin(), target.end(), [](const Rational& x) { return x == 0; });
    }
    const std::size_t n = target.size();
    RationalMatrix with(basis.size() + 1, n);
    RationalMatrix without(basis.size(), n);
    for (std::size_t k = 0; k < basis.size(); ++k) {
        require_size(static_cast<Eigen::Index>(basis[k].size()), static_cast<Eigen::Index>(n), "in_span");
        for (std::size_t i = 0; i < n; ++i) with(k, i) = without(k, i) = basis[k][i];
    }
    for (std::size_t i = 0; i < n; ++i) with(basis.size(), i) = target[i];
    return rank(with) == rank(without);
}

std::optional<Vec> positive_kernel_unit_vector(const RationalMatrix& m) {
    const auto kernel = right_kernel_basis(m);
    if (kernel.size() != 1) return std::nullopt;
    RationalVector k = kernel.front();
    const bool all_pos = std::all_of(k.begin(), k.end(), [](const Rational& x) { return x > 0; });
    const bool all_neg = std::all_of(k.begin(), k.end(), [](const Rational& x) { return x < 0; });
    if (!all_pos && !all_neg) return std::nullopt;
    Vec v = to_double(primitive_integer(k));
    if (all_neg) v = -v;
    return v / v.norm();
}

Projector::Projector(const Vec& v) {
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw PreconditionError("Projector: direction must be nonzero");
    v_ = v / norm;
    matrix_ = Mat::Identity(v_.size(), v_.size()) - v_ * v_.transpose();
}

Vec Projector::apply(const Vec& x) const {
    require_size(x.size(), v_.size(), "Projector::apply");
    return x - v_.dot(x) * v_;
}

Vec project(const Projector& p, const Vec& x) { return p.apply(x); }

Mat orthonormal_complement(const Vec& v) {
    if (v.size() == 0 || !(v.norm() > 0.0)) throw PreconditionError("orthonormal_complement: zero direction");
    const Eigen::Index m = v.size();
    Eigen::HouseholderQR<Mat> qr(v / v.norm());
    Mat q = qr.householderQ() * Mat::Identity(m, m);
    return q.rightCols(m - 1);
}

Vec recover_projected_state(const RationalMatrix& gamma, const Vec& v, const Vec& y) {
    const auto n = static_cast<Eigen::Index>(gamma.rows());
    const auto m = static_cast<Eigen::Index>(gamma.cols());
    require_size(v.size(), m, "recover_projected_state: v");
    require_size(y.size(), n, "recover_projected_state: y");

    const Mat g = gamma.to_double();
    if (rank(gamma) + 1 != gamma.cols() || (g * v).norm() > 1e-12 * (1.0 + g.norm())) {
        throw PreconditionError("recover_projected_state: kernel of gamma is not span{v}");
    }
    const Vec unit = v / v.norm();

    Mat a(n + 1, m);
    a.topRows(n) = g;
    a.row(n) = unit.transpose();
    Vec b(n + 1);
    b.head(n) = y;
    b(n) = 0.0;

    const Vec z = a.colPivHouseholderQr().solve(b);
    const double residual = (g * z - y).norm();
    if (residual > 1e-9 * y.norm()) {
        throw PreconditionError("recover_projected_state: y is not in the image of gamma (residual " +
                                std::to_string(residual) + ")");
    }
    return z - unit.dot(z) * unit;
}

}  // namespace monocrn
