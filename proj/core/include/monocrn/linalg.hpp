#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "monocrn/types.hpp"

namespace monocrn {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;
using RationalVector = std::vector<Rational>;

/// Dense matrix of exact rationals, row-major. Used for stoichiometry
/// matrices, where rank decisions must not depend on a floating threshold.
class RationalMatrix {
public:
    RationalMatrix(std::size_t rows, std::size_t cols);
    RationalMatrix(std::initializer_list<std::initializer_list<long long>> rows);

    static RationalMatrix from_integers(const Eigen::MatrixXi& m);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    RationalMatrix transpose() const;
    RationalVector multiply(const RationalVector& x) const;
    Mat to_double() const;

    friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Rational> data_;
};

/// Exact rank via fraction-free (Bareiss) elimination.
std::size_t rank(const RationalMatrix& m);

/// Basis of {x : Mx = 0}; one vector per free column of the reduced row
/// echelon form, with a 1 in that free position. Size is cols - rank.
std::vector<RationalVector> right_kernel_basis(const RationalMatrix& m);

/// Basis of {c : c'M = 0}.
std::vector<RationalVector> left_kernel_basis(const RationalMatrix& m);

/// When the right kernel is one-dimensional and spanned by a strictly
/// positive vector, that vector scaled to unit Euclidean norm.
std::optional<Vec> positive_kernel_unit_vector(const RationalMatrix& m);

/// Scales a rational vector to coprime integers (sign preserved).
RationalVector primitive_integer(const RationalVector& v);

Vec to_double(const RationalVector& v);

/// Whether `target` lies in the rational span of `basis`.
bool in_span(const std::vector<RationalVector>& basis, const RationalVector& target);

/// Orthogonal projector x -> x - (v'x)v onto the complement of a direction.
class Projector {
public:
    /// `v` is renormalized to unit length; throws on a zero vector.
    explicit Projector(const Vec& v);

    const Vec& v() const noexcept { return v_; }
    const Mat& matrix() const noexcept { return matrix_; }
    Eigen::Index dimension() const noexcept { return v_.size(); }

    Vec apply(const Vec& x) const;

private:
    Vec v_;
    Mat matrix_;
};

Vec project(const Projector& p, const Vec& x);

/// Columns form an orthonormal basis of the orthogonal complement of `v`.
Mat orthonormal_complement(const Vec& v);

/// Inverts the restriction of gamma to v-perp: returns the unique z with
/// z'v = 0 and gamma*z = y. Requires ker(gamma) = span{v} and y in the image
/// of gamma (least-squares residual at most 1e-9*|y|).
Vec recover_projected_state(const RationalMatrix& gamma, const Vec& v, const Vec& y);

}  // namespace monocrn
