#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "monocrn/builtin.hpp"
#include "monocrn/linalg.hpp"
#include "test_util.hpp"

using namespace monocrn;
using testutil::vec;

namespace {

Rational det_laplace(const std::vector<std::vector<Rational>>& a) {
    const std::size_t n = a.size();
    if (n == 1) return a[0][0];
    Rational total = 0;
    for (std::size_t c = 0; c < n; ++c) {
        if (a[0][c] == 0) continue;
        std::vector<std::vector<Rational>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<Rational> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != c) row.push_back(a[r][k]);
            minor.push_back(row);
        }
        const Rational term = a[0][c] * det_laplace(minor);
        total += (c % 2 == 0) ? term : -term;
    }
    return total;
}

// All k-subsets of {0..n-1}.
void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(k), true);
    do {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < n; ++i)
            if (pick[i]) s.push_back(i);
        out.push_back(s);
    } while (std::prev_permutation(pick.begin(), pick.end()));
}

// Rank as the largest order of a nonzero minor.
std::size_t rank_by_minors(const RationalMatrix& m) {
    for (std::size_t k = std::min(m.rows(), m.cols()); k > 0; --k) {
        std::vector<std::vector<std::size_t>> rs, cs;
        subsets(m.rows(), k, rs);
        subsets(m.cols(), k, cs);
        for (const auto& r : rs) {
            for (const auto& c : cs) {
                std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k));
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j) a[i][j] = m(r[i], c[j]);
                if (det_laplace(a) != 0) return k;
            }
        }
    }
    return 0;
}

RationalMatrix random_low_rank(std::mt19937_64& rng, std::size_t rows, std::size_t cols, std::size_t inner) {
    std::uniform_int_distribution<int> d(-3, 3);
    RationalMatrix a(rows, inner), b(inner, cols), out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < inner; ++j) a(i, j) = d(rng);
    for (std::size_t i = 0; i < inner; ++i)
        for (std::size_t j = 0; j < cols; ++j) b(i, j) = d(rng);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            Rational s = 0;
            for (std::size_t k = 0; k < inner; ++k) s += a(i, k) * b(k, j);
            out(i, j) = s;
        }
    return out;
}

bool is_zero(const RationalVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

const RationalMatrix kFutileGamma{{-1, 0, 0, 1}, {0, 1, -1, 0}, {-1, 1, 0, 0},
                                  {0, 0, -1, 1}, {1, -1, 0, 0}, {0, 0, 1, -1}};

}  // namespace

TEST_CASE("rank of small matrices") {
    CHECK(rank(kFutileGamma) == 3);
    CHECK(rank(RationalMatrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) == 3);
    CHECK(rank(RationalMatrix(3, 4)) == 0);
    CHECK(rank(RationalMatrix{{1, 2}, {2, 4}}) == 1);
    CHECK(rank(builtin::futile_cycle().gamma_exact()) == 3);
}

TEST_CASE("rank agrees with the minor oracle and rank-nullity holds") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 4, inner = 1 + rng() % 4;
        const RationalMatrix m = random_low_rank(rng, rows, cols, inner);
        const std::size_t r = rank(m);
        CHECK(r == rank_by_minors(m));
        const auto kernel = right_kernel_basis(m);
        CHECK(r + kernel.size() == cols);
        for (const auto& k : kernel) CHECK(is_zero(m.multiply(k)));
        const auto left = left_kernel_basis(m);
        CHECK(r + left.size() == rows);
        for (const auto& c : left) CHECK(is_zero(m.transpose().multiply(c)));
        if (!kernel.empty()) {
            RationalMatrix basis(kernel.size(), cols);
            for (std::size_t i = 0; i < kernel.size(); ++i)
                for (std::size_t j = 0; j < cols; ++j) basis(i, j) = kernel[i][j];
            CHECK(rank(basis) == kernel.size());
        }
    }
}

TEST_CASE("right kernel examples") {
    const auto k = right_kernel_basis(kFutileGamma);
    REQUIRE(k.size() == 1);
    CHECK(primitive_integer(k[0]) == RationalVector{1, 1, 1, 1});

    CHECK(right_kernel_basis(RationalMatrix{{1, 0}, {0, 1}}).empty());

    const auto k2 = right_kernel_basis(RationalMatrix{{1, 1}});
    REQUIRE(k2.size() == 1);
    const auto p = primitive_integer(k2[0]);
    CHECK(p[0] == -p[1]);
    CHECK(p[0] != 0);
}

TEST_CASE("positive kernel unit vector") {
    const auto v = positive_kernel_unit_vector(kFutileGamma);
    REQUIRE(v.has_value());
    CHECK((*v - Vec::Constant(4, 0.5)).norm() < 1e-15);
    CHECK_FALSE(positive_kernel_unit_vector(RationalMatrix{{1, 1}}).has_value());
    CHECK_FALSE(positive_kernel_unit_vector(RationalMatrix{{1, -1, 0}}).has_value());  // 2-dim kernel
    CHECK_FALSE(positive_kernel_unit_vector(RationalMatrix{{1, 0}, {0, 1}}).has_value());
}

TEST_CASE("primitive integer scaling") {
    CHECK(primitive_integer({Rational(1, 2), Rational(-3, 4), 0}) == RationalVector{2, -3, 0});
    CHECK(primitive_integer({0, 0}) == RationalVector{0, 0});
}

TEST_CASE("in_span") {
    const RationalVector a{1, 0, 1}, b{0, 1, 1};
    CHECK(in_span({a, b}, {1, 1, 2}));
    CHECK_FALSE(in_span({a, b}, {1, 1, 1}));
}

TEST_CASE("projector examples") {
    const Projector p(Vec::Constant(4, 0.5));
    CHECK(p.apply(Vec::Constant(4, 0.5)).norm() < 1e-15);
    const Vec perp = vec({1, -1, 2, -2});
    CHECK((p.apply(perp) - perp).norm() < 1e-15);
    CHECK((project(p, vec({1, 0, 0, 0})) - vec({0.75, -0.25, -0.25, -0.25})).norm() < 1e-15);
    CHECK_THROWS_AS(p.apply(vec({1, 2})), PreconditionError);
    CHECK_THROWS_AS(Projector(Vec::Zero(3)), PreconditionError);

    const Projector q(vec({2, 0}));
    CHECK(q.v().norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("projector is a symmetric idempotent annihilating v") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<Eigen::Index>(1 + rng() % 6);
        const Vec v = testutil::random_vec(rng, n, -1, 1);
        if (v.norm() < 1e-3) continue;
        const Projector p(v);
        const Mat& m = p.matrix();
        CHECK((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((m * m - m).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((m * p.v()).norm() <= 1e-12);
        const Vec x = testutil::random_vec(rng, n, -5, 5);
        CHECK(std::abs(p.apply(x).dot(p.v())) <= 1e-12 * std::max(1.0, x.norm()));
    }
}

TEST_CASE("gamma times projection equals gamma") {
    std::mt19937_64 rng(3);
    const Mat g = kFutileGamma.to_double();
    const Projector p(Vec::Constant(4, 0.5));
    for (int trial = 0; trial < 100; ++trial) {
        const Vec x = testutil::random_vec(rng, 4, -3, 3);
        CHECK((g * p.apply(x) - g * x).norm() <= 1e-12 * std::max(1.0, (g * x).norm()));
    }
    // Exact version: v'x is rational for v = (1,1,1,1)/4-scaled kernel direction.
    const RationalVector x{3, Rational(1, 2), -2, 5};
    Rational mean = 0;
    for (const auto& q : x) mean += q / 4;
    RationalVector px = x;
    for (auto& q : px) q -= mean;
    CHECK(kFutileGamma.multiply(px) == kFutileGamma.multiply(x));
}

TEST_CASE("orthonormal complement") {
    const Vec v = Vec::Constant(4, 0.5);
    const Mat b = orthonormal_complement(v);
    REQUIRE(b.rows() == 4);
    REQUIRE(b.cols() == 3);
    CHECK((b.transpose() * b - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((b.transpose() * v).norm() < 1e-14);
}

TEST_CASE("recover_projected_state") {
    const Vec v = Vec::Constant(4, 0.5);
    const Mat g = kFutileGamma.to_double();
    const Projector p(v);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec x = testutil::random_vec(rng, 4, -2, 2);
        const Vec z = recover_projected_state(kFutileGamma, v, g * x);
        CHECK((z - p.apply(x)).norm() < 1e-12);
    }
    CHECK(recover_projected_state(kFutileGamma, v, Vec::Zero(6)).norm() < 1e-15);

    // (1,1,0,0,1,1)'y != 0, so y is not in the image.
    CHECK_THROWS_AS(recover_projected_state(kFutileGamma, v, vec({1, 0, 0, 0, 0, 0})), PreconditionError);
    // Kernel is not span{v}.
    CHECK_THROWS_AS(recover_projected_state(kFutileGamma, vec({1, 0, 0, 0}), Vec::Zero(6)), PreconditionError);
}

TEST_CASE("rational matrix basics") {
    const RationalMatrix a{{1, 2}, {3, 4}};
    CHECK(a.transpose() == RationalMatrix{{1, 3}, {2, 4}});
    CHECK(a.multiply({1, 1}) == RationalVector{3, 7});
    CHECK(a.to_double()(1, 0) == 3.0);
    CHECK_THROWS_AS(RationalMatrix(0, 2), PreconditionError);
    CHECK_THROWS_AS(a.multiply({1}), PreconditionError);
}
