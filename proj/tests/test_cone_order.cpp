#include <doctest.h>

#include <cmath>
#include <random>

#include "monocrn/cone_order.hpp"
#include "test_util.hpp"

using namespace monocrn;
using testutil::vec;

TEST_CASE("comparison examples") {
    const OrthantOrder o = OrthantOrder::standard(vec({1, 1}));
    const Vec zero = vec({0, 0});
    CHECK(o.leq(zero, zero));
    CHECK_FALSE(o.lt(zero, zero));
    CHECK_FALSE(o.ll(zero, zero));

    CHECK(o.leq(zero, vec({1, 2})));
    CHECK(o.lt(zero, vec({1, 2})));
    CHECK(o.ll(zero, vec({1, 2})));

    CHECK(o.leq(zero, vec({1, 0})));
    CHECK(o.lt(zero, vec({1, 0})));
    CHECK_FALSE(o.ll(zero, vec({1, 0})));

    CHECK_FALSE(o.leq(vec({1, 0}), zero));
    CHECK_THROWS_AS(o.leq(zero, vec({1, 2, 3})), PreconditionError);
}

TEST_CASE("slack and margin") {
    const OrthantOrder o = OrthantOrder::standard(vec({1, 1}));
    CHECK(o.leq(vec({0, 0}), vec({-0.5e-9, 1})));
    CHECK_FALSE(o.leq(vec({0, 0}), vec({-2e-9, 1})));
    CHECK_FALSE(o.ll(vec({0, 0}), vec({0.5e-9, 1})));
    CHECK(o.ll(vec({0, 0}), vec({2e-9, 1})));
}

TEST_CASE("mixed sign orthant") {
    const OrthantOrder o({1, -1}, vec({1, -1}));
    CHECK(o.leq(vec({0, 0}), vec({1, -1})));
    CHECK_FALSE(o.leq(vec({0, 0}), vec({1, 1})));
    CHECK(o.gauge(vec({1, -1}) * (1 / std::sqrt(2.0))) == doctest::Approx(1.0));
    CHECK_THROWS_AS(OrthantOrder({1, 1}, vec({1, -1})), PreconditionError);
    CHECK_THROWS_AS(OrthantOrder({1, 2}, vec({1, 1})), PreconditionError);
}

TEST_CASE("v is normalized") {
    const OrthantOrder o = OrthantOrder::standard(vec({0.25, 0.25, 0.25, 0.25}));
    CHECK(o.v().norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(o.v()(0) == doctest::Approx(0.5));
}

TEST_CASE("gauge examples") {
    const OrthantOrder o = OrthantOrder::standard(vec({1, 1, 1}));
    CHECK(o.gauge(Vec::Zero(3)) == 0.0);
    for (double lambda : {-3.0, 0.0, 5.0}) CHECK(o.gauge(lambda * o.v()) == doctest::Approx(lambda).epsilon(1e-14));
    CHECK(o.gauge(vec({1, 2, 3})) == doctest::Approx(3 * std::sqrt(3.0)).epsilon(1e-14));
    CHECK(v_gauge(o, vec({1, 2, 3})) == o.gauge(vec({1, 2, 3})));
}

TEST_CASE("Lipschitz bound examples") {
    CHECK(OrthantOrder::standard(Vec::Constant(4, 0.5)).lipschitz_bound() == doctest::Approx(2.0));
    CHECK(lipschitz_bound(OrthantOrder::standard(vec({1}))) == doctest::Approx(1.0));
}

TEST_CASE("gauge is Lipschitz with the reported constant") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const auto n = static_cast<Eigen::Index>(1 + rng() % 5);
        const OrthantOrder o = OrthantOrder::standard(testutil::random_vec(rng, n, 0.05, 1));
        const double k = o.lipschitz_bound();
        for (int i = 0; i < 100; ++i) {
            const Vec x = testutil::random_vec(rng, n, -3, 3), y = testutil::random_vec(rng, n, -3, 3);
            CHECK(std::abs(o.gauge(x) - o.gauge(y)) <= k * (x - y).norm() * (1 + 1e-12));
        }
    }
}

TEST_CASE("order axioms on random triples") {
    std::mt19937_64 rng(37);
    const OrthantOrder o({1, -1, 1}, vec({1, -2, 0.5}));
    for (int trial = 0; trial < 1000; ++trial) {
        const Vec x = testutil::random_vec(rng, 3, -1, 1);
        Vec y = x, z = x;
        for (Eigen::Index i = 0; i < 3; ++i) {
            const double s = o.signs()[static_cast<std::size_t>(i)];
            y(i) += s * testutil::uniform(rng, 0, 1);
            z(i) = y(i) + s * testutil::uniform(rng, 0, 1);
        }
        CHECK(o.leq(x, x));
        CHECK(o.leq(x, y));
        CHECK(o.leq(y, z));
        CHECK(o.leq(x, z));
        if (o.leq(x, y) && o.leq(y, x)) CHECK((x - y).cwiseAbs().maxCoeff() <= 1e-9);
        const Vec w = testutil::random_vec(rng, 3, -1, 1);
        if (o.leq(x, w) && o.leq(w, x)) CHECK((x - w).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("gauge shift, feasibility and minimality") {
    std::mt19937_64 rng(41);
    const OrthantOrder o({1, 1, -1, 1}, vec({0.3, 1, -0.7, 0.2}));
    for (int trial = 0; trial < 500; ++trial) {
        const Vec x = testutil::random_vec(rng, 4, -5, 5);
        const double lambda = testutil::uniform(rng, 0, 10);
        const double vx = o.gauge(x);
        CHECK(std::abs(o.gauge(x + lambda * o.v()) - (vx + lambda)) <= 1e-12 * (1 + std::abs(vx) + lambda));
        CHECK(o.leq(x, vx * o.v()));
        const double alpha = vx + testutil::uniform(rng, 1e-6, 1);
        if (o.ll(x, alpha * o.v())) CHECK(vx < alpha);
        CHECK_FALSE(o.ll(x, (vx - 1e-6) * o.v()));
    }
}
