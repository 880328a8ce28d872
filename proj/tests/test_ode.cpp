#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "monocrn/builtin.hpp"
#include "monocrn/extent_system.hpp"
#include "monocrn/ode.hpp"
#include "monocrn/vector_field.hpp"
#include "test_util.hpp"

using namespace monocrn;
using testutil::vec;

namespace {

VectorField decay() { return fields::linear(-Mat::Identity(1, 1)); }

}  // namespace

TEST_CASE("exponential decay endpoint") {
    const Trajectory t = integrate(decay(), vec({1}), 1.0, {});
    CHECK(t.status() == TrajectoryStatus::completed);
    CHECK(t.t_end() == 1.0);
    CHECK(std::abs(t.back()(0) - std::exp(-1.0)) <= 1e-7);
}

TEST_CASE("zero field gives a constant trajectory without rejections") {
    const Vec c = vec({2, -1, 0.5});
    const Trajectory t = integrate(fields::constant(Vec::Zero(3)), c, 10.0, {});
    CHECK(t.status() == TrajectoryStatus::completed);
    CHECK(t.stats().rejected == 0);
    for (const auto& x : t.states()) CHECK(x == c);
}

TEST_CASE("rotation returns after one period") {
    const Trajectory t = integrate(fields::rotation(), vec({1, 0}), 2 * std::numbers::pi, {});
    CHECK((t.back() - vec({1, 0})).norm() <= 1e-6);
}

TEST_CASE("reverse integration") {
    const Trajectory t = integrate_reverse(decay(), vec({std::exp(-1.0)}), 1.0, {});
    CHECK(std::abs(t.back()(0) - 1.0) <= 1e-7);

    const Trajectory line = integrate_reverse(fields::constant(vec({1, 2})), vec({0, 0}), 3.0, {});
    CHECK((line.back() - vec({-3, -6})).norm() <= 1e-12);
    CHECK(line.times().back() == 3.0);
}

TEST_CASE("reverse-time futile cycle leaves the domain") {
    const ExtentSystem sys(builtin::futile_cycle(), builtin::futile_cycle_sigma());
    const Vec x0 = vec({0.3, 0.2, 0.1, 0.0});
    REQUIRE(sys.in_interior(x0));
    const Trajectory t = integrate_reverse(sys.field(), x0, 50.0, {});
    CHECK(t.status() == TrajectoryStatus::left_domain);
    CHECK(t.t_end() < 50.0);
    for (const auto& x : t.states()) CHECK(sys.in_domain(x));
}

TEST_CASE("horizon zero gives a single sample") {
    const Trajectory t = integrate(decay(), vec({1}), 0.0, {});
    CHECK(t.size() == 1);
    CHECK(t.back()(0) == 1.0);
    CHECK(t.status() == TrajectoryStatus::completed);
}

TEST_CASE("trajectory invariants") {
    const ExtentSystem sys(builtin::futile_cycle(), builtin::futile_cycle_sigma());
    const Trajectory t = integrate(sys.field(), Vec::Zero(4), 30.0, {});
    REQUIRE(t.size() > 2);
    for (std::size_t k = 1; k < t.size(); ++k) CHECK(t.times()[k] > t.times()[k - 1]);
    for (std::size_t k = 0; k < t.size(); ++k) {
        CHECK(t.at(t.times()[k]) == t.states()[k]);
        CHECK(sys.in_domain(t.states()[k]));
    }
    CHECK_THROWS_AS(t.at(31.0), PreconditionError);
    CHECK_THROWS_AS(t.at(-1.0), PreconditionError);
}

TEST_CASE("dense output accuracy is comparable to the step endpoints") {
    const VectorField f = decay();
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-6;
    cfg.abs_tol = 1e-9;
    const Trajectory t = integrate(f, vec({1}), 5.0, cfg);
    double endpoint = 0.0, dense = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k)
        endpoint = std::max(endpoint, std::abs(t.states()[k](0) - std::exp(-t.times()[k])));
    for (int i = 0; i <= 1000; ++i) {
        const double s = 5.0 * i / 1000.0;
        dense = std::max(dense, std::abs(t.at(s)(0) - std::exp(-s)));
    }
    CHECK(endpoint > 0.0);
    CHECK(dense <= 10 * endpoint);
}

TEST_CASE("fixed-step convergence order is five") {
    const VectorField f = decay();
    const double exact = std::exp(-1.0);
    double prev = 0.0;
    for (double h : {0.2, 0.1, 0.05}) {
        const Trajectory t = integrate(f, vec({1}), 1.0, fixed_step_config(h));
        REQUIRE(t.stats().rejected == 0);
        const double err = std::abs(t.back()(0) - exact);
        if (prev > 0.0) {
            const double ratio = prev / err;
            CHECK(ratio >= 16.0);
            CHECK(std::log2(ratio) == doctest::Approx(5.0).epsilon(0.1));
        }
        prev = err;
    }
}

TEST_CASE("tightening the tolerance reduces the error") {
    const VectorField f = decay();
    IntegratorConfig loose, tight;
    loose.rel_tol = 1e-6;
    tight.rel_tol = 1e-7;
    loose.abs_tol = tight.abs_tol = 1e-14;
    const double e1 = std::abs(integrate(f, vec({1}), 1.0, loose).back()(0) - std::exp(-1.0));
    const double e2 = std::abs(integrate(f, vec({1}), 1.0, tight).back()(0) - std::exp(-1.0));
    CHECK(e2 < e1);
}

TEST_CASE("bit-identical reruns") {
    const ExtentSystem sys(builtin::futile_cycle(), builtin::futile_cycle_sigma());
    const Trajectory a = integrate(sys.field(), Vec::Zero(4), 20.0, {});
    const Trajectory b = integrate(sys.field(), Vec::Zero(4), 20.0, {});
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a.times()[k] == b.times()[k]);
        CHECK(a.states()[k] == b.states()[k]);
    }
    std::ostringstream sa, sb;
    write_csv(sa, a);
    write_csv(sb, b);
    CHECK(sa.str() == sb.str());
}

TEST_CASE("domain guarding stops at the boundary") {
    VectorField f = fields::constant(vec({-1}));
    f.domain_test = [](const Vec& x) { return x(0) >= 0.0; };
    const Trajectory t = integrate(f, vec({1}), 5.0, {});
    CHECK(t.status() == TrajectoryStatus::left_domain);
    CHECK(t.t_end() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(t.back()(0) >= 0.0);
    CHECK(t.stats().domain_rejections > 0);
}

TEST_CASE("step failure on blow-up and on the step budget") {
    VectorField blow;
    blow.dimension = 1;
    blow.eval = [](const Vec& x) { return Vec::Constant(1, x(0) * x(0)); };
    const Trajectory t = integrate(blow, vec({1}), 2.0, {});  // solution 1/(1-t)
    CHECK(t.status() == TrajectoryStatus::step_failure);
    CHECK(t.t_end() == doctest::Approx(1.0).epsilon(1e-6));

    IntegratorConfig cfg;
    cfg.max_steps = 3;
    const Trajectory u = integrate(decay(), vec({1}), 100.0, cfg);
    CHECK(u.status() == TrajectoryStatus::step_failure);
}

TEST_CASE("integrate preconditions") {
    VectorField f = decay();
    f.domain_test = [](const Vec& x) { return x(0) >= 0.0; };
    CHECK_THROWS_AS(integrate(f, vec({-1}), 1.0, {}), PreconditionError);
    CHECK_THROWS_AS(integrate(f, vec({1}), -1.0, {}), PreconditionError);
    IntegratorConfig bad;
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(integrate(f, vec({1}), 1.0, bad), PreconditionError);
    CHECK_THROWS_AS(bad.validate(), PreconditionError);
}

TEST_CASE("stall stops integration") {
    IntegratorConfig cfg;
    cfg.stop_at_stall = true;
    cfg.stall_threshold = 1e-6;
    cfg.stall_window = 1.0;
    const Trajectory t = integrate(decay(), vec({1}), 100.0, cfg);
    CHECK(t.status() == TrajectoryStatus::stalled_at_equilibrium);
    CHECK(t.t_end() == doctest::Approx(std::log(1e6) + 1.0).epsilon(0.05));
}

TEST_CASE("detect_equilibrium") {
    IntegratorConfig cfg;
    cfg.stall_threshold = 1e-6;
    cfg.stall_window = 1.0;
    const VectorField f = decay();
    const Trajectory t = integrate(f, vec({1}), 30.0, cfg);
    const auto eq = detect_equilibrium(t, f, cfg);
    REQUIRE(eq.has_value());
    CHECK(eq->time == doctest::Approx(std::log(1e6)).epsilon(1e-6));
    CHECK(std::abs(eq->state(0)) < 1e-6);

    const VectorField c = fields::constant(vec({1}));
    CHECK_FALSE(detect_equilibrium(integrate(c, vec({0}), 10.0, cfg), c, cfg).has_value());
}

TEST_CASE("projected futile-cycle system stalls") {
    const ExtentSystem sys(builtin::futile_cycle(), builtin::futile_cycle_sigma());
    const VectorField pf = projected_field(sys.field(), *sys.translation_direction());
    IntegratorConfig cfg;
    cfg.stall_threshold = 1e-8;
    cfg.stall_window = 5.0;
    const Trajectory t = integrate(pf, Vec::Zero(4), 200.0, cfg);
    const auto eq = detect_equilibrium(t, pf, cfg);
    REQUIRE(eq.has_value());
    CHECK(pf.eval(eq->state).norm() <= 1e-8);
}

TEST_CASE("csv export") {
    std::ostringstream out;
    write_csv(out, {0.0, 0.5}, {vec({1, 2}), vec({0.1, 1.0 / 3.0})}, {"seed=1"});
    CHECK(out.str() == "# seed=1\nt,x1,x2\n0,1,2\n0.5,0.10000000000000001,0.33333333333333331\n");

    std::ostringstream named;
    write_csv(named, {0.0}, {vec({1, 2})}, {}, {"A", "B"});
    CHECK(named.str() == "t,A,B\n0,1,2\n");
    CHECK_THROWS_AS(write_csv(named, {0.0}, {vec({1, 2})}, {}, {"A"}), PreconditionError);
}
