#include <doctest.h>

#include <cmath>
#include <random>

#include "monocrn/builtin.hpp"
#include "monocrn/convergence_lab.hpp"
#include "test_util.hpp"

using namespace monocrn;
using testutil::vec;

namespace {

ExtentSystem futile() { return ExtentSystem(builtin::futile_cycle(), builtin::futile_cycle_sigma()); }

OrthantOrder futile_order() { return OrthantOrder::standard(Vec::Constant(4, 0.5)); }

}  // namespace

TEST_CASE("pair field integrates both halves") {
    const VectorField f = fields::linear(-Mat::Identity(1, 1));
    const PairTrajectory p = integrate_pair(f, vec({1}), vec({2}), 1.0, {});
    REQUIRE(p.first.size() == p.joint.size());
    CHECK(std::abs(p.first.back()(0) - std::exp(-1.0)) <= 1e-7);
    CHECK(std::abs(p.second.back()(0) - 2 * std::exp(-1.0)) <= 1e-7);
    CHECK(pair_field(f).dimension == 2);
}

TEST_CASE("order preservation on the futile cycle") {
    const ExtentSystem sys = futile();
    const auto rep =
        verify_order_preservation(sys.field(), futile_order(), sys.sampling_region(true), 30, 20.0, {}, 42);
    CHECK(rep.verdict);
    CHECK(rep.n_samples == 30);
    CHECK(rep.witnesses.empty());
    CHECK(rep.metrics.at("min_weak_gap") >= -kOrderSlack);
}

TEST_CASE("order preservation fails for the rotation") {
    SamplingRegion region;
    region.center = Vec::Zero(2);
    const auto rep = verify_order_preservation(fields::rotation(), OrthantOrder::standard(builtin::rotation_v()),
                                               region, 20, 5.0, {}, 42);
    CHECK_FALSE(rep.verdict);
    CHECK_FALSE(rep.witnesses.empty());
}

TEST_CASE("identical pair keeps zero gap") {
    const ExtentSystem sys = futile();
    const Vec x = vec({0.2, 0.1, 0.1, 0.0});
    PairSample p{x, x, false, 0, 0};
    const auto rep = verify_order_preservation(sys.field(), futile_order(), {p}, 10.0, {});
    CHECK(rep.verdict);
    CHECK(rep.metrics.at("min_weak_gap") == 0.0);
}

TEST_CASE("gauge of the difference decreases") {
    const ExtentSystem sys = futile();
    const OrthantOrder o = futile_order();
    PairSamplerOptions popts;
    popts.translate_fraction = 0.2;
    const auto pairs = draw_free_pairs(sys.sampling_region(true), o.v(), 20, 7, popts);
    const auto rep = verify_v_gauge_decrease(sys.field(), o, pairs, 20.0, {});
    CHECK(rep.verdict);
    CHECK(rep.metrics.at("pairs_along_v") >= 1.0);
    CHECK(rep.metrics.at("max_constant_deviation") <= 1e-9);
}

TEST_CASE("gauge semigroup property along a pair") {
    // V is nonincreasing, so V(phi_s) >= V(phi_t) for s <= t at any stored times.
    const ExtentSystem sys = futile();
    const OrthantOrder o = futile_order();
    Rng rng(3);
    const SamplingRegion region = sys.sampling_region(true);
    const Vec a = region.draw(rng), b = region.draw(rng);
    const PairTrajectory p = integrate_pair(sys.field(), a, b, 20.0, {});
    double prev = o.gauge(p.first.front() - p.second.front());
    for (std::size_t k = 1; k < p.first.size(); ++k) {
        const double cur = o.gauge(p.first[k] - p.second[k]);
        CHECK(cur <= prev + 1e-7);
        prev = std::min(prev, cur);
    }
}

TEST_CASE("translation flow") {
    const ExtentSystem sys = futile();
    const Vec v = *sys.translation_direction();
    const auto zero = verify_translation_flow(sys.field(), v, {{vec({0.1, 0.1, 0.1, 0.0}), 0.0}}, 10.0, {});
    CHECK(zero.verdict);
    CHECK(zero.metrics.at("max_discrepancy") == 0.0);

    const auto rep = verify_translation_flow(sys.field(), v, sys.sampling_region(true), 10, 10.0, {}, 42);
    CHECK(rep.verdict);

    const auto bad = verify_translation_flow(fields::linear(-Mat::Identity(2, 2)), vec({1, 0}),
                                             {{vec({0, 0}), 1.0}}, 1.0, {});
    CHECK_FALSE(bad.verdict);
}

TEST_CASE("boundedness heuristic") {
    const Vec v = vec({1, 0});
    IntegratorConfig fine;
    fine.max_step = 0.1;
    const auto drift = integrate(fields::constant(vec({1, 2})), vec({0, 0}), 10.0, fine);
    CHECK_FALSE(bounded_modulo_v(drift, v).bounded);
    CHECK(bounded_modulo_v(drift, v).trend_slope == doctest::Approx(2.0).epsilon(1e-6));

    const auto along = integrate(fields::constant(vec({1, 0})), vec({0, 1}), 10.0, {});
    CHECK(bounded_modulo_v(along, v).bounded);

    const ExtentSystem sys = futile();
    const auto t = integrate(sys.field(), Vec::Zero(4), 50.0, {});
    CHECK(bounded_modulo_v(t, *sys.translation_direction()).bounded);
}

TEST_CASE("projected equilibrium matches the closed form") {
    const ExtentSystem sys = futile();
    const EquilibriumCertificate cert = find_projected_equilibrium(sys, Vec::Zero(4), {});
    REQUIRE(cert.zeta.has_value());
    CHECK((*cert.zeta - builtin::futile_cycle_equilibrium()).lpNorm<Eigen::Infinity>() <= 1e-9);
    const double c = (7 - std::sqrt(41.0)) / 4;
    CHECK(cert.r == doctest::Approx(2 * c).epsilon(1e-9));  // f(xi) = (C,C,C,C) = 2C v
    CHECK(std::abs(cert.xi.sum()) <= 1e-12);
    CHECK(cert.projected_residual <= 1e-10);
    CHECK(cert.span_residual <= 1e-10);
    const double q = 2 * c / (1 - c);
    const double a = -c - q / 2;
    CHECK((cert.xi - vec({a + 2 * c + q, a + c + q, a + c, a})).lpNorm<Eigen::Infinity>() <= 1e-9);
}

TEST_CASE("zero field equilibrium is the projected start") {
    const Vec v = vec({1, 1}) / std::sqrt(2.0);
    const auto cert = find_projected_equilibrium(fields::constant(Vec::Zero(2)), v, vec({3, 1}), {});
    CHECK((cert.xi - vec({1, -1})).norm() <= 1e-12);
    CHECK(cert.r == 0.0);
}

TEST_CASE("unbounded projected flow does not certify") {
    EquilibriumOptions opts;
    opts.max_time = 50.0;
    CHECK_THROWS_AS(find_projected_equilibrium(fields::constant(vec({1, 2})), vec({1, 0}), vec({0, 0}), {}, opts),
                    NumericalError);
}

TEST_CASE("uniqueness") {
    const ExtentSystem sys = futile();
    const Vec v = *sys.translation_direction();
    const auto starts = draw_projected_starts(sys.sampling_region(), v, 5, 42);
    REQUIRE(starts.size() == 5);
    for (const auto& s : starts) CHECK(std::abs(s.dot(v)) <= 1e-12);
    std::vector<EquilibriumCertificate> certs;
    const auto rep = verify_unique_equilibrium(sys.field(), v, starts, {}, {}, 1e-6, &certs);
    CHECK(rep.verdict);
    CHECK(certs.size() == 5);
    CHECK(rep.metrics.at("diameter") <= 1e-9);

    const auto single = verify_unique_equilibrium(sys.field(), v, {starts.front()}, {});
    CHECK(single.verdict);
    CHECK(single.metrics.at("diameter") == 0.0);

    const Vec bv = vec({1, 1}) / std::sqrt(2.0);
    const auto bi = verify_unique_equilibrium(fields::bistable_plane(), bv, {vec({1, -1}), vec({-1, 1})}, {});
    CHECK_FALSE(bi.verdict);
    CHECK(bi.metrics.at("diameter") == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("equilibrium orbit is affine") {
    const ExtentSystem sys = futile();
    const auto cert = find_projected_equilibrium(sys, Vec::Zero(4), {});
    const auto rep = verify_equilibrium_orbit(sys.field(), *sys.translation_direction(), cert, 5.0, {});
    CHECK(rep.verdict);
    CHECK(rep.metrics.at("span_relative_spread") <= 1e-8);
}

TEST_CASE("extent and species trajectories agree") {
    const ExtentSystem sys = futile();
    const auto rep = verify_extent_species_consistency(sys.network(), sys.sigma(), Vec::Zero(4), 20.0, {});
    CHECK(rep.verdict);

    // A -> B: S(t) = (e^-t, 1 - e^-t), x(t) = 1 - e^-t.
    const ReactionNetwork ab = builtin::a_to_b();
    const auto ab_rep = verify_extent_species_consistency(ab, builtin::a_to_b_sigma(), vec({0}), 5.0, {});
    CHECK(ab_rep.verdict);
    const ExtentSystem abs(ab, builtin::a_to_b_sigma());
    const auto t = integrate(abs.field(), vec({0}), 5.0, {});
    CHECK(std::abs(t.back()(0) - (1 - std::exp(-5.0))) <= 1e-8);
}

TEST_CASE("stoichiometric class membership") {
    const ReactionNetwork net = builtin::futile_cycle();
    const Vec sigma = builtin::futile_cycle_sigma();
    CHECK(in_stoichiometric_class(net, sigma, sigma));
    CHECK(in_stoichiometric_class(net, sigma, builtin::futile_cycle_equilibrium()));
    CHECK_FALSE(in_stoichiometric_class(net, sigma, vec({2, 0, 1, 1, 0, 0})));
    for (const auto& rho : draw_class_members(net, sigma, 10, 5)) {
        CHECK(in_stoichiometric_class(net, sigma, rho));
        CHECK(rho.minCoeff() >= 0.0);
    }
}

TEST_CASE("class convergence") {
    const ReactionNetwork net = builtin::futile_cycle();
    const Vec sigma = builtin::futile_cycle_sigma();
    auto rhos = draw_class_members(net, sigma, 3, 9);
    rhos.push_back(sigma);
    EquilibriumCertificate cert;
    const auto rep = stoichiometric_class_convergence(net, sigma, rhos, {}, {}, &cert);
    CHECK(rep.verdict);
    CHECK(rep.metrics.at("max_conservation_defect") <= 1e-9);
    REQUIRE(cert.zeta.has_value());
    CHECK((cert.zeta->segment(2, 1) + cert.zeta->segment(4, 1))(0) == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(stoichiometric_class_convergence(net, sigma, {vec({2, 0, 1, 1, 0, 0})}, {}),
                    PreconditionError);
    CHECK_THROWS_AS(stoichiometric_class_convergence(net, sigma, {vec({1, 0, 1, 1, 0})}, {}), PreconditionError);
}

TEST_CASE("degenerate futile cycle") {
    const ReactionNetwork net = builtin::futile_cycle();
    const auto fd = degenerate_case_convergence(net, vec({0.5, 0.5, 1, 0, 0, 0}), {});  // F = D = 0
    CHECK(fd.verdict);
    CHECK(fd.metrics.count("max_drop_Q") == 1);

    const auto ec = degenerate_case_convergence(net, vec({0.5, 0.5, 0, 1, 0, 0}), {});  // E = C = 0
    CHECK(ec.verdict);
    CHECK(ec.metrics.count("max_drop_P") == 1);

    CHECK_THROWS_AS(degenerate_case_convergence(net, builtin::futile_cycle_sigma(), {}), PreconditionError);
    CHECK_THROWS_AS(degenerate_case_convergence(builtin::a_to_b(), builtin::a_to_b_sigma(), {}), PreconditionError);
}
