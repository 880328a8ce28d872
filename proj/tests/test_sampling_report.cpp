#include <doctest.h>

#include <cmath>
#include <limits>

#include "monocrn/builtin.hpp"
#include "monocrn/cone_order.hpp"
#include "monocrn/extent_system.hpp"
#include "monocrn/report.hpp"
#include "monocrn/sampling.hpp"
#include "monocrn/serialize.hpp"
#include "test_util.hpp"

using namespace monocrn;
using testutil::vec;

namespace {

SamplingRegion unit_box(Eigen::Index n) {
    SamplingRegion r;
    r.center = Vec::Zero(n);
    r.half_width = 1.0;
    return r;
}

}  // namespace

TEST_CASE("draws stay in the box and respect the predicate") {
    SamplingRegion r = unit_box(3);
    r.center = vec({1, 2, 3});
    r.accept = [](const Vec& x) { return x(0) > 1.0; };
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        const Vec x = r.draw(rng);
        CHECK((x - r.center).lpNorm<Eigen::Infinity>() <= 1.0);
        CHECK(x(0) > 1.0);
    }
}

TEST_CASE("empty region throws") {
    SamplingRegion r = unit_box(2);
    r.accept = [](const Vec&) { return false; };
    r.max_attempts = 100;
    Rng rng(1);
    CHECK_THROWS_AS(r.draw(rng), NumericalError);
}

TEST_CASE("pair draws are deterministic in the seed") {
    const SamplingRegion r = unit_box(3);
    const auto a = draw_ordered_pairs(r, {1, 1, 1}, 20, 99);
    const auto b = draw_ordered_pairs(r, {1, 1, 1}, 20, 99);
    const auto c = draw_ordered_pairs(r, {1, 1, 1}, 20, 100);
    REQUIRE(a.size() == 20);
    REQUIRE(b.size() == 20);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].xi1 == b[i].xi1);
        CHECK(a[i].xi2 == b[i].xi2);
        CHECK(a[i].index == i);
        differs = differs || a[i].xi1 != c[i].xi1;
    }
    CHECK(differs);
}

TEST_CASE("ordered pairs are ordered") {
    const OrthantOrder o({1, -1, 1}, vec({1, -1, 1}));
    PairSamplerOptions opts;
    opts.zero_prob = 0.5;
    const auto pairs = draw_ordered_pairs(unit_box(3), o.signs(), 200, 5, opts);
    for (const auto& p : pairs) {
        CHECK(p.ordered);
        CHECK(o.leq(p.xi2, p.xi1));
        CHECK(o.lt(p.xi2, p.xi1));
        CHECK((p.xi1 - p.xi2).lpNorm<Eigen::Infinity>() <= 0.2 + 1e-15);
    }
}

TEST_CASE("free pairs with translations") {
    const Vec v = vec({1, 1}) / std::sqrt(2.0);
    PairSamplerOptions opts;
    opts.translate_fraction = 1.0;
    for (const auto& p : draw_free_pairs(unit_box(2), v, 30, 8, opts)) {
        const Vec d = p.xi1 - p.xi2;
        CHECK(std::abs(d(0) - d(1)) <= 1e-12);
        CHECK(std::abs(d.dot(v)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("report metrics and verdict") {
    VerificationReport r;
    CHECK(r.verdict);
    r.metric_min("gap", 3.0);
    r.metric_min("gap", 1.0);
    r.metric_min("gap", 2.0);
    r.metric_max("worst", -1.0);
    r.metric_max("worst", 4.0);
    CHECK(r.metrics.at("gap") == 1.0);
    CHECK(r.metrics.at("worst") == 4.0);
    r.violation(0.5);
    r.violation(0.1);
    CHECK(r.max_violation == 0.5);
    r.fail(Witness{});
    CHECK_FALSE(r.verdict);
}

TEST_CASE("report json") {
    VerificationReport r;
    r.test = "order";
    r.metrics["nan"] = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < 40; ++i) r.fail(Witness{i, 0.5, "q", 1.0, {{"xi", vec({1, 2})}}});
    const nlohmann::json j = to_json(r);
    CHECK(j["test"] == "order");
    CHECK(j["verdict"] == false);
    CHECK(j["n_witnesses"] == 40);
    CHECK(j["witnesses"].size() == 25);
    CHECK(j["metrics"]["nan"].is_null());
    CHECK(j["witnesses"][3]["sample"] == 3);

    const nlohmann::json w = to_json(Witness{});
    CHECK(w["time"].is_null());
}

TEST_CASE("vector json round trip") {
    const Vec x = vec({0.1, -2.5e-300, 1.0 / 3.0});
    CHECK(vec_from_json(vec_to_json(x)) == x);
    CHECK(vec_from_json(nlohmann::json::parse(vec_to_json(x).dump())) == x);
}

TEST_CASE("fnv1a") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("hypothesis report json") {
    const ExtentSystem sys(builtin::futile_cycle(), builtin::futile_cycle_sigma());
    const nlohmann::json j = to_json(analyze_hypotheses(sys));
    CHECK(j["rank"] == 3);
    CHECK(j["all_hold"] == true);
    CHECK(j["kernel"][0] == nlohmann::json::array({"1", "1", "1", "1"}));
    CHECK(j["semipositive_conservation_laws"].size() == 3);
}
