#include "doctest.h"

#include <cmath>
#include <map>

#include "localint/estimators.hpp"
#include "localint/simgen.hpp"
#include "test_util.hpp"

using namespace localint;

TEST_CASE("gen_basic shape and determinism") {
    const DgpConfig cfg{.n_units = 5000, .n_contexts = 400, .seed = 11};
    const auto a = gen_basic(cfg);
    const auto b = gen_basic(cfg);
    CHECK(a.ground_truth == 1.0);
    CHECK(a.dataset.size() == 5000);
    CHECK(a.dataset.covariate_names() == std::vector<std::string>{"x_1", "w"});
    CHECK(a.dataset.signature_names() == std::vector<std::string>{"i_ctx"});
    for (std::size_t i = 0; i < a.dataset.size(); ++i) {
        CHECK(a.dataset.record(i).y == b.dataset.record(i).y);
        CHECK(a.dataset.record(i).t == b.dataset.record(i).t);
        CHECK(a.dataset.record(i).sig == b.dataset.record(i).sig);
    }
    // different seed actually changes the data
    const auto c = gen_basic({.n_units = 5000, .n_contexts = 400, .seed = 12});
    bool any_diff = false;
    for (std::size_t i = 0; i < 100; ++i)
        if (c.dataset.record(i).y != a.dataset.record(i).y) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("gen_basic marginal treatment rate is near one half") {
    const auto g = gen_basic({.n_units = 60000, .n_contexts = 5000, .seed = 3});
    double treated = 0;
    for (const auto& r : g.dataset.records()) treated += r.t;
    CHECK(treated / 60000.0 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("gen_basic empirical P(T | x, u) tracks x + u") {
    // recover u per context from the treatment frequencies at known x
    const auto g = gen_basic({.n_units = 200000, .n_contexts = 100, .seed = 17});
    // with few large contexts, per-(x, context) treated fractions approach x+u
    std::map<std::pair<std::int64_t, int>, std::pair<double, double>> cells;
    for (const auto& r : g.dataset.records()) {
        auto& c = cells[{*r.context, static_cast<int>(std::lround(r.x[0] * 10))}];
        c.first += r.t;
        c.second += 1;
    }
    // each context's four x-cells must be internally consistent: the
    // difference between the x=0.4 and x=0.1 cells is 0.3
    int checked = 0;
    for (std::int64_t ctx = 0; ctx < 100; ++ctx) {
        const auto lo = cells.find({ctx, 1});
        const auto hi = cells.find({ctx, 4});
        if (lo == cells.end() || hi == cells.end()) continue;
        if (lo->second.second < 200 || hi->second.second < 200) continue;
        const double diff = hi->second.first / hi->second.second -
                            lo->second.first / lo->second.second;
        CHECK(diff == doctest::Approx(0.3).epsilon(0.35));
        ++checked;
    }
    CHECK(checked > 50);
}

TEST_CASE("gen_basic conditional outcome mean follows 4x + t + 4w") {
    const auto g = gen_basic({.n_units = 100000, .n_contexts = 9000, .seed = 23});
    double err_sum = 0;
    std::size_t n = 0;
    std::map<int, std::pair<double, double>> byw;
    for (const auto& r : g.dataset.records()) {
        const double w = r.x[1];
        const double resid = r.y - (4 * r.x[0] + r.t + 4 * w);
        err_sum += resid;
        ++n;
        (void)byw;
    }
    CHECK(std::fabs(err_sum / n) < 0.02);
}

TEST_CASE("gen_t_dependent never treats units above the clamp bound") {
    const auto g = gen_t_dependent({.n_units = 50000, .n_contexts = 4500, .seed = 29});
    for (const auto& r : g.dataset.records())
        if (r.t == 1) CHECK(r.sig[0] <= 0.9 + 1e-12);
}

TEST_CASE("gen_t_dependent with zero adjustment reduces to gen_basic") {
    const DgpConfig cfg{.n_units = 3000, .n_contexts = 300, .seed = 31, .t_adjustment = 0.0};
    const auto a = gen_basic(cfg);
    const auto b = gen_t_dependent(cfg);
    for (std::size_t i = 0; i < a.dataset.size(); ++i) {
        CHECK(a.dataset.record(i).y == b.dataset.record(i).y);
        CHECK(a.dataset.record(i).sig == b.dataset.record(i).sig);
    }
}

TEST_CASE("gen_product ground truth matches the closed form") {
    const auto g = gen_product({.n_units = 2000, .n_contexts = 200, .seed = 37});
    const double closed = (2.1 / 1.1 + 2.2 / 1.2 + 2.3 / 1.3 + 2.4 / 1.4) / 4.0;
    CHECK(g.ground_truth == doctest::Approx(closed).epsilon(1e-12));
    CHECK(g.ground_truth == doctest::Approx(1.8065).epsilon(1e-4));
}

TEST_CASE("counterexample pair: identical tables, different causal effects") {
    const auto pair = gen_counterexample_pair(500, 41, 2.0, 1.0, 0.5, 1.0);
    CHECK(pair.tace1 == 1.0);
    CHECK(pair.tace2 == 1.5);
    for (std::size_t i = 0; i < 500; ++i) {
        CHECK(pair.model1.record(i).y == pair.model2.record(i).y);  // bit-identical
        CHECK(pair.model1.record(i).t == pair.model2.record(i).t);
        CHECK(pair.model1.record(i).x == pair.model2.record(i).x);
        CHECK(pair.model1.record(i).sig == pair.model2.record(i).sig);
    }
    CHECK(pair.tace2 - pair.tace1 == doctest::Approx(0.5));

    SUBCASE("estimators cannot distinguish the pair") {
        const double a = naive_difference(pair.model1).point;
        const double b = naive_difference(pair.model2).point;
        CHECK(std::fabs(a - b) < 1e-12);
    }
    SUBCASE("violated parameter constraint errors") {
        CHECK_THROWS_AS(gen_counterexample_pair(10, 1, 2.0, 1.0, 0.6, 1.0), ValidationError);
    }
    SUBCASE("c = 1 errors") {
        CHECK_THROWS_AS(gen_counterexample_pair(10, 1, 1.0, 1.0, 0.5, 0.5), ValidationError);
    }
}

TEST_CASE("toy_linear example 1 recovers alpha exactly") {
    const auto r = toy_linear(1, {.alpha = 2, .beta = 3, .gamma = 1, .rho = 4, .delta = 0});
    CHECK(r.y1 == 5.0);
    CHECK(r.y3 == 3.0);
    CHECK(r.recovered_alpha == 2.0);
    CHECK(r.bias == 0.0);
}

TEST_CASE("toy_linear example 2 biased by delta") {
    const auto r = toy_linear(2, {.alpha = 2, .beta = 3, .gamma = 1, .rho = 4, .delta = 0.5});
    CHECK(r.recovered_alpha == doctest::Approx(1.5));
    CHECK(r.bias == doctest::Approx(-0.5));

    const auto zero = toy_linear(2, {.alpha = 2, .beta = 3, .gamma = 1, .rho = 4, .delta = 0});
    const auto one = toy_linear(1, {.alpha = 2, .beta = 3, .gamma = 1, .rho = 4, .delta = 0.9});
    CHECK(zero.y1 == one.y1);
    CHECK(zero.y2 == one.y2);
    CHECK(zero.y3 == one.y3);
}

TEST_CASE("inject_interference") {
    testutil::Builder b;
    b.t = {1, 0};
    b.y = {1.0, 2.0};
    b.x_names = {"density"};
    b.x = {{2.0, 3.0}};
    b.sig_names = {"i_a"};
    b.sig = {{0.5, 0.25}};
    const auto ds = b.build();

    SUBCASE("strength 0 is the identity") {
        const auto out = inject_interference(ds, "i_a", "density", 0.0);
        CHECK(out.record(0).y == 1.0);
        CHECK(out.record(1).y == 2.0);
    }
    SUBCASE("additive shift by strength * sig * scale") {
        const auto out = inject_interference(ds, "i_a", "density", 2.0);
        CHECK(out.record(0).y == doctest::Approx(1.0 + 2.0 * 0.5 * 2.0));
        CHECK(out.record(1).y == doctest::Approx(2.0 + 2.0 * 0.25 * 3.0));
    }
    SUBCASE("constant signature and unit scale shifts both arms equally") {
        testutil::Builder c;
        c.t = {1, 0, 1, 0};
        c.y = {3, 1, 4, 2};
        c.x_names = {"one"};
        c.x = {{1, 1, 1, 1}};
        c.sig_names = {"i_c"};
        c.sig = {{0.5, 0.5, 0.5, 0.5}};
        const auto base = c.build();
        const double before = naive_difference(base).point;
        const auto shifted = inject_interference(base, "i_c", "one", 10.0);
        CHECK(naive_difference(shifted).point == doctest::Approx(before).epsilon(1e-12));
    }
    SUBCASE("missing column errors") {
        CHECK_THROWS_AS(inject_interference(ds, "nope", "density", 1.0), SchemaError);
    }
}
