#include <doctest.h>

#include <cmath>

#include "samstream/baselines.hpp"
#include "samstream/rng.hpp"
#include "samstream/sam_regressor.hpp"

using namespace samstream;

TEST_CASE("an empty window predicts zero and still learns") {
    WindowKnn wk(10, 1);
    const Sample s{{1.0}, 7.0, 0};
    CHECK(wk.step(s) == 0.0);
    CHECK(wk.window().size() == 1);
}

TEST_CASE("a one-sample window predicts its target") {
    WindowKnn wk(10, 1);
    wk.step({{0.0}, 7.0, 0});
    CHECK(wk.predict(std::vector<double>{5.0}) == 7.0);
}

TEST_CASE("the window is FIFO beyond capacity") {
    WindowKnn wk(2, 1);
    for (int i = 0; i < 3; ++i) wk.step({{double(i)}, double(i), i});
    REQUIRE(wk.window().size() == 2);
    CHECK(wk.window().front().index == 1);
    CHECK(wk.window().back().index == 2);
}

TEST_CASE("an unbounded window matches SAM's STM while it never shrinks") {
    Rng rng(21);
    const std::size_t dims = 3;
    SamConfig cfg;
    cfg.k = 3;
    cfg.min_stm = 32;  // committed no-shrink run for this seed

    std::vector<Sample> warmup;
    std::int64_t next = 0;
    auto draw = [&] {
        Sample s;
        s.index = next++;
        s.features = {rng.uniform01(), rng.uniform01(), rng.uniform01()};
        s.target = s.features[0] + 2.0 * s.features[1] - s.features[2];
        return s;
    };
    for (std::size_t i = 0; i < cfg.min_stm; ++i) warmup.push_back(draw());

    WindowKnn wk(1u << 20, cfg.k);
    for (const auto& s : warmup) wk.step(s);
    SamRegressor sam(warmup, cfg);

    (void)dims;
    int compared = 0;
    for (int i = 0; i < 400; ++i) {
        const Sample s = draw();
        const double wk_pred = wk.step(s);
        const auto r = sam.step(s);
        CHECK(wk_pred - s.target == r.stm_residual);
        ++compared;
        if (r.shrunk) break;  // the equivalence is only promised until a shrink
    }
    CHECK(compared >= 200);
}

TEST_CASE("zero-initialized linear model predicts zero first") {
    OnlineLinear lin(3, 0.05);
    CHECK(lin.predict(std::vector<double>{1.0, 2.0, 3.0}) == 0.0);
}

TEST_CASE("SGD on y=2x converges to the slope") {
    Rng rng(33);
    OnlineLinear lin(1, 0.05);
    for (int i = 0; i < 500; ++i) {
        const double x = rng.uniform01();
        lin.step({{x}, 2.0 * x, i});
    }
    CHECK(std::abs(lin.weights()[0] - 2.0) < 0.1);
}

TEST_CASE("a zero learning rate never changes the model") {
    Rng rng(34);
    OnlineLinear lin(2, 0.0);
    for (int i = 0; i < 50; ++i) {
        lin.step({{rng.uniform01(), rng.uniform01()}, rng.normal(0.0, 5.0), i});
    }
    CHECK(lin.weights()[0] == 0.0);
    CHECK(lin.weights()[1] == 0.0);
    CHECK(lin.bias() == 0.0);
}

TEST_CASE("divergence raises an error instead of emitting garbage") {
    OnlineLinear lin(1, 1e160);
    bool threw = false;
    try {
        for (int i = 0; i < 10; ++i) lin.step({{1e160}, 1.0, i});
    } catch (const std::runtime_error&) {
        threw = true;
    }
    CHECK(threw);
}
