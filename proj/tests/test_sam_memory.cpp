#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "samstream/rng.hpp"
#include "samstream/sam_memory.hpp"

using namespace samstream;

namespace {

MemorySet memory_1d(std::initializer_list<std::pair<double, double>> xy, std::int64_t first = 0) {
    MemorySet m;
    std::int64_t idx = first;
    for (auto [x, y] : xy) m.push_back({{x}, y, idx++});
    return m;
}

bool same_samples(const MemorySet& a, const MemorySet& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].index != b[i].index) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("candidate windows halve down to the minimum") {
    CHECK(candidate_windows(200, 50) == std::vector<std::size_t>{200, 100, 50});
    CHECK(candidate_windows(64, 64) == std::vector<std::size_t>{64});
    CHECK(candidate_windows(50, 30) == std::vector<std::size_t>{50});
}

TEST_CASE("window_itte of a constant stream is zero") {
    MemorySet w;
    for (int i = 0; i < 20; ++i) w.push_back({{double(i)}, 3.5, i});
    CHECK(window_itte(w, 1) == 0.0);
}

TEST_CASE("window_itte hand-run: colinear features, targets 0,0,1") {
    const MemorySet w = memory_1d({{0.0, 0.0}, {1.0, 0.0}, {2.0, 1.0}});
    // second sample predicted 0 (residual 0), third predicted 0 (residual 1)
    CHECK(window_itte(w, 1) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("window_itte refuses windows of at most k samples") {
    const MemorySet w = memory_1d({{0.0, 0.0}, {1.0, 0.0}});
    CHECK_THROWS_AS(window_itte(w, 2), std::logic_error);
}

TEST_CASE("window_itte equals the brute-force prequential loop") {
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t size = 4 + static_cast<std::size_t>(rng.uniform01() * 40);
        const MemorySet w = oracle::random_memory(rng, size, 3);
        const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform01() * 3);
        CHECK(window_itte(w, k) == doctest::Approx(oracle::window_itte_bruteforce(w, k)).epsilon(1e-12));
    }
}

TEST_CASE("adapt_stm keeps the full window when all candidates tie") {
    SamMemories mem;
    mem.min_stm = 4;
    for (int i = 0; i < 16; ++i) mem.stm.push_back({{double(i)}, 1.0, i});

    const auto r = adapt_stm(mem, 1);
    CHECK(r.new_length == 16);
    CHECK(r.discarded.empty());
    CHECK(mem.stm.size() == 16);
}

TEST_CASE("adapt_stm drops the contradicting first half") {
    SamMemories mem;
    mem.min_stm = 8;
    // first half y = x, second half y = -x over the same feature range
    for (int i = 0; i < 8; ++i) {
        const double x = double(i % 8);
        mem.stm.push_back({{x}, x, i});
    }
    for (int i = 8; i < 16; ++i) {
        const double x = double(i % 8);
        mem.stm.push_back({{x}, -x, i});
    }

    const auto r = adapt_stm(mem, 1);
    CHECK(r.new_length == 8);
    REQUIRE(r.discarded.size() == 8);
    CHECK(r.discarded.front().index == 0);
    CHECK(r.discarded.back().index == 7);
    CHECK(mem.stm.front().index == 8);
}

TEST_CASE("adapt_stm with a minimum-sized window is the identity") {
    SamMemories mem;
    mem.min_stm = 6;
    for (int i = 0; i < 6; ++i) mem.stm.push_back({{double(i)}, double(i), i});
    const auto r = adapt_stm(mem, 1);
    CHECK(r.new_length == 6);
    CHECK(r.discarded.empty());
}

TEST_CASE("adapt_stm picks the from-scratch argmin on random streams") {
    Rng rng(77);
    for (int trial = 0; trial < 25; ++trial) {
        SamMemories mem;
        mem.min_stm = 5;
        const std::size_t size = 10 + static_cast<std::size_t>(rng.uniform01() * 50);
        MemorySet stm = oracle::random_memory(rng, size, 2);
        mem.stm = stm;

        double best = kInfinity;
        std::size_t best_len = 0;
        for (std::size_t len : candidate_windows(size, 5)) {
            const double e = oracle::window_itte_bruteforce(stm.suffix(len), 2);
            if (e < best) {
                best = e;
                best_len = len;
            }
        }
        const auto r = adapt_stm(mem, 2);
        CHECK(r.new_length == best_len);
        CHECK(mem.stm.size() == best_len);
    }
}

TEST_CASE("clean_one worked example in one dimension") {
    const MemorySet b = memory_1d({{0.0, 0.0}, {1.0, 0.0}});
    MemorySet a;
    a.push_back({{0.5}, 5.0, 100});
    a.push_back({{2.0}, 5.0, 101});

    const MemorySet cleaned = clean_one(a, b, b[0], 1);
    REQUIRE(cleaned.size() == 1);
    CHECK(cleaned[0].index == 101);  // outside the radius, kept
}

TEST_CASE("clean_one trivial cases") {
    const MemorySet b = memory_1d({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}});

    SUBCASE("empty target set stays empty") {
        CHECK(clean_one(MemorySet{}, b, b[0], 1).empty());
    }
    SUBCASE("samples outside the radius survive") {
        const MemorySet a = memory_1d({{5.0, 99.0}, {-5.0, -99.0}}, 100);
        CHECK(same_samples(clean_one(a, b, b[0], 1), a));
    }
    SUBCASE("reference set of k samples is refused") {
        const MemorySet tiny = memory_1d({{0.0, 0.0}});
        CHECK_THROWS_AS(clean_one(MemorySet{}, tiny, tiny[0], 1), std::logic_error);
    }
    SUBCASE("duplicated pivot features make cleaning a no-op") {
        MemorySet dup;
        dup.push_back({{1.0}, 0.0, 0});
        dup.push_back({{1.0}, 3.0, 1});
        const MemorySet a = memory_1d({{1.0, 50.0}}, 100);
        CHECK(same_samples(clean_one(a, dup, dup[0], 1), a));
    }
}

TEST_CASE("clean_set keeps a set consistent with its generator") {
    // same smooth 1-d map, zero noise: nothing contradicts
    MemorySet a, b;
    for (int i = 0; i < 12; ++i) {
        const double x = 0.05 + 0.1 * i;
        a.push_back({{x}, 2.0 * x, i});
    }
    for (int i = 0; i < 12; ++i) {
        const double x = 0.1 * i;
        b.push_back({{x}, 2.0 * x, 100 + i});
    }
    CHECK(same_samples(clean_set(a, b, 2), a));
}

TEST_CASE("clean_set removes an extreme outlier inside the feature range") {
    MemorySet a, b;
    for (int i = 0; i < 12; ++i) {
        const double x = 0.1 * i;
        b.push_back({{x}, x, 100 + i});
    }
    a.push_back({{0.55}, 0.55, 0});
    a.push_back({{0.65}, 40.0, 1});  // wildly inconsistent target
    const MemorySet cleaned = clean_set(a, b, 2);
    REQUIRE(cleaned.size() == 1);
    CHECK(cleaned[0].index == 0);
}

TEST_CASE("clean_one and clean_set match the brute-force fold exactly") {
    Rng rng(123);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform01() * 3);
        const std::size_t dims = 1 + static_cast<std::size_t>(rng.uniform01() * 5);
        const std::size_t bs = k + 1 + static_cast<std::size_t>(rng.uniform01() * 29);
        const std::size_t as = static_cast<std::size_t>(rng.uniform01() * 30);
        const MemorySet b = oracle::random_memory(rng, bs, dims);
        MemorySet a;
        {
            Rng sub(rng.next_u64());
            MemorySet raw = oracle::random_memory(sub, as, dims);
            for (const auto& s : raw) {
                Sample shifted = s;
                shifted.index += 1000;  // disjoint index range
                a.push_back(shifted);
            }
        }

        const auto& pivot = b[static_cast<std::size_t>(rng.uniform01() * double(bs))];
        CHECK(same_samples(clean_one(a, b, pivot, k), oracle::clean_one_bruteforce(a, b, pivot, k)));
        CHECK(same_samples(clean_set(a, b, k), oracle::clean_set_bruteforce(a, b, k)));
    }
}

TEST_CASE("compress_ltm under capacity is the identity") {
    const MemorySet m = memory_1d({{0.0, 0.0}, {1.0, 1.0}});
    CHECK(same_samples(compress_ltm(m, 5), m));
}

TEST_CASE("compress_ltm removes from the dense cluster, never the outpost") {
    const MemorySet m = memory_1d({{0.0, 0.0}, {0.1, 0.0}, {0.2, 0.0}, {10.0, 0.0}});
    const MemorySet c = compress_ltm(m, 3);
    REQUIRE(c.size() == 3);
    CHECK(c[0].index == 0);  // the 0.1 point has the minimal two-neighbor sum
    CHECK(c[1].index == 2);
    CHECK(c[2].index == 3);
}

TEST_CASE("compress_ltm removes one of a coincident pair first") {
    MemorySet m;
    m.push_back({{0.0}, 0.0, 0});
    m.push_back({{4.0}, 0.0, 1});
    m.push_back({{4.0}, 0.0, 2});
    m.push_back({{9.0}, 0.0, 3});
    m.push_back({{14.0}, 0.0, 4});
    const MemorySet c = compress_ltm(m, 4);
    REQUIRE(c.size() == 4);
    // ties on the pair resolve to the smaller index
    CHECK(c[0].index == 0);
    CHECK(c[1].index == 2);
}

TEST_CASE("compress_ltm removes exactly the overflow count") {
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t size = 3 + static_cast<std::size_t>(rng.uniform01() * 40);
        const MemorySet m = oracle::random_memory(rng, size, 2);
        const std::size_t cap = 1 + static_cast<std::size_t>(rng.uniform01() * double(size));
        const MemorySet c = compress_ltm(m, cap);
        CHECK(c.size() == std::min(size, cap));
    }
}

TEST_CASE("absorb_discarded basics") {
    const std::size_t k = 2;

    SUBCASE("empty discard set with a consistent LTM changes nothing") {
        SamMemories mem;
        mem.min_stm = 4;
        mem.max_ltm = 100;
        for (int i = 0; i < 8; ++i) mem.stm.push_back({{0.1 * i}, 0.2 * i, 10 + i});
        for (int i = 0; i < 4; ++i) mem.ltm.push_back({{0.05 + 0.1 * i}, 0.1 + 0.2 * i, i});
        const MemorySet before = mem.ltm;
        absorb_discarded(mem, MemorySet{}, k);
        CHECK(same_samples(mem.ltm, before));
    }

    SUBCASE("discards consistent with the STM all reach the LTM") {
        SamMemories mem;
        mem.min_stm = 4;
        mem.max_ltm = 100;
        for (int i = 0; i < 8; ++i) mem.stm.push_back({{0.1 * i}, 0.2 * i, 10 + i});
        MemorySet o_t;
        for (int i = 0; i < 3; ++i) o_t.push_back({{0.05 + 0.1 * i}, 0.1 + 0.2 * i, i});
        absorb_discarded(mem, o_t, k);
        for (const auto& s : o_t) CHECK(mem.ltm.contains_index(s.index));
    }

    SUBCASE("overflow beyond capacity is compressed away exactly") {
        SamMemories mem;
        mem.min_stm = 4;
        mem.max_ltm = 10;
        for (int i = 0; i < 8; ++i) mem.stm.push_back({{0.1 * i}, 0.2 * i, 100 + i});
        // 13 consistent LTM samples; union stays 13 = max_ltm + 3
        for (int i = 0; i < 13; ++i) mem.ltm.push_back({{0.03 + 0.07 * i}, 0.06 + 0.14 * i, i});
        absorb_discarded(mem, MemorySet{}, k);
        CHECK(mem.ltm.size() == 10);
    }
}
