#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "hdc/item_memory.hpp"

using namespace hdc;

TEST_CASE("orthogonal mapping") {
    RandomSource rng(1);
    const ItemMemory mem = build_orthogonal(rng, 2, 10000);
    const double s = similarity(mem[0], mem[1]);
    CHECK(s > 0.485);
    CHECK(s < 0.515);

    RandomSource rng1(2);
    const ItemMemory single = build_orthogonal(rng1, 1, 64);
    CHECK(single.size() == 1);

    RandomSource a(3), b(3);
    const ItemMemory ma = build_orthogonal(a, 5, 256);
    const ItemMemory mb = build_orthogonal(b, 5, 256);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(ma[i] == mb[i]);
    }

    RandomSource rng2(4);
    CHECK_THROWS_AS(build_orthogonal(rng2, 0, 64), std::invalid_argument);
}

TEST_CASE("linear mapping follows the exact flip law") {
    RandomSource rng(5);
    const ItemMemory mem = build_linear(rng, 21, 10000);

    // 250 fresh flips per step: similarity to level 0 decreases by exactly
    // 0.025 per level and reaches exact orthogonality at the far end.
    for (std::size_t k = 0; k < 21; ++k) {
        CHECK(similarity(mem[0], mem[k]) == doctest::Approx(1.0 - k / 40.0).epsilon(1e-12));
    }
    CHECK(similarity(mem[0], mem[20]) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(similarity(mem[0], mem[1]) == doctest::Approx(0.975).epsilon(1e-12));

    // Pairwise, not just against level 0: flip sets are disjoint.
    for (std::size_t i = 0; i < 21; ++i) {
        for (std::size_t j = i; j < 21; ++j) {
            CHECK(hamming(mem[i], mem[j]) == (j - i) * 250);
        }
    }

    RandomSource rng2(6);
    const ItemMemory two = build_linear(rng2, 2, 10000);
    CHECK(similarity(two[0], two[1]) == doctest::Approx(0.5).epsilon(1e-12));

    RandomSource rng3(7);
    CHECK_THROWS_AS(build_linear(rng3, 1, 64), std::invalid_argument);
}

TEST_CASE("linear mapping distributes non-divisible flip budgets") {
    // D/2 = 5 flips over 3 steps: 2 + 2 + 1, totals exact.
    RandomSource rng(8);
    const ItemMemory mem = build_linear(rng, 4, 10);
    CHECK(hamming(mem[0], mem[1]) == 2);
    CHECK(hamming(mem[0], mem[2]) == 4);
    CHECK(hamming(mem[0], mem[3]) == 5);
    CHECK(hamming(mem[1], mem[3]) == 3);
}

TEST_CASE("local linear mapping: exact law inside splits, orthogonal across") {
    RandomSource rng(9);
    const ItemMemory mem = build_local_linear(rng, 21, 4, 10000);
    CHECK(mem.splits() == 4);

    // 5 steps per split at 1000 flips per step.
    CHECK(similarity(mem[0], mem[1]) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(similarity(mem[0], mem[5]) == doctest::Approx(0.5).epsilon(1e-12));
    for (std::uint32_t split = 0; split < 4; ++split) {
        const std::size_t base = split * 5;
        for (std::size_t i = 0; i <= 5; ++i) {
            for (std::size_t j = i; j <= 5; ++j) {
                CHECK(hamming(mem[base + i], mem[base + j]) == (j - i) * 1000);
            }
        }
    }

    // Levels at least two splits apart are pseudo-orthogonal.
    for (std::size_t i = 0; i <= 20; ++i) {
        for (std::size_t j = i; j <= 20; ++j) {
            if (j / 5 > i / 5 + 1 || (i == 10 && j == 20)) {
                CHECK(std::abs(similarity(mem[i], mem[j]) - 0.5) < 0.015);
            }
        }
    }
    CHECK(std::abs(similarity(mem[0], mem[10]) - 0.5) < 0.015);
}

TEST_CASE("local linear with one split is bit-identical to linear") {
    RandomSource a(10), b(10);
    const ItemMemory local = build_local_linear(a, 28, 1, 10000);
    const ItemMemory linear = build_linear(b, 28, 10000);
    REQUIRE(local.size() == linear.size());
    for (std::size_t i = 0; i < local.size(); ++i) {
        CHECK(local[i] == linear[i]);
    }
}

TEST_CASE("local linear with levels-1 splits is pairwise pseudo-orthogonal") {
    RandomSource rng(11);
    const ItemMemory mem = build_local_linear(rng, 21, 20, 10000);
    for (std::size_t i = 0; i < 21; ++i) {
        for (std::size_t j = i + 1; j < 21; ++j) {
            CHECK(std::abs(similarity(mem[i], mem[j]) - 0.5) < 0.015);
        }
    }
}

TEST_CASE("local linear split-size remainder goes to the lowest splits") {
    // 27 steps over 5 splits: 6,6,5,5,5. The first edge after level 0 sits at
    // level 6 and is exactly orthogonal to it.
    RandomSource rng(12);
    const ItemMemory mem = build_local_linear(rng, 28, 5, 10000);
    CHECK(similarity(mem[0], mem[6]) == doctest::Approx(0.5).epsilon(1e-12));
    // 5000 flips over 6 steps: 834, 834, 833, 833, 833, 833.
    CHECK(hamming(mem[0], mem[3]) == 2501);
}

TEST_CASE("local linear split count validation") {
    RandomSource rng(13);
    CHECK_THROWS_AS(build_local_linear(rng, 21, 0, 64), std::invalid_argument);
    CHECK_THROWS_AS(build_local_linear(rng, 21, 21, 64), std::invalid_argument);
    CHECK_NOTHROW(build_local_linear(rng, 21, 20, 64));
}

TEST_CASE("concatenation mapping") {
    // Midpoint between two edges copies half of each edge's components.
    RandomSource rng(14);
    const ItemMemory mid = build_concatenation(rng, 5, 3, 10000);
    CHECK(std::abs(similarity(mid[1], mid[0]) - 0.75) < 0.015);
    CHECK(std::abs(similarity(mid[1], mid[2]) - 0.75) < 0.015);

    // 28 levels, 10 edges: edges every 3 levels; a level adjacent to an edge
    // keeps two thirds of its components.
    RandomSource rng2(15);
    const ItemMemory mem = build_concatenation(rng2, 28, 10, 10000);
    CHECK(similarity(mem[1], mem[0]) > 0.8);
    CHECK(similarity(mem[26], mem[27]) > 0.8);
    // Edge levels hold the edge vectors verbatim: pairwise pseudo-orthogonal.
    for (std::size_t e = 0; e < 10; ++e) {
        for (std::size_t f = e + 1; f < 10; ++f) {
            CHECK(std::abs(similarity(mem[e * 3], mem[f * 3]) - 0.5) < 0.02);
        }
    }

    RandomSource rng3(16);
    CHECK_THROWS_AS(build_concatenation(rng3, 28, 1, 64), std::invalid_argument);
}

TEST_CASE("similarity profile") {
    RandomSource rng(17);
    const ItemMemory linear = build_linear(rng, 21, 10000);
    const auto profile = linear.similarity_profile(0);
    REQUIRE(profile.size() == 21);
    for (std::size_t k = 1; k < profile.size(); ++k) {
        CHECK(profile[k] <= profile[k - 1]);
    }
    CHECK(std::abs(profile.back() - 0.5) < 0.015);
    CHECK(profile[0] == doctest::Approx(1.0));

    RandomSource rng2(18);
    const ItemMemory local = build_local_linear(rng2, 21, 4, 10000);
    const auto local_profile = local.similarity_profile(0);
    for (std::size_t k = 5; k < local_profile.size(); ++k) {
        CHECK(std::abs(local_profile[k] - 0.5) < 0.025);
    }
    CHECK(local.similarity_profile(7)[7] == doctest::Approx(1.0));

    CHECK_THROWS_AS(local.similarity_profile(21), std::out_of_range);
}

TEST_CASE("builders are deterministic under a fixed seed") {
    for (int kind = 0; kind < 4; ++kind) {
        RandomSource a(100 + kind), b(100 + kind);
        auto build = [&](RandomSource& rng) {
            switch (kind) {
            case 0: return build_orthogonal(rng, 12, 512);
            case 1: return build_linear(rng, 12, 512);
            case 2: return build_local_linear(rng, 12, 3, 512);
            default: return build_concatenation(rng, 12, 4, 512);
            }
        };
        const ItemMemory ma = build(a);
        const ItemMemory mb = build(b);
        REQUIRE(ma.size() == mb.size());
        for (std::size_t i = 0; i < ma.size(); ++i) {
            CHECK(ma[i] == mb[i]);
        }
    }
}
