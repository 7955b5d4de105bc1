#include "logdet/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace logdet;

// Known-answer vectors distributed with the Random123 library.
TEST(Philox, KnownAnswerZero) {
    const auto out = philox4x32({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(out[0], 0x6627e8d5u);
    EXPECT_EQ(out[1], 0xe169c58du);
    EXPECT_EQ(out[2], 0xbc57ac4cu);
    EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerOnes) {
    const auto out = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    EXPECT_EQ(out[0], 0x408f276du);
    EXPECT_EQ(out[1], 0x41c83b0eu);
    EXPECT_EQ(out[2], 0xa20bc7c6u);
    EXPECT_EQ(out[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi) {
    const auto out = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
    EXPECT_EQ(out[0], 0xd16cfe09u);
    EXPECT_EQ(out[1], 0x94fdccebu);
    EXPECT_EQ(out[2], 0x5001e420u);
    EXPECT_EQ(out[3], 0x24126ea1u);
}

TEST(KeyedRng, SameKeySameStream) {
    KeyedRng a(50, Stream::queries, 7), b(50, Stream::queries, 7);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(KeyedRng, DistinctKeysDiffer) {
    std::set<std::uint64_t> firsts;
    for (std::uint64_t idx = 0; idx < 50; ++idx) firsts.insert(KeyedRng(50, Stream::queries, idx).next_u64());
    firsts.insert(KeyedRng(51, Stream::queries, 0).next_u64());
    firsts.insert(KeyedRng(50, Stream::sketch, 0).next_u64());
    EXPECT_EQ(firsts.size(), 52u);
}

TEST(KeyedRng, UniformRange) {
    KeyedRng rng(1, Stream::test_data, 0);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        const double w = rng.uniform_open_low();
        EXPECT_GT(w, 0.0);
        EXPECT_LE(w, 1.0);
    }
}

TEST(KeyedRng, BelowIsInRangeAndCoversAll) {
    KeyedRng rng(2, Stream::test_data, 0);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) {
        const auto x = rng.below(7);
        ASSERT_LT(x, 7u);
        ++hits[x];
    }
    for (int h : hits) EXPECT_NEAR(h, 1000, 150);
}

TEST(KeyedRng, NormalMoments) {
    KeyedRng rng(3, Stream::test_data, 0);
    const int count = 200000;
    double s1 = 0, s2 = 0, s4 = 0;
    for (int i = 0; i < count; ++i) {
        const double x = rng.normal();
        s1 += x;
        s2 += x * x;
        s4 += x * x * x * x;
    }
    EXPECT_NEAR(s1 / count, 0.0, 0.01);
    EXPECT_NEAR(s2 / count, 1.0, 0.01);
    EXPECT_NEAR(s4 / count, 3.0, 0.06);
}

TEST(KeyedRng, RademacherBalanced) {
    KeyedRng rng(4, Stream::test_data, 0);
    double sum = 0;
    for (int i = 0; i < 100000; ++i) {
        const double r = rng.rademacher();
        ASSERT_TRUE(r == 1.0 || r == -1.0);
        sum += r;
    }
    EXPECT_LT(std::abs(sum), 5 * std::sqrt(100000.0));
}
