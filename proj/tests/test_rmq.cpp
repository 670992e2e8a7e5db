#include <gtest/gtest.h>

#include <random>
#include <set>

#include "rmode/rmq.hpp"

using rmode::RmqIndex;
using rmode::TieBreak;

TEST(Rmq, Query) {
    EXPECT_EQ(RmqIndex({5}).query(0, 0), 0u);
    EXPECT_EQ(RmqIndex({1, 3, 2}).query(0, 2), 1u);
    EXPECT_EQ(RmqIndex({2, 2}).query(0, 1), 0u);
    EXPECT_EQ(RmqIndex({2, 2}, TieBreak::Rightmost).query(0, 1), 1u);
    EXPECT_THROW((void)RmqIndex({1, 2}).query(1, 0), rmode::RangeError);
    EXPECT_THROW((void)RmqIndex({1, 2}).query(0, 2), rmode::RangeError);
}

TEST(Rmq, ThresholdReportExamples) {
    const RmqIndex a({1, 3, 2, 3});
    auto rep = a.threshold_report(0, 3, 3);
    EXPECT_EQ(rep.indices, (std::vector<std::size_t>{1, 3}));

    rep = a.threshold_report(2, 1, 0);
    EXPECT_TRUE(rep.indices.empty());

    rep = a.threshold_report(0, 3, 4);
    EXPECT_TRUE(rep.indices.empty());
    EXPECT_EQ(rep.calls, 1u);
}

TEST(Rmq, ExhaustiveArgmax) {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t n = 1 + rng() % 64;
        std::vector<std::int32_t> v(n);
        for (auto& x : v) x = static_cast<std::int32_t>(rng() % 6) - 1;
        const RmqIndex left(v, TieBreak::Leftmost), right(v, TieBreak::Rightmost);
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t r = l; r < n; ++r) {
                std::size_t lm = l, rm = l;
                for (std::size_t k = l; k <= r; ++k) {
                    if (v[k] > v[lm]) lm = k;
                    if (v[k] >= v[rm]) rm = k;
                }
                ASSERT_EQ(left.query(l, r), lm);
                ASSERT_EQ(right.query(l, r), rm);
            }
    }
}

TEST(Rmq, LongSequenceCrossesBlocks) {
    std::mt19937_64 rng(12);
    std::vector<std::int32_t> v(5000);
    for (auto& x : v) x = static_cast<std::int32_t>(rng() % 1000);
    const RmqIndex idx(v);
    for (int q = 0; q < 2000; ++q) {
        std::size_t l = rng() % v.size(), r = rng() % v.size();
        if (l > r) std::swap(l, r);
        const auto it = std::max_element(v.begin() + static_cast<std::ptrdiff_t>(l), v.begin() + static_cast<std::ptrdiff_t>(r) + 1);
        ASSERT_EQ(idx.query(l, r), static_cast<std::size_t>(it - v.begin()));
    }
}

TEST(Rmq, ThresholdReportRandom) {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t n = 1 + rng() % 256;
        std::vector<std::int32_t> v(n);
        for (auto& x : v) x = static_cast<std::int32_t>(rng() % 20);
        const std::int64_t l = static_cast<std::int64_t>(rng() % n), r = static_cast<std::int64_t>(rng() % n);
        const std::int64_t t = static_cast<std::int64_t>(rng() % 22);
        std::vector<std::size_t> expected;
        for (std::int64_t k = l; k <= r; ++k)
            if (v[static_cast<std::size_t>(k)] >= t) expected.push_back(static_cast<std::size_t>(k));
        for (TieBreak tie : {TieBreak::Leftmost, TieBreak::Rightmost}) {
            auto got = RmqIndex(v, tie).threshold_report(l, r, t);
            std::sort(got.indices.begin(), got.indices.end());
            ASSERT_EQ(got.indices, expected);
            ASSERT_LE(got.calls, 2 * got.indices.size() + 1);
        }
    }
}

TEST(Rmq, ThresholdReportWithOracle) {
    const RmqIndex a({4, 0, 4, 1, 4});
    const auto rep = a.threshold_report(0, 4, [](std::size_t k) { return k % 2 == 0; });
    std::set<std::size_t> got(rep.indices.begin(), rep.indices.end());
    EXPECT_EQ(got, (std::set<std::size_t>{0, 2, 4}));
}
