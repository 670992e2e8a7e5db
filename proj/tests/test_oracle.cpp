#include <gtest/gtest.h>

#include <random>

#include "rmode/oracle.hpp"
#include "support/corpus.hpp"

namespace oracle = rmode::oracle;
using testing_support::letters;
using testing_support::random_symbols;

TEST(Oracle, FreqExamples) {
    EXPECT_EQ(oracle::freq_naive(letters("abcb"), 0, 3), 2u);
    EXPECT_EQ(oracle::freq_naive(letters("abcb"), 2, 2), 1u);
    EXPECT_EQ(oracle::freq_naive(letters(testing_support::kFigure), 0, 15), 4u);
    EXPECT_THROW((void)oracle::freq_naive(letters("ab"), 1, 0), rmode::RangeError);
}

TEST(Oracle, ModesExamples) {
    EXPECT_EQ(oracle::modes_naive(letters(testing_support::kFigure), 0, 15), (std::set<std::uint32_t>{0, 1, 2}));
    EXPECT_EQ(oracle::modes_naive(letters("aaaa"), 0, 3), (std::set<std::uint32_t>{0}));
    EXPECT_EQ(oracle::modes_naive(letters("ab"), 0, 1), (std::set<std::uint32_t>{0, 1}));
}

TEST(Oracle, LeftmostExamples) {
    EXPECT_EQ(oracle::leftmost_naive(letters("abcb"), 0, 3), 1u);
    EXPECT_EQ(oracle::leftmost_naive(letters("abcb"), 2, 2), 2u);
    EXPECT_EQ(oracle::leftmost_naive(letters("ab"), 0, 1), 0u);
}

TEST(Oracle, ModeIndexSetExamples) {
    EXPECT_EQ(oracle::mode_index_set_naive(letters(testing_support::kFigure), 0, 15), (std::set<std::size_t>{12, 14, 15}));
    EXPECT_EQ(oracle::mode_index_set_naive(letters("abab"), 1, 1), (std::set<std::size_t>{1}));
    EXPECT_EQ(oracle::mode_index_set_naive(letters("abab"), 0, 3), (std::set<std::size_t>{2, 3}));
}

TEST(Oracle, HAndBExamples) {
    const auto h_abc = oracle::h_naive(letters("abc"));
    EXPECT_EQ(h_abc[1], (std::vector<std::int64_t>{0, 1, 2}));
    const auto h_aaaa = oracle::h_naive(letters("aaaa"));
    EXPECT_EQ(h_aaaa[2], (std::vector<std::int64_t>{-1, 0, 1, 2}));
    const auto b = oracle::b_naive(letters(testing_support::kFigure));
    for (std::size_t i = 0; i < 16; ++i) EXPECT_TRUE(b[i][i]);
}

TEST(Oracle, ModesOccurExactlyFreqTimes) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto s = random_symbols(30, 4, seed % 2, seed);
        for (std::size_t l = 0; l < s.size(); ++l)
            for (std::size_t r = l; r < s.size(); ++r) {
                const auto f = oracle::freq_naive(s, l, r);
                for (std::uint32_t c : oracle::modes_naive(s, l, r))
                    ASSERT_EQ(static_cast<std::uint32_t>(std::count(s.begin() + static_cast<std::ptrdiff_t>(l), s.begin() + static_cast<std::ptrdiff_t>(r) + 1, c)), f);
            }
    }
}

TEST(Oracle, FreqMatrixMatchesDirectCount) {
    const auto s = random_symbols(40, 5, true, 2);
    const auto f = oracle::freq_matrix(s);
    for (std::size_t l = 0; l < 40; ++l)
        for (std::size_t r = l; r < 40; ++r) ASSERT_EQ(f[l][r], oracle::freq_naive(s, l, r));
}

// Splitting a range into two parts: each mode of the whole is a mode of the
// first part or occurs in the second.
TEST(Oracle, DecompositionLemma) {
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = random_symbols(48, 1 + seed % 6, seed % 2, seed);
        for (int q = 0; q < 200; ++q) {
            std::size_t l = rng() % 48, r = rng() % 48;
            if (l > r) std::swap(l, r);
            if (l == r) continue;
            const std::size_t split = l + rng() % (r - l);
            const auto first = oracle::modes_naive(s, l, split);
            const auto second = oracle::counts(s, split + 1, r);
            for (std::uint32_t x : oracle::modes_naive(s, l, r)) ASSERT_TRUE(first.count(x) || second.count(x));
        }
    }
}

// Growing a range without raising the mode frequency keeps the old modes.
TEST(Oracle, ExtensionLemma) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto s = random_symbols(32, 3, seed % 2, seed + 50);
        const auto f = oracle::freq_matrix(s);
        for (std::size_t l1 = 0; l1 < 32; ++l1)
            for (std::size_t r1 = l1; r1 < 32; ++r1)
                for (std::size_t l2 = 0; l2 <= l1; ++l2)
                    for (std::size_t r2 = r1; r2 < 32; r2 += 3) {
                        if (f[l1][r1] != f[l2][r2]) continue;
                        const auto outer = oracle::modes_naive(s, l2, r2);
                        for (std::uint32_t x : oracle::modes_naive(s, l1, r1)) ASSERT_TRUE(outer.count(x));
                    }
    }
}
