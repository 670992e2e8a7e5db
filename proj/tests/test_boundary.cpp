#include <gtest/gtest.h>

#include <bit>
#include <random>
#include <sstream>

#include "rmode/boundary.hpp"
#include "rmode/text.hpp"
#include "support/corpus.hpp"

using rmode::BoundarySet;
using rmode::DenseIms2;
using rmode::ValueSearch;

namespace {

struct FreqView {
    rmode::Text text;
    rmode::FreqTable table;
    DenseIms2 dense;

    explicit FreqView(const std::vector<std::uint32_t>& symbols, std::uint32_t sigma)
        : text(symbols, sigma), table(text), dense(DenseIms2::from_view(table.transformed_view())) {}
};

FreqView figure() { return FreqView(testing_support::letters(testing_support::kFigure), 7); }
FreqView aba() { return FreqView({0, 1, 0}, 2); }

std::uint32_t ceil_log2(std::uint32_t m) { return m <= 1 ? 0 : static_cast<std::uint32_t>(std::bit_width(m - 1)); }

void check_paths(const BoundarySet& b, std::size_t n) {
    for (std::uint32_t k = 0; k < b.m(); ++k) {
        const auto& p = b.path(k);
        ASSERT_EQ(p.size(), 2 * n);
        ASSERT_EQ(p.ones(), n);
        ASSERT_EQ(p.zeros(), n);
        const auto cuts = b.decode_path(k);
        ASSERT_EQ(cuts.size(), n);
        for (std::size_t i = 1; i < n; ++i) ASSERT_LE(cuts[i], cuts[i - 1]);
        if (k > 0) {
            const auto lower = b.decode_path(k - 1);
            for (std::size_t i = 0; i < n; ++i) ASSERT_GE(cuts[i], lower[i]) << "boundaries not nested";
        }
    }
}

void check_round_trip(const DenseIms2& d) {
    const BoundarySet b(d.view());
    check_paths(b, d.n());
    const std::uint32_t limit = ceil_log2(d.m());
    for (std::size_t i = 0; i < d.n(); ++i)
        for (std::size_t j = 0; j < d.n(); ++j) {
            const auto v = b.value(i, j, ValueSearch::BinarySearch);
            ASSERT_EQ(v.level, d.at(i, j)) << i << "," << j;
            ASSERT_LE(v.probes, limit);
            ASSERT_EQ(b.value(i, j, ValueSearch::TwoStage).level, d.at(i, j));
        }
}

}  // namespace

TEST(Boundary, ConstantZeroView) {
    const DenseIms2 d(2, 1);
    const BoundarySet b(d.view());
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            EXPECT_TRUE(b.at_least(i, j, 0));
            EXPECT_EQ(b.value(i, j).level, 0u);
            EXPECT_EQ(b.value(i, j).probes, 0u);
        }
    check_paths(b, 2);
}

TEST(Boundary, AbaRoundTrip) {
    const auto v = aba();
    EXPECT_EQ(v.dense.n(), 3u);
    EXPECT_EQ(v.dense.m(), 2u);
    check_round_trip(v.dense);
}

TEST(Boundary, FigureRoundTripWithinTwoProbes) {
    const auto v = figure();
    EXPECT_EQ(v.dense.m(), 4u);
    check_round_trip(v.dense);
}

TEST(Boundary, RandomStaircaseValueProbes) {
    const DenseIms2 d = rmode::random_staircase(256, 256, 7, 0.02);
    const BoundarySet b(d.view());
    std::mt19937_64 rng(1);
    for (int q = 0; q < 2000; ++q) {
        const std::size_t i = rng() % 256, j = rng() % 256;
        const auto v = b.value(i, j);
        ASSERT_EQ(v.level, d.at(i, j));
        ASSERT_LE(v.probes, 8u);
        ASSERT_EQ(b.value(i, j, ValueSearch::TwoStage).level, d.at(i, j));
    }
}

TEST(Boundary, AtLeast) {
    const auto a = aba();
    const BoundarySet b(a.dense.view());
    EXPECT_TRUE(b.at_least(2, 2, 1));
    EXPECT_FALSE(b.at_least(2, 1, 1));
    EXPECT_THROW((void)b.at_least(2, 2, 2), rmode::RangeError);
    EXPECT_THROW((void)b.at_least(3, 0, 0), rmode::RangeError);

    const auto f = figure();
    const BoundarySet fb(f.dense.view());
    std::mt19937_64 rng(2);
    for (int q = 0; q < 500; ++q) {
        const std::size_t i = rng() % 16, j = rng() % 16;
        const auto k = static_cast<std::uint32_t>(rng() % 4);
        ASSERT_EQ(fb.at_least(i, j, k), f.dense.at(i, j) >= k);
        ASSERT_TRUE(fb.at_least(i, j, 0));
    }
}

TEST(Boundary, AtLeastIsOneProbe) {
    const auto f = figure();
    const BoundarySet b(f.dense.view());
    const rmode::probe::Scope scope;
    (void)b.at_least(5, 9, 2);
    EXPECT_EQ(scope.count(), 1u);
}

TEST(Boundary, MinRowAtLeast) {
    const auto a = aba();
    const BoundarySet b(a.dense.view());
    EXPECT_EQ(b.min_row_at_least(0, 0), 0u);
    EXPECT_EQ(b.min_row_at_least(2, 1), 2u);
    EXPECT_EQ(b.min_row_at_least(0, 1), std::nullopt);
    EXPECT_THROW((void)b.min_row_at_least(0, 2), rmode::RangeError);
}

TEST(Boundary, MinRowAtLeastExhaustive) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t n = 1 + seed * 3;
        const DenseIms2 d = rmode::random_staircase(n, 9, seed, 0.1);
        const BoundarySet b(d.view());
        for (std::size_t r = 0; r < n; ++r)
            for (std::uint32_t h = 0; h < 9; ++h) {
                std::optional<std::size_t> expected;
                for (std::size_t x = 0; x < n; ++x)
                    if (d.at(r, x) >= h) {
                        expected = x;
                        break;
                    }
                ASSERT_EQ(b.min_row_at_least(r, h), expected) << "seed " << seed << " r=" << r << " h=" << h;
            }
    }
}

TEST(Boundary, ExhaustiveRoundTripSmall) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const std::size_t n = 1 + (seed * 7) % 64;
        const std::uint32_t m = 1 + static_cast<std::uint32_t>(seed % 13);
        check_round_trip(rmode::random_staircase(n, m, seed, 0.08));
    }
}

TEST(Boundary, SampledRoundTripLarge) {
    const DenseIms2 d = rmode::random_staircase(1024, 40, 5);
    const BoundarySet b(d.view());
    std::mt19937_64 rng(5);
    for (int q = 0; q < 2000; ++q) {
        const std::size_t i = rng() % 1024, j = rng() % 1024;
        ASSERT_EQ(b.value(i, j).level, d.at(i, j));
        ASSERT_EQ(b.value(i, j, ValueSearch::TwoStage).level, d.at(i, j));
    }
}

TEST(Boundary, CoarseUpperWindow) {
    DenseIms2 small(8, 2);
    const BoundarySet sb(small.view());
    EXPECT_EQ(sb.coarse_upper(3, 3), 0u);
    EXPECT_LT(small.at(3, 3), sb.step());

    const DenseIms2 d = rmode::random_staircase(128, 128, 9, 0.03);
    const BoundarySet b(d.view());
    EXPECT_EQ(b.step(), 7u);
    std::mt19937_64 rng(3);
    for (int q = 0; q < 200; ++q) {
        const std::size_t r = rng() % 128, c = rng() % 128;
        const std::uint32_t h = b.coarse_upper(r, c);
        ASSERT_EQ(h % b.step(), 0u);
        ASSERT_LE(d.at(r, c), h);
        ASSERT_LT(h, d.at(r, c) + b.step());
    }

    bool hit = false;
    for (std::size_t r = 0; r < 128 && !hit; ++r)
        for (std::size_t c = 0; c < 128; ++c)
            if (d.at(r, c) > 0 && d.at(r, c) % b.step() == 0) {
                EXPECT_EQ(b.coarse_upper(r, c), d.at(r, c));
                hit = true;
                break;
            }
    EXPECT_TRUE(hit);
}

TEST(Boundary, RejectsNonMonotoneView) {
    DenseIms2 d(3, 4);
    d.at(0, 0) = 2;
    try {
        const BoundarySet b(d.view());
        FAIL() << "expected BuildError";
    } catch (const rmode::BuildError& e) {
        EXPECT_NE(std::string(e.what()).find("(0,1)"), std::string::npos);
    }
}

TEST(Boundary, SerializeRoundTrip) {
    const DenseIms2 d = rmode::random_staircase(100, 12, 4);
    const BoundarySet b(d.view());
    std::stringstream ss;
    rmode::io::Writer w(ss);
    b.serialize(w);
    rmode::io::Reader r(ss);
    const BoundarySet back = BoundarySet::deserialize(r);
    for (std::size_t i = 0; i < 100; ++i)
        for (std::size_t j = 0; j < 100; ++j) ASSERT_EQ(back.value(i, j, ValueSearch::TwoStage).level, d.at(i, j));
}

TEST(Boundary, SpacePerCell) {
    for (std::size_t n : {256u, 512u, 1024u}) {
        const DenseIms2 d = rmode::random_staircase(n, 16, n);
        const BoundarySet b(d.view());
        const double per_cell = static_cast<double>(b.size_in_bits()) / static_cast<double>(n * 16);
        EXPECT_LE(per_cell, 4.0) << "n=" << n;
    }
}
