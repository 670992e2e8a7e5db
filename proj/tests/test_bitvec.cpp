#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "rmode/bitvec.hpp"

using rmode::BitVec;

namespace {

BitVec from_string(const std::string& s) {
    std::vector<bool> bits;
    for (char c : s) bits.push_back(c == '1');
    return BitVec(bits);
}

std::vector<bool> random_bits(std::size_t n, double density, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(density);
    std::vector<bool> bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = coin(rng);
    return bits;
}

}  // namespace

TEST(BitVec, Access) {
    const BitVec b = from_string("10110");
    EXPECT_TRUE(b.access(0));
    EXPECT_FALSE(b.access(1));
    EXPECT_THROW((void)b.access(5), rmode::RangeError);
    EXPECT_THROW((void)BitVec().access(0), rmode::RangeError);
}

TEST(BitVec, Rank) {
    const BitVec b = from_string("10110");
    EXPECT_EQ(b.rank1(0), 0u);
    EXPECT_EQ(b.rank1(3), 2u);
    EXPECT_EQ(b.rank1(4), 3u);
    EXPECT_EQ(b.rank0(5), 2u);
    EXPECT_THROW((void)b.rank1(6), rmode::RangeError);
}

TEST(BitVec, Select) {
    const BitVec b = from_string("10110");
    EXPECT_EQ(b.select1(2), 2u);
    EXPECT_EQ(b.select0(1), 1u);
    EXPECT_THROW((void)b.select1(4), rmode::NotFoundError);
    EXPECT_THROW((void)b.select1(0), rmode::NotFoundError);
    EXPECT_THROW((void)b.select0(3), rmode::NotFoundError);
}

class BitVecRandom : public ::testing::TestWithParam<std::size_t> {};

TEST_P(BitVecRandom, MatchesNaiveScan) {
    const std::size_t n = GetParam();
    for (double density : {0.02, 0.5, 0.97}) {
        const auto bits = random_bits(n, density, n * 31 + static_cast<std::uint64_t>(density * 100));
        const BitVec b(bits);
        ASSERT_EQ(b.size(), n);
        std::size_t ones = 0;
        std::vector<std::size_t> pos1, pos0;
        for (std::size_t j = 0; j <= n; ++j) {
            ASSERT_EQ(b.rank1(j), ones) << "j=" << j;
            ASSERT_EQ(b.rank1(j) + b.rank0(j), j);
            if (j < n) {
                ASSERT_EQ(b.access(j), bits[j]);
                (bits[j] ? pos1 : pos0).push_back(j);
                ones += bits[j];
            }
        }
        for (std::size_t i = 1; i <= pos1.size(); ++i) {
            ASSERT_EQ(b.select1(i), pos1[i - 1]);
            ASSERT_EQ(b.rank1(b.select1(i)), i - 1);
            ASSERT_EQ(b.rank1(b.select1(i) + 1), i);
        }
        for (std::size_t i = 1; i <= pos0.size(); ++i) {
            ASSERT_EQ(b.select0(i), pos0[i - 1]);
            ASSERT_FALSE(b.access(b.select0(i)));
        }

        std::mt19937_64 rng(n + 7);
        for (int q = 0; q < 1000; ++q) {
            switch (rng() % 3) {
                case 0: {
                    const std::size_t j = rng() % (n + 1);
                    ASSERT_EQ(b.rank0(j), j - std::count(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(j), true));
                    break;
                }
                case 1:
                    if (!pos1.empty()) {
                        const std::size_t i = 1 + rng() % pos1.size();
                        ASSERT_EQ(b.select(true, i), pos1[i - 1]);
                    }
                    break;
                default:
                    if (!pos0.empty()) {
                        const std::size_t i = 1 + rng() % pos0.size();
                        ASSERT_EQ(b.select(false, i), pos0[i - 1]);
                    }
            }
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Lengths, BitVecRandom, ::testing::Values(0, 1, 63, 64, 65, 4096, 100000));

TEST(BitVec, BuilderMatchesVectorConstructor) {
    const auto bits = random_bits(3000, 0.3, 5);
    BitVec::Builder builder(bits.size());
    for (bool bit : bits) builder.push_back(bit);
    EXPECT_EQ(std::move(builder).build(), BitVec(bits));

    BitVec::Builder runs(0);
    runs.append(true, 70);
    runs.append(false, 3);
    const BitVec r = std::move(runs).build();
    EXPECT_EQ(r.size(), 73u);
    EXPECT_EQ(r.ones(), 70u);
    EXPECT_EQ(r.select0(1), 70u);
}

TEST(BitVec, SerializeRoundTrip) {
    const BitVec b(random_bits(777, 0.4, 9));
    std::stringstream ss;
    rmode::io::Writer w(ss);
    b.serialize(w);
    rmode::io::Reader r(ss);
    const BitVec back = BitVec::deserialize(r);
    EXPECT_EQ(back, b);
    EXPECT_EQ(back.select1(100), b.select1(100));
}

TEST(BitVec, DeserializeRejectsTruncation) {
    const BitVec b(random_bits(300, 0.4, 3));
    std::stringstream ss;
    rmode::io::Writer w(ss);
    b.serialize(w);
    std::string bytes = ss.str();
    bytes.resize(bytes.size() - 3);
    std::stringstream cut(bytes);
    rmode::io::Reader r(cut);
    EXPECT_THROW((void)BitVec::deserialize(r), rmode::CorruptIndex);
}

TEST(BitVec, SpaceIsLinearPlusDirectories) {
    const BitVec b(random_bits(1 << 16, 0.5, 1));
    EXPECT_LE(b.size_in_bits(), static_cast<std::size_t>(1.25 * (1 << 16)));
}
