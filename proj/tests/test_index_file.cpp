#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "rmode/index_file.hpp"
#include "support/corpus.hpp"

using rmode::EnumConfig;
using rmode::EnumIndex;
using rmode::IndexFile;
using rmode::Strategy;
using rmode::Tokenization;

namespace {

std::string write(const EnumIndex& idx, Tokenization mode, const std::vector<std::string>& dict) {
    std::ostringstream os;
    IndexFile::write(os, idx, mode, dict);
    return os.str();
}

}  // namespace

TEST(Tokenize, Bytes) {
    const auto t = rmode::tokenize(testing_support::kFigure, Tokenization::Bytes);
    EXPECT_EQ(t.symbols.size(), 16u);
    EXPECT_EQ(t.dictionary, (std::vector<std::string>{"a", "b", "c", "f", "d", "g"}));
    EXPECT_EQ(t.symbols[4], 3u);
}

TEST(Tokenize, Lines) {
    const auto t = rmode::tokenize("red\ngreen\r\nred\n\nblue", Tokenization::Lines);
    EXPECT_EQ(t.symbols, (std::vector<std::uint32_t>{0, 1, 0, 2, 3}));
    EXPECT_EQ(t.dictionary, (std::vector<std::string>{"red", "green", "", "blue"}));
    EXPECT_TRUE(rmode::tokenize("", Tokenization::Lines).symbols.empty());
}

TEST(Tokenize, U32le) {
    const std::string raw("\x07\x00\x00\x00\x00\x01\x00\x00\x07\x00\x00\x00", 12);
    const auto t = rmode::tokenize(raw, Tokenization::U32le);
    EXPECT_EQ(t.symbols, (std::vector<std::uint32_t>{0, 1, 0}));
    EXPECT_EQ(t.dictionary, (std::vector<std::string>{"7", "256"}));
    EXPECT_THROW(rmode::tokenize(std::string("abc"), Tokenization::U32le), rmode::BuildError);
}

TEST(IndexFile, RoundTripAnswersIdentically) {
    const auto s = testing_support::random_symbols(700, 9, true, 31);
    for (auto backend : {rmode::Backend::Boundary, rmode::Backend::Sk, rmode::Backend::Blocks, rmode::Backend::Oracle}) {
        EnumConfig cfg;
        cfg.mode.backend = backend;
        cfg.mode.epsilon = rmode::Fraction::parse("1/3");
        const EnumIndex idx(rmode::Text(s, 9), cfg);
        const std::string bytes = write(idx, Tokenization::Bytes, {});
        ASSERT_EQ(bytes.substr(0, 6), "RMODE1");
        const IndexFile back = IndexFile::parse(bytes);
        EXPECT_EQ(back.index.config().mode.backend, backend);
        EXPECT_EQ(back.index.config().mode.epsilon.den, 3u);
        std::mt19937_64 rng(31);
        for (int q = 0; q < 1000; ++q) {
            std::size_t l = rng() % s.size(), r = rng() % s.size();
            if (l > r) std::swap(l, r);
            const auto st = static_cast<Strategy>(q % 4);
            const auto a = idx.enumerate(l, r, st), b = back.index.enumerate(l, r, st);
            ASSERT_EQ(a.positions, b.positions);
            ASSERT_EQ(a.freq, b.freq);
            ASSERT_EQ(idx.mode_index().leftmost_mode(l, r).position, back.index.mode_index().leftmost_mode(l, r).position);
        }
        EXPECT_EQ(write(back.index, Tokenization::Bytes, {}), bytes);
    }
}

TEST(IndexFile, DictionaryRendersSymbols) {
    const auto tok = rmode::tokenize(testing_support::kFigure, Tokenization::Bytes);
    const EnumIndex idx(rmode::Text(tok.symbols, static_cast<std::uint32_t>(tok.dictionary.size())), EnumConfig{});
    const IndexFile f = IndexFile::parse(write(idx, tok.mode, tok.dictionary));
    EXPECT_EQ(f.render(0), "a");
    EXPECT_EQ(f.render(5), "g");
    EXPECT_EQ(f.mode, Tokenization::Bytes);
}

TEST(IndexFile, DetectsCorruption) {
    const EnumIndex idx(rmode::Text(testing_support::random_symbols(100, 4, false, 2), 4), EnumConfig{});
    const std::string good = write(idx, Tokenization::Bytes, {});
    std::string flipped = good;
    flipped[flipped.size() / 2] ^= 0x10;
    EXPECT_THROW(IndexFile::parse(flipped), rmode::CorruptIndex);
    std::string magic = good;
    magic[0] = 'X';
    EXPECT_THROW(IndexFile::parse(magic), rmode::CorruptIndex);
    EXPECT_THROW(IndexFile::parse(good.substr(0, good.size() - 1)), rmode::CorruptIndex);
    EXPECT_THROW(IndexFile::parse(""), rmode::CorruptIndex);
}
