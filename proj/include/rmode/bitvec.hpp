#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rmode/errors.hpp"
#include "rmode/probe.hpp"
#include "rmode/serialize.hpp"

namespace rmode {

/// Static bit-vector with constant-time access, rank and select.
///
/// Conventions used throughout the library:
///   rank_c(j)   = #{ p < j : B[p] = c }          (half-open, rank_c(0) = 0)
///   select_c(i) = position of the i-th c-bit      (1-indexed ordinal)
/// so rank_c(select_c(i)) = i - 1 and rank_c(select_c(i) + 1) = i.
///
/// Rank directory: absolute counts per 32768-bit superblock and 16-bit relative
/// counts per 512-bit block. Select keeps the block of every 256th one (and
/// zero), then binary-searches the rank directory and scans at most 8 words.
class BitVec {
public:
    static constexpr std::size_t kWordBits = 64;
    static constexpr std::size_t kBlockWords = 8;
    static constexpr std::size_t kBlockBits = kWordBits * kBlockWords;
    static constexpr std::size_t kSuperBlocks = 64;
    static constexpr std::size_t kSelectSample = 256;

    /// Append-only builder.
    class Builder {
    public:
        Builder() = default;
        explicit Builder(std::size_t reserve_bits) { words_.reserve((reserve_bits + 63) / 64); }

        void push_back(bool bit) {
            if (len_ % kWordBits == 0) words_.push_back(0);
            if (bit) words_.back() |= std::uint64_t{1} << (len_ % kWordBits);
            ++len_;
        }
        void append(bool bit, std::size_t count) {
            for (std::size_t i = 0; i < count; ++i) push_back(bit);
        }
        [[nodiscard]] std::size_t size() const noexcept { return len_; }
        BitVec build() && { return BitVec(std::move(words_), len_); }

    private:
        std::vector<std::uint64_t> words_;
        std::size_t len_ = 0;
    };

    BitVec() { build_directories(); }

    explicit BitVec(const std::vector<bool>& bits) {
        Builder b(bits.size());
        for (bool x : bits) b.push_back(x);
        *this = std::move(b).build();
    }

    /// Bits beyond `len` in the last word must be zero.
    BitVec(std::vector<std::uint64_t> words, std::size_t len) : words_(std::move(words)), len_(len) {
        if (words_.size() != (len_ + kWordBits - 1) / kWordBits) throw BuildError("BitVec: word count does not match length");
        if (len_ % kWordBits != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (len_ % kWordBits)) - 1;
        build_directories();
    }

    [[nodiscard]] std::size_t size() const noexcept { return len_; }
    [[nodiscard]] std::size_t ones() const noexcept { return ones_; }
    [[nodiscard]] std::size_t zeros() const noexcept { return len_ - ones_; }

    [[nodiscard]] bool access(std::size_t j) const {
        if (j >= len_) throw RangeError("BitVec::access: position " + std::to_string(j) + " >= length " + std::to_string(len_));
        probe::tick();
        return raw_access(j);
    }
    [[nodiscard]] bool operator[](std::size_t j) const { return access(j); }

    [[nodiscard]] std::size_t rank1(std::size_t j) const {
        if (j > len_) throw RangeError("BitVec::rank: position " + std::to_string(j) + " > length " + std::to_string(len_));
        probe::tick();
        return raw_rank1(j);
    }
    [[nodiscard]] std::size_t rank0(std::size_t j) const { return j - rank1(j); }
    [[nodiscard]] std::size_t rank(bool c, std::size_t j) const { return c ? rank1(j) : rank0(j); }

    [[nodiscard]] std::size_t select1(std::size_t i) const {
        if (i == 0 || i > ones_) throw NotFoundError("BitVec::select1: ordinal " + std::to_string(i) + " not in [1," + std::to_string(ones_) + "]");
        probe::tick();
        return raw_select1(i);
    }
    [[nodiscard]] std::size_t select0(std::size_t i) const {
        if (i == 0 || i > zeros()) throw NotFoundError("BitVec::select0: ordinal " + std::to_string(i) + " not in [1," + std::to_string(zeros()) + "]");
        probe::tick();
        return raw_select0(i);
    }
    [[nodiscard]] std::size_t select(bool c, std::size_t i) const { return c ? select1(i) : select0(i); }

    // Unchecked, uncounted primitives for composite structures that account
    // for their own probes.
    [[nodiscard]] bool raw_access(std::size_t j) const noexcept { return (words_[j / kWordBits] >> (j % kWordBits)) & 1U; }

    [[nodiscard]] std::size_t raw_rank1(std::size_t j) const noexcept {
        const std::size_t blk = j / kBlockBits;
        std::size_t r = block_rank1(blk);
        const std::size_t w_end = j / kWordBits;
        for (std::size_t w = blk * kBlockWords; w < w_end; ++w) r += static_cast<std::size_t>(std::popcount(words_[w]));
        if (j % kWordBits != 0) r += static_cast<std::size_t>(std::popcount(words_[w_end] & ((std::uint64_t{1} << (j % kWordBits)) - 1)));
        return r;
    }

    [[nodiscard]] std::size_t raw_select1(std::size_t i) const noexcept { return select_impl<true>(i - 1); }
    [[nodiscard]] std::size_t raw_select0(std::size_t i) const noexcept { return select_impl<false>(i - 1); }

    /// Payload plus directories.
    [[nodiscard]] std::size_t size_in_bits() const noexcept {
        return words_.size() * 64 + super_.size() * 64 + block_.size() * 16 + (sample1_.size() + sample0_.size()) * 32 + 64;
    }

    [[nodiscard]] const std::vector<std::uint64_t>& words() const noexcept { return words_; }

    void serialize(io::Writer& w) const {
        w.put<std::uint64_t>(len_);
        for (auto x : words_) w.put(x);
    }

    static BitVec deserialize(io::Reader& r) {
        const auto len = r.get<std::uint64_t>();
        if (len > (std::uint64_t{1} << 40)) throw CorruptIndex("BitVec length out of bounds");
        std::vector<std::uint64_t> words((len + 63) / 64);
        for (auto& x : words) x = r.get<std::uint64_t>();
        if (len % 64 != 0 && !words.empty() && (words.back() >> (len % 64)) != 0) throw CorruptIndex("BitVec padding bits set");
        return BitVec(std::move(words), static_cast<std::size_t>(len));
    }

    friend bool operator==(const BitVec& a, const BitVec& b) { return a.len_ == b.len_ && a.words_ == b.words_; }

private:
    [[nodiscard]] std::size_t num_blocks() const noexcept { return (words_.size() + kBlockWords - 1) / kBlockWords; }

    [[nodiscard]] std::size_t block_rank1(std::size_t blk) const noexcept { return super_[blk / kSuperBlocks] + block_[blk]; }

    template <bool One>
    [[nodiscard]] std::size_t block_rank(std::size_t blk) const noexcept {
        if constexpr (One) return block_rank1(blk);
        else return blk * kBlockBits - block_rank1(blk);
    }

    template <bool One>
    [[nodiscard]] std::uint64_t word_of(std::size_t w) const noexcept {
        if constexpr (One) return words_[w];
        else {
            std::uint64_t x = ~words_[w];
            const std::size_t valid = len_ - w * kWordBits;
            if (valid < kWordBits) x &= (std::uint64_t{1} << valid) - 1;
            return x;
        }
    }

    static std::size_t select_in_word(std::uint64_t x, std::size_t r) noexcept {
        for (std::size_t k = 0; k < r; ++k) x &= x - 1;
        return static_cast<std::size_t>(std::countr_zero(x));
    }

    // r is the 0-based ordinal of the wanted bit.
    template <bool One>
    [[nodiscard]] std::size_t select_impl(std::size_t r) const noexcept {
        const auto& samples = One ? sample1_ : sample0_;
        const std::size_t s = r / kSelectSample;
        std::size_t lo = samples[s];
        std::size_t hi = s + 1 < samples.size() ? samples[s + 1] : num_blocks() - 1;
        // largest block b in [lo, hi] with block_rank(b) <= r
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo + 1) / 2;
            if (block_rank<One>(mid) <= r) lo = mid;
            else hi = mid - 1;
        }
        r -= block_rank<One>(lo);
        for (std::size_t w = lo * kBlockWords;; ++w) {
            const std::uint64_t x = word_of<One>(w);
            const auto pc = static_cast<std::size_t>(std::popcount(x));
            if (r < pc) return w * kWordBits + select_in_word(x, r);
            r -= pc;
        }
    }

    void build_directories() {
        const std::size_t nb = num_blocks();
        super_.assign(nb / kSuperBlocks + 1, 0);
        block_.assign(nb + 1, 0);
        sample1_.clear();
        sample0_.clear();
        std::size_t total = 0;
        std::size_t zeros_seen = 0;
        for (std::size_t b = 0; b < nb; ++b) {
            if (b % kSuperBlocks == 0) super_[b / kSuperBlocks] = total;
            block_[b] = static_cast<std::uint16_t>(total - super_[b / kSuperBlocks]);
            for (std::size_t w = b * kBlockWords; w < std::min(words_.size(), (b + 1) * kBlockWords); ++w) {
                const auto ones = static_cast<std::size_t>(std::popcount(words_[w]));
                const std::size_t valid = std::min(kWordBits, len_ - w * kWordBits);
                const std::size_t zs = valid - ones;
                // record the block holding every kSelectSample-th bit
                for (std::size_t k = (total + kSelectSample - 1) / kSelectSample * kSelectSample; k < total + ones; k += kSelectSample)
                    sample1_.push_back(static_cast<std::uint32_t>(b));
                for (std::size_t k = (zeros_seen + kSelectSample - 1) / kSelectSample * kSelectSample; k < zeros_seen + zs; k += kSelectSample)
                    sample0_.push_back(static_cast<std::uint32_t>(b));
                total += ones;
                zeros_seen += zs;
            }
        }
        if (nb % kSuperBlocks == 0) super_[nb / kSuperBlocks] = total;
        block_[nb] = static_cast<std::uint16_t>(total - super_[nb / kSuperBlocks]);
        ones_ = total;
    }

    std::vector<std::uint64_t> words_;
    std::size_t len_ = 0;
    std::size_t ones_ = 0;
    std::vector<std::uint64_t> super_;
    std::vector<std::uint16_t> block_;
    std::vector<std::uint32_t> sample1_;
    std::vector<std::uint32_t> sample0_;
};

}  // namespace rmode
